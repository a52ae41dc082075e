//! Exact algebra of eventually periodic subsets of ℕ = {1, 2, ...}.
//!
//! Every return-time set produced by a finite relation is eventually
//! periodic, so this type is closed under all the boolean operations and
//! shifts the deciders need. Values are kept in canonical form (minimal
//! tail period, then minimal threshold), which makes structural equality
//! coincide with set equality.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Exact rational in lowest terms, used for lower densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.max(1), den);
        if num == 0 {
            return Rational { num: 0, den: 1 };
        }
        Rational { num: num / g, den: den / g }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u64, b as u64) as usize * b
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NatSetError {
    #[error("progression step must be at least 1")]
    ZeroStep,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A subset of ℕ = {1, 2, ...} with eventually periodic membership.
///
/// Membership of `n ≤ threshold` is `prefix[n - 1]`; membership of
/// `n > threshold` is `residues[(n - threshold - 1) % period]`.
///
/// Canonical form: `period` is the minimal period of the tail and
/// `threshold` is the minimal threshold for that period, so two values
/// describe the same set iff they are field-identical. All constructors
/// canonicalize.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyPeriodicSet {
    threshold: usize,
    prefix: Vec<bool>,
    period: usize,
    residues: Vec<bool>,
}

impl EventuallyPeriodicSet {
    fn canonical(prefix: Vec<bool>, residues: Vec<bool>) -> Self {
        debug_assert!(!residues.is_empty());
        let p = minimal_period(&residues);
        let mut residues: Vec<bool> = residues[..p].to_vec();
        let mut prefix = prefix;
        while let Some(&last) = prefix.last() {
            if last == residues[p - 1] {
                prefix.pop();
                residues.rotate_right(1);
            } else {
                break;
            }
        }
        EventuallyPeriodicSet {
            threshold: prefix.len(),
            prefix,
            period: residues.len(),
            residues,
        }
    }

    /// Builds a set from any valid description of its membership: `f(n)`
    /// must be `period_hint`-periodic for all `n > threshold_hint`.
    pub fn from_periodic_fn(
        threshold_hint: usize,
        period_hint: usize,
        f: impl Fn(usize) -> bool,
    ) -> Self {
        assert!(period_hint >= 1);
        let prefix = (1..=threshold_hint).map(&f).collect();
        let residues = (threshold_hint + 1..=threshold_hint + period_hint).map(&f).collect();
        Self::canonical(prefix, residues)
    }

    pub fn empty() -> Self {
        Self::canonical(Vec::new(), vec![false])
    }

    pub fn naturals() -> Self {
        Self::canonical(Vec::new(), vec![true])
    }

    /// `{a + k·d : k ≥ 0} ∩ ℕ` for `d ≥ 1`.
    pub fn from_progression(a: usize, d: usize) -> Result<Self, NatSetError> {
        if d == 0 {
            return Err(NatSetError::ZeroStep);
        }
        Ok(Self::from_periodic_fn(a, d, |n| n >= a && n >= 1 && (n - a) % d == 0))
    }

    pub fn from_elements(elems: &[usize]) -> Self {
        assert!(elems.iter().all(|&e| e >= 1), "ℕ starts at 1");
        let t = elems.iter().copied().max().unwrap_or(0);
        Self::from_periodic_fn(t, 1, |n| elems.contains(&n))
    }

    /// `ℕ ∖ {excluded elements}`.
    pub fn cofinite_excluding(excluded: &[usize]) -> Self {
        assert!(excluded.iter().all(|&e| e >= 1), "ℕ starts at 1");
        let t = excluded.iter().copied().max().unwrap_or(0);
        Self::from_periodic_fn(t, 1, |n| !excluded.contains(&n))
    }

    pub fn evens() -> Self {
        Self::from_progression(2, 2).unwrap()
    }

    pub fn odds() -> Self {
        Self::from_progression(1, 2).unwrap()
    }

    /// `{n : n ≥ e}`.
    pub fn tail_from(e: usize) -> Self {
        assert!(e >= 1);
        Self::from_periodic_fn(e - 1, 1, |n| n >= e)
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn contains(&self, n: usize) -> bool {
        if n == 0 {
            return false;
        }
        if n <= self.threshold {
            self.prefix[n - 1]
        } else {
            self.residues[(n - self.threshold - 1) % self.period]
        }
    }

    fn binary_op(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let t = self.threshold.max(other.threshold);
        let p = lcm(self.period, other.period);
        Self::from_periodic_fn(t, p, |n| f(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.binary_op(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        Self::from_periodic_fn(self.threshold, self.period, |n| !self.contains(n))
    }

    /// `A − n = {k − n : k ∈ A, k > n}`.
    pub fn shift(&self, n: usize) -> Self {
        Self::from_periodic_fn(self.threshold.saturating_sub(n), self.period, |m| {
            self.contains(m + n)
        })
    }

    pub fn is_empty(&self) -> bool {
        !self.prefix.iter().any(|&b| b) && !self.residues.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.residues.iter().any(|&b| b)
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// Complement is finite iff the whole tail is present.
    pub fn is_cofinite(&self) -> bool {
        self.residues.iter().all(|&b| b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// `{n : n ≥ e} ⊆ self`.
    pub fn contains_tail_from(&self, e: usize) -> bool {
        assert!(e >= 1);
        self.is_cofinite() && (e..=self.threshold).all(|n| self.prefix[n - 1])
    }

    /// Least `e` with `{n : n ≥ e} ⊆ self`, if the set contains a full tail.
    pub fn minimal_tail_start(&self) -> Option<usize> {
        if !self.is_cofinite() {
            return None;
        }
        let mut e = self.threshold + 1;
        while e > 1 && self.prefix[e - 2] {
            e -= 1;
        }
        Some(e)
    }

    /// `None` when infinite.
    pub fn cardinality(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.prefix.iter().filter(|&&b| b).count())
        }
    }

    pub fn first_element(&self) -> Option<usize> {
        (1..=self.threshold + self.period).find(|&n| self.contains(n))
    }

    /// Elements up to and including `limit`.
    pub fn elements_up_to(&self, limit: usize) -> Vec<usize> {
        (1..=limit).filter(|&n| self.contains(n)).collect()
    }

    /// Lower density; for an eventually periodic set this equals the tail
    /// residue count over the period, as an exact rational.
    pub fn lower_density(&self) -> Rational {
        let hits = self.residues.iter().filter(|&&b| b).count() as u64;
        Rational::new(hits, self.period as u64)
    }
}

fn minimal_period(residues: &[bool]) -> usize {
    let p = residues.len();
    (1..=p)
        .find(|&d| p % d == 0 && residues.iter().enumerate().all(|(i, &b)| b == residues[i % d]))
        .expect("length is its own period")
}

impl fmt::Debug for EventuallyPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EventuallyPeriodicSet {
    /// Rendering grammar: `EMPTY`, `N`, `N\{a,...}` for cofinite sets,
    /// `{a1,a2,...}` for finite sets, and otherwise the exhaustive prefix
    /// followed by one progression `(b+p·N0)` per tail residue, joined
    /// with ` ∪ `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "EMPTY");
        }
        if self.is_cofinite() {
            let missing: Vec<usize> = (1..=self.threshold).filter(|&n| !self.contains(n)).collect();
            if missing.is_empty() {
                return write!(f, "N");
            }
            write!(f, "N\\{{")?;
            for (k, m) in missing.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            return write!(f, "}}");
        }
        if self.is_finite() {
            write!(f, "{{")?;
            for (k, m) in self.elements_up_to(self.threshold).iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            return write!(f, "}}");
        }
        let mut parts: Vec<String> = Vec::new();
        let finite_part: Vec<usize> = (1..=self.threshold).filter(|&n| self.contains(n)).collect();
        if !finite_part.is_empty() {
            let inner: Vec<String> = finite_part.iter().map(|m| m.to_string()).collect();
            parts.push(format!("{{{}}}", inner.join(",")));
        }
        for r in 0..self.period {
            if self.residues[r] {
                parts.push(format!("({}+{}·N0)", self.threshold + 1 + r, self.period));
            }
        }
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl FromStr for EventuallyPeriodicSet {
    type Err = NatSetError;

    fn from_str(s: &str) -> Result<Self, NatSetError> {
        parse_set(s)
    }
}

fn parse_set(input: &str) -> Result<EventuallyPeriodicSet, NatSetError> {
    let mut p = Parser { input: input.as_bytes(), pos: 0 };
    p.skip_ws();
    let set = p.parse_union()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("trailing input"));
    }
    Ok(set)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> NatSetError {
        NatSetError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_union_sep(&mut self) -> Result<bool, NatSetError> {
        self.skip_ws();
        // "∪" is the three bytes e2 88 aa; accept ASCII "U" as well.
        if self.input[self.pos..].starts_with("∪".as_bytes()) {
            self.pos += "∪".len();
            return Ok(true);
        }
        if self.eat(b'U') {
            return Ok(true);
        }
        Ok(false)
    }

    fn parse_union(&mut self) -> Result<EventuallyPeriodicSet, NatSetError> {
        let mut acc = self.parse_atom()?;
        loop {
            let save = self.pos;
            if self.eat_union_sep()? {
                self.skip_ws();
                let next = self.parse_atom()?;
                acc = acc.union(&next);
            } else {
                self.pos = save;
                return Ok(acc);
            }
        }
    }

    fn parse_atom(&mut self) -> Result<EventuallyPeriodicSet, NatSetError> {
        self.skip_ws();
        match self.peek() {
            Some(b'E') => {
                self.expect_word("EMPTY")?;
                Ok(EventuallyPeriodicSet::empty())
            }
            Some(b'N') => {
                self.pos += 1;
                if self.eat(b'\\') {
                    self.skip_ws();
                    let elems = self.parse_brace_list()?;
                    Ok(EventuallyPeriodicSet::cofinite_excluding(&elems))
                } else {
                    Ok(EventuallyPeriodicSet::naturals())
                }
            }
            Some(b'{') => {
                let elems = self.parse_brace_list()?;
                Ok(EventuallyPeriodicSet::from_elements(&elems))
            }
            Some(b'(') => self.parse_progression(),
            _ => Err(self.err("expected EMPTY, N, {...} or (b+p·N0)")),
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), NatSetError> {
        if self.input[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{w}`")))
        }
    }

    fn parse_number(&mut self) -> Result<usize, NatSetError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn parse_brace_list(&mut self) -> Result<Vec<usize>, NatSetError> {
        self.skip_ws();
        if !self.eat(b'{') {
            return Err(self.err("expected `{`"));
        }
        let mut elems = Vec::new();
        self.skip_ws();
        if self.eat(b'}') {
            return Ok(elems);
        }
        loop {
            let n = self.parse_number()?;
            if n == 0 {
                return Err(self.err("0 is not an element of ℕ"));
            }
            elems.push(n);
            self.skip_ws();
            if self.eat(b'}') {
                return Ok(elems);
            }
            if !self.eat(b',') {
                return Err(self.err("expected `,` or `}`"));
            }
        }
    }

    fn parse_progression(&mut self) -> Result<EventuallyPeriodicSet, NatSetError> {
        if !self.eat(b'(') {
            return Err(self.err("expected `(`"));
        }
        let b = self.parse_number()?;
        self.skip_ws();
        if !self.eat(b'+') {
            return Err(self.err("expected `+`"));
        }
        let p = self.parse_number()?;
        self.skip_ws();
        // "·" is c2 b7; accept ASCII "*" too.
        if self.input[self.pos..].starts_with("·".as_bytes()) {
            self.pos += "·".len();
        } else if !self.eat(b'*') {
            return Err(self.err("expected `·`"));
        }
        self.expect_word("N0")?;
        self.skip_ws();
        if !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        if b == 0 {
            return Err(self.err("progression base must be ≥ 1"));
        }
        EventuallyPeriodicSet::from_progression(b, p).map_err(|_| self.err("step must be ≥ 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eps(s: &str) -> EventuallyPeriodicSet {
        s.parse().unwrap()
    }

    #[test]
    fn progression_examples() {
        assert_eq!(EventuallyPeriodicSet::from_progression(1, 2).unwrap(), eps("(1+2·N0)"));
        assert_eq!(
            EventuallyPeriodicSet::from_progression(1, 2).unwrap().elements_up_to(9),
            vec![1, 3, 5, 7, 9]
        );
        assert_eq!(
            EventuallyPeriodicSet::from_progression(2, 2).unwrap().elements_up_to(8),
            vec![2, 4, 6, 8]
        );
        assert_eq!(
            EventuallyPeriodicSet::from_progression(0, 3).unwrap().elements_up_to(12),
            vec![3, 6, 9, 12]
        );
        assert_eq!(EventuallyPeriodicSet::from_progression(1, 0), Err(NatSetError::ZeroStep));
    }

    #[test]
    fn union_of_parities_is_everything() {
        let evens = EventuallyPeriodicSet::evens();
        let odds = EventuallyPeriodicSet::odds();
        assert_eq!(evens.union(&odds), EventuallyPeriodicSet::naturals());
    }

    #[test]
    fn intersection_of_multiples() {
        // Oracle: brute-force membership on 1..=100.
        let threes = EventuallyPeriodicSet::from_progression(0, 3).unwrap();
        let twos = EventuallyPeriodicSet::evens();
        let meet = threes.intersect(&twos);
        for n in 1..=100 {
            assert_eq!(meet.contains(n), n % 6 == 0, "n = {n}");
        }
        assert_eq!(meet, EventuallyPeriodicSet::from_progression(0, 6).unwrap());
    }

    #[test]
    fn complement_of_singleton() {
        let s = EventuallyPeriodicSet::from_elements(&[2]);
        assert_eq!(s.complement(), EventuallyPeriodicSet::cofinite_excluding(&[2]));
        assert_eq!(s.complement().to_string(), "N\\{2}");
    }

    #[test]
    fn shift_examples() {
        let evens = EventuallyPeriodicSet::evens();
        assert_eq!(evens.shift(1), EventuallyPeriodicSet::odds());

        // Oracle: element-wise on 1..=50.
        let a = EventuallyPeriodicSet::cofinite_excluding(&[1, 4]);
        let shifted = a.shift(2);
        for m in 1..=50 {
            assert_eq!(shifted.contains(m), a.contains(m + 2), "m = {m}");
        }
        assert_eq!(shifted, EventuallyPeriodicSet::cofinite_excluding(&[2]));

        assert_eq!(EventuallyPeriodicSet::empty().shift(5), EventuallyPeriodicSet::empty());
    }

    #[test]
    fn predicates() {
        assert!(EventuallyPeriodicSet::cofinite_excluding(&[1]).contains_tail_from(2));
        let six = EventuallyPeriodicSet::from_progression(0, 6).unwrap();
        assert!(six.is_subset(&EventuallyPeriodicSet::evens()));
        assert!(!EventuallyPeriodicSet::evens().is_subset(&six));
        assert_eq!(EventuallyPeriodicSet::evens().lower_density(), Rational::new(1, 2));
        assert_eq!(EventuallyPeriodicSet::empty().lower_density(), Rational::new(0, 1));
        assert_eq!(EventuallyPeriodicSet::from_elements(&[3, 7]).cardinality(), Some(2));
        assert_eq!(EventuallyPeriodicSet::evens().cardinality(), None);
        assert_eq!(EventuallyPeriodicSet::cofinite_excluding(&[3]).minimal_tail_start(), Some(4));
        assert_eq!(EventuallyPeriodicSet::naturals().minimal_tail_start(), Some(1));
        assert_eq!(EventuallyPeriodicSet::evens().minimal_tail_start(), None);
    }

    #[test]
    fn rendering_round_trips_named_sets() {
        for (set, text) in [
            (EventuallyPeriodicSet::empty(), "EMPTY"),
            (EventuallyPeriodicSet::naturals(), "N"),
            (EventuallyPeriodicSet::evens(), "(2+2·N0)"),
            (EventuallyPeriodicSet::odds(), "(1+2·N0)"),
            (EventuallyPeriodicSet::cofinite_excluding(&[1, 4]), "N\\{1,4}"),
            (EventuallyPeriodicSet::from_elements(&[1, 2, 3]), "{1,2,3}"),
        ] {
            assert_eq!(set.to_string(), text);
            assert_eq!(eps(text), set);
        }
        // Mixed prefix + progression.
        let mixed = EventuallyPeriodicSet::from_elements(&[1]).union(
            &EventuallyPeriodicSet::from_progression(6, 3).unwrap(),
        );
        assert_eq!(mixed.to_string(), "{1} ∪ (6+3·N0)");
        assert_eq!(eps("{1} ∪ (6+3·N0)"), mixed);
        assert_eq!(eps("{1} U (6+3*N0)"), mixed);
    }

    /// Membership read straight off the four fields, bypassing `contains`.
    fn naive_membership(s: &EventuallyPeriodicSet, n: usize) -> bool {
        let t = s.threshold();
        let p = s.period();
        if n <= t {
            s.prefix[n - 1]
        } else {
            s.residues[(n - t - 1) % p]
        }
    }

    fn arb_eps() -> impl Strategy<Value = EventuallyPeriodicSet> {
        (
            proptest::collection::vec(any::<bool>(), 0..8),
            proptest::collection::vec(any::<bool>(), 1..6),
        )
            .prop_map(|(prefix, residues)| {
                let t = prefix.len();
                let p = residues.len();
                EventuallyPeriodicSet::from_periodic_fn(t, p, |n| {
                    if n <= t {
                        prefix[n - 1]
                    } else {
                        residues[(n - t - 1) % p]
                    }
                })
            })
    }

    proptest! {
        #[test]
        fn membership_round_trip(a in arb_eps()) {
            let limit = 3 * (a.threshold() + a.period());
            for n in 1..=limit.max(3) {
                prop_assert_eq!(a.contains(n), naive_membership(&a, n));
            }
            // Rendering round-trip.
            let rendered = a.to_string();
            prop_assert_eq!(rendered.parse::<EventuallyPeriodicSet>().unwrap(), a);
        }

        #[test]
        fn boolean_algebra_laws(a in arb_eps(), b in arb_eps(), c in arb_eps()) {
            let limit = 3 * lcm(lcm(a.period(), b.period()), c.period())
                + a.threshold().max(b.threshold()).max(c.threshold());
            // De Morgan.
            let lhs = a.union(&b).complement();
            let rhs = a.complement().intersect(&b.complement());
            prop_assert_eq!(&lhs, &rhs);
            // Associativity and distributivity by membership sampling.
            for n in 1..=limit {
                let u = a.union(&b.union(&c)).contains(n);
                let v = a.union(&b).union(&c).contains(n);
                prop_assert_eq!(u, v);
                let d1 = a.intersect(&b.union(&c)).contains(n);
                let d2 = a.intersect(&b).union(&a.intersect(&c)).contains(n);
                prop_assert_eq!(d1, d2);
            }
            // Result periods divide the lcm of the input periods.
            prop_assert_eq!(lcm(a.period(), b.period()) % a.union(&b).period(), 0);
            prop_assert_eq!(lcm(a.period(), b.period()) % a.intersect(&b).period(), 0);
        }

        #[test]
        fn shift_composes(a in arb_eps(), x in 0usize..10, y in 0usize..10) {
            prop_assert_eq!(a.shift(x).shift(y), a.shift(x + y));
        }

        #[test]
        fn canonicalization_idempotent(a in arb_eps()) {
            let again = EventuallyPeriodicSet::canonical(a.prefix.clone(), a.residues.clone());
            prop_assert_eq!(again.threshold, a.threshold);
            prop_assert_eq!(again.prefix, a.prefix);
            prop_assert_eq!(again.period, a.period);
            prop_assert_eq!(again.residues, a.residues);
        }

        #[test]
        fn subset_matches_sampling(a in arb_eps(), b in arb_eps()) {
            let limit = 2 * (lcm(a.period(), b.period()) + a.threshold().max(b.threshold())) + 2;
            let sampled = (1..=limit).all(|n| !a.contains(n) || b.contains(n));
            prop_assert_eq!(a.is_subset(&b), sampled);
        }
    }
}
