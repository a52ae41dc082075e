//! Families ℱ of subsets of ℕ as decidable predicates over
//! [`EventuallyPeriodicSet`], with declared structural flags.
//!
//! A family is never enumerated; deciders only ever ask membership
//! questions about the eventually periodic sets a finite relation can
//! realize, and those questions are exactly decidable for every built-in
//! kind.

use std::fmt;

use thiserror::Error;

use crate::natset::EventuallyPeriodicSet;

type Eps = EventuallyPeriodicSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// All non-empty subsets of ℕ.
    AllNonempty,
    /// Supersets of at least one generator.
    UpwardFrom(Vec<Eps>),
    /// Exactly the unions of subcollections of the generators; the empty
    /// union (∅) is a member iff `include_empty`.
    FiniteUnionsOf { generators: Vec<Eps>, include_empty: bool },
    /// Supersets of `{n : n ≥ e}`.
    Tail(usize),
    /// Non-empty sets containing only odd numbers.
    OddOnly,
    /// Infinite sets.
    Infinite,
    /// Sets of positive lower density.
    PositiveLowerDensity,
    /// Sets with finite complement.
    Cofinite,
    /// Sets with at least `m` elements.
    MinCard(usize),
}

/// A named family with its membership predicate and declared flags.
///
/// `upward_closed` is declared per kind (condition: supersets of members
/// are members); `contains_n` and `contains_empty` are computed from the
/// predicate so they are always consistent with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    kind: FamilyKind,
    upward_closed: bool,
    contains_n: bool,
    contains_empty: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid family expression `{input}`: {msg}")]
    Parse { input: String, msg: String },
    #[error("tail families need e ≥ 1")]
    BadTail,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        let upward_closed = match &kind {
            FamilyKind::AllNonempty
            | FamilyKind::UpwardFrom(_)
            | FamilyKind::Tail(_)
            | FamilyKind::Infinite
            | FamilyKind::PositiveLowerDensity
            | FamilyKind::Cofinite
            | FamilyKind::MinCard(_) => true,
            FamilyKind::FiniteUnionsOf { .. } | FamilyKind::OddOnly => false,
        };
        let mut spec = FamilySpec { kind, upward_closed, contains_n: false, contains_empty: false };
        spec.contains_n = spec.membership(&Eps::naturals());
        spec.contains_empty = spec.membership(&Eps::empty());
        spec
    }

    pub fn all_nonempty() -> Self {
        Self::new(FamilyKind::AllNonempty)
    }

    pub fn tail(e: usize) -> Result<Self, FamilyError> {
        if e == 0 {
            return Err(FamilyError::BadTail);
        }
        Ok(Self::new(FamilyKind::Tail(e)))
    }

    pub fn upward_from(generators: Vec<Eps>) -> Self {
        Self::new(FamilyKind::UpwardFrom(generators))
    }

    pub fn finite_unions_of(generators: Vec<Eps>, include_empty: bool) -> Self {
        Self::new(FamilyKind::FiniteUnionsOf { generators, include_empty })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn is_all_nonempty(&self) -> bool {
        matches!(self.kind, FamilyKind::AllNonempty)
    }

    pub fn upward_closed(&self) -> bool {
        self.upward_closed
    }

    pub fn contains_n(&self) -> bool {
        self.contains_n
    }

    pub fn contains_empty(&self) -> bool {
        self.contains_empty
    }

    /// The membership predicate every decider reduces to.
    pub fn membership(&self, a: &Eps) -> bool {
        match &self.kind {
            FamilyKind::AllNonempty => !a.is_empty(),
            FamilyKind::UpwardFrom(gens) => gens.iter().any(|g| g.is_subset(a)),
            FamilyKind::FiniteUnionsOf { generators, include_empty } => {
                if a.is_empty() {
                    return *include_empty || generators.iter().any(|g| g.is_empty());
                }
                // A is a union of a subcollection iff it equals the union
                // of all generators it contains.
                let mut u = Eps::empty();
                let mut any = false;
                for g in generators {
                    if g.is_subset(a) {
                        u = u.union(g);
                        any = true;
                    }
                }
                any && u == *a
            }
            FamilyKind::Tail(e) => a.contains_tail_from(*e),
            FamilyKind::OddOnly => !a.is_empty() && a.intersect(&Eps::evens()).is_empty(),
            FamilyKind::Infinite => a.is_infinite(),
            FamilyKind::PositiveLowerDensity => a.lower_density().is_positive(),
            FamilyKind::Cofinite => a.is_cofinite(),
            FamilyKind::MinCard(m) => a.cardinality().map_or(true, |c| c >= *m),
        }
    }

    /// Whether some member `B` of the family satisfies `lo ⊆ B ⊆ hi`.
    ///
    /// Exact for every built-in kind; this is what makes the strong
    /// transitivity decisions conclusive. Requires `lo ⊆ hi`.
    pub fn range_possible(&self, lo: &Eps, hi: &Eps) -> bool {
        debug_assert!(lo.is_subset(hi));
        match &self.kind {
            FamilyKind::AllNonempty => !hi.is_empty(),
            FamilyKind::UpwardFrom(gens) => gens.iter().any(|g| g.is_subset(hi)),
            FamilyKind::FiniteUnionsOf { generators, include_empty } => {
                let mut u = Eps::empty();
                let mut any = false;
                for g in generators {
                    if g.is_subset(hi) {
                        u = u.union(g);
                        any = true;
                    }
                }
                if any && lo.is_subset(&u) {
                    return true;
                }
                (*include_empty || generators.iter().any(|g| g.is_empty())) && lo.is_empty()
            }
            FamilyKind::Tail(e) => hi.contains_tail_from(*e),
            FamilyKind::OddOnly => {
                lo.intersect(&Eps::evens()).is_empty()
                    && !hi.intersect(&Eps::odds()).is_empty()
            }
            FamilyKind::Infinite => hi.is_infinite(),
            FamilyKind::PositiveLowerDensity => hi.lower_density().is_positive(),
            FamilyKind::Cofinite => hi.is_cofinite(),
            FamilyKind::MinCard(m) => hi.cardinality().map_or(true, |c| c >= *m),
        }
    }

    /// Whether some member of the family is a subset of `a`.
    pub fn possible_subset(&self, a: &Eps) -> bool {
        self.range_possible(&Eps::empty(), a)
    }

    /// Least `e` such that every member contains `{n : n ≥ e}`, when the
    /// family guarantees one.
    pub fn guaranteed_tail_start(&self) -> Option<usize> {
        match &self.kind {
            FamilyKind::Tail(e) => Some(*e),
            FamilyKind::UpwardFrom(gens) => gens
                .iter()
                .map(|g| g.minimal_tail_start())
                .collect::<Option<Vec<_>>>()
                .and_then(|v| v.into_iter().max()),
            FamilyKind::FiniteUnionsOf { generators, include_empty } => {
                if *include_empty || generators.is_empty() {
                    return None;
                }
                generators
                    .iter()
                    .map(|g| g.minimal_tail_start())
                    .collect::<Option<Vec<_>>>()
                    .and_then(|v| v.into_iter().max())
            }
            _ => None,
        }
    }

    /// Advisory check of condition (I) on sampled pairs `A ⊆ B`: true iff
    /// no sampled monotonicity violation.
    pub fn check_condition_i(&self, samples: &[(Eps, Eps)]) -> bool {
        samples.iter().all(|(a, b)| {
            debug_assert!(a.is_subset(b), "samples must satisfy A ⊆ B");
            !self.membership(a) || self.membership(b)
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::AllNonempty => write!(f, "all-nonempty"),
            FamilyKind::UpwardFrom(gens) => {
                let inner: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "upward:[{}]", inner.join(";"))
            }
            FamilyKind::FiniteUnionsOf { generators, include_empty } => {
                let inner: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
                write!(f, "unions:[{}]{}", inner.join(";"), if *include_empty { "+empty" } else { "" })
            }
            FamilyKind::Tail(e) => write!(f, "tail:{e}"),
            FamilyKind::OddOnly => write!(f, "odd-only"),
            FamilyKind::Infinite => write!(f, "infinite"),
            FamilyKind::PositiveLowerDensity => write!(f, "lower-density>0"),
            FamilyKind::Cofinite => write!(f, "cofinite"),
            FamilyKind::MinCard(m) => write!(f, "min-card:{m}"),
        }
    }
}

/// Parses the CLI family grammar: `all-nonempty`, `tail:e`, `odd-only`,
/// `upward:[set;set;...]`, `unions:[set;set;...]` with optional `+empty`,
/// `infinite`, `cofinite`, `lower-density>0`, `min-card:m`.
pub fn parse_family(input: &str) -> Result<FamilySpec, FamilyError> {
    let s = input.trim();
    let err = |msg: &str| FamilyError::Parse { input: input.to_string(), msg: msg.to_string() };
    if s == "all-nonempty" {
        return Ok(FamilySpec::all_nonempty());
    }
    if s == "odd-only" {
        return Ok(FamilySpec::new(FamilyKind::OddOnly));
    }
    if s == "infinite" {
        return Ok(FamilySpec::new(FamilyKind::Infinite));
    }
    if s == "cofinite" {
        return Ok(FamilySpec::new(FamilyKind::Cofinite));
    }
    if s == "lower-density>0" {
        return Ok(FamilySpec::new(FamilyKind::PositiveLowerDensity));
    }
    if let Some(rest) = s.strip_prefix("tail:") {
        let e: usize = rest.parse().map_err(|_| err("tail:e needs a number"))?;
        return FamilySpec::tail(e);
    }
    if let Some(rest) = s.strip_prefix("min-card:") {
        let m: usize = rest.parse().map_err(|_| err("min-card:m needs a number"))?;
        return Ok(FamilySpec::new(FamilyKind::MinCard(m)));
    }
    if let Some(rest) = s.strip_prefix("upward:") {
        let gens = parse_set_list(rest).map_err(|m| err(&m))?;
        return Ok(FamilySpec::upward_from(gens));
    }
    if let Some(rest) = s.strip_prefix("unions:") {
        let (body, include_empty) = match rest.strip_suffix("+empty") {
            Some(b) => (b, true),
            None => (rest, false),
        };
        let gens = parse_set_list(body).map_err(|m| err(&m))?;
        return Ok(FamilySpec::finite_unions_of(gens, include_empty));
    }
    Err(err("unknown family"))
}

fn parse_set_list(body: &str) -> Result<Vec<Eps>, String> {
    let body = body.trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| "expected [set;set;...]".to_string())?;
    let mut out = Vec::new();
    for part in inner.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(part.parse::<Eps>().map_err(|e| e.to_string())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(s: &str) -> Eps {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        let f = FamilySpec::all_nonempty();
        assert!(f.membership(&Eps::evens()));
        assert!(!f.membership(&Eps::empty()));

        let odd = FamilySpec::new(FamilyKind::OddOnly);
        assert!(odd.membership(&Eps::odds()));
        assert!(!odd.membership(&Eps::naturals()));
        assert!(!odd.membership(&Eps::empty()));

        let thirds = FamilySpec::finite_unions_of(
            vec![eps("(3+3·N0)"), eps("(1+3·N0)"), eps("(2+3·N0)")],
            true,
        );
        assert!(thirds.membership(&eps("(3+3·N0)").union(&eps("(1+3·N0)"))));
        assert!(thirds.membership(&Eps::empty()));
        assert!(thirds.membership(&Eps::naturals()));
        assert!(!thirds.membership(&Eps::evens()));
    }

    #[test]
    fn tail_family_matches_tail_predicate() {
        let f = FamilySpec::tail(3).unwrap();
        for a in [
            Eps::naturals(),
            Eps::cofinite_excluding(&[1, 2]),
            Eps::cofinite_excluding(&[3]),
            Eps::evens(),
            Eps::empty(),
        ] {
            assert_eq!(f.membership(&a), a.contains_tail_from(3), "a = {a}");
        }
    }

    #[test]
    fn finite_unions_invariant_under_generator_order() {
        let a = eps("(1+3·N0)");
        let b = eps("(2+3·N0)");
        let f1 = FamilySpec::finite_unions_of(vec![a.clone(), b.clone()], false);
        let f2 = FamilySpec::finite_unions_of(vec![b.clone(), a.clone()], false);
        for probe in [a.clone(), b.clone(), a.union(&b), Eps::naturals(), Eps::empty()] {
            assert_eq!(f1.membership(&probe), f2.membership(&probe));
        }
    }

    #[test]
    fn condition_i_checks() {
        let f = FamilySpec::all_nonempty();
        assert!(f.check_condition_i(&[(Eps::evens(), Eps::naturals())]));

        let odd = FamilySpec::new(FamilyKind::OddOnly);
        assert!(!odd.check_condition_i(&[(Eps::odds(), Eps::naturals())]));

        let tail = FamilySpec::tail(3).unwrap();
        assert!(tail.check_condition_i(&[
            (Eps::cofinite_excluding(&[1, 2]), Eps::naturals()),
            (Eps::evens(), Eps::naturals()),
        ]));
    }

    #[test]
    fn standing_assumptions_for_all_nonempty() {
        let f = FamilySpec::all_nonempty();
        assert!(f.contains_n());
        assert!(!f.contains_empty());
        // Membership preserved under A ↦ A ∪ (A + 2ℕ).
        for a in [Eps::odds(), Eps::from_elements(&[1, 5]), Eps::cofinite_excluding(&[2])] {
            let widened = a.union(&Eps::from_periodic_fn(
                a.threshold() + 2,
                crate::natset::lcm(a.period(), 2),
                |n| (1..n.saturating_sub(1)).any(|k| a.contains(k) && (n - k) % 2 == 0),
            ));
            assert!(f.membership(&widened));
        }
    }

    #[test]
    fn range_possible_per_kind() {
        let hi = Eps::evens();
        assert!(FamilySpec::all_nonempty().range_possible(&Eps::empty(), &hi));
        assert!(!FamilySpec::new(FamilyKind::OddOnly).possible_subset(&hi));
        assert!(FamilySpec::new(FamilyKind::OddOnly).possible_subset(&Eps::naturals()));
        assert!(FamilySpec::new(FamilyKind::Infinite).possible_subset(&hi));
        assert!(!FamilySpec::new(FamilyKind::Infinite).possible_subset(&Eps::from_elements(&[1])));
        assert!(!FamilySpec::new(FamilyKind::Cofinite).possible_subset(&hi));
        assert!(FamilySpec::new(FamilyKind::MinCard(2)).possible_subset(&Eps::from_elements(&[1, 5])));
        assert!(!FamilySpec::new(FamilyKind::MinCard(3)).possible_subset(&Eps::from_elements(&[1, 5])));
        let up = FamilySpec::upward_from(vec![Eps::evens()]);
        assert!(up.range_possible(&Eps::from_elements(&[2]), &Eps::naturals()));
        assert!(!up.range_possible(&Eps::empty(), &Eps::odds()));
    }

    #[test]
    fn grammar_round_trip() {
        for text in [
            "all-nonempty",
            "tail:2",
            "odd-only",
            "infinite",
            "cofinite",
            "lower-density>0",
            "min-card:3",
            "upward:[(2+2·N0);(1+2·N0)]",
            "unions:[{1};(3+3·N0)]+empty",
        ] {
            let fam = parse_family(text).unwrap();
            assert_eq!(fam.to_string(), text);
            assert_eq!(parse_family(&fam.to_string()).unwrap(), fam);
        }
        assert!(parse_family("frequently").is_err());
        assert!(parse_family("tail:x").is_err());
    }

    #[test]
    fn guaranteed_tails() {
        assert_eq!(FamilySpec::tail(4).unwrap().guaranteed_tail_start(), Some(4));
        assert_eq!(FamilySpec::all_nonempty().guaranteed_tail_start(), None);
        let up = FamilySpec::upward_from(vec![
            Eps::cofinite_excluding(&[1]),
            Eps::cofinite_excluding(&[2, 3]),
        ]);
        assert_eq!(up.guaranteed_tail_start(), Some(4));
        let up2 = FamilySpec::upward_from(vec![Eps::evens()]);
        assert_eq!(up2.guaranteed_tail_start(), None);
    }
}
