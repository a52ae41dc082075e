//! Deciders for the dynamical properties of relations and relation
//! sequences: hypercyclicity, topological transitivity, their strong
//! variants, and the disjoint versions over tuples of relations.
//!
//! Everything reduces to membership questions about return-time sets,
//! which are eventually periodic with frame derived from the power
//! traces. Plain properties are decided exactly for every family. The
//! strong properties quantify over infinite selections; they are decided
//! exactly for the all-nonempty family (covering search), for single-open
//! topologies, for the cofinite family, and whenever a necessary range
//! condition fails; otherwise a bounded search over eventually periodic
//! selections returns Yes on success and Unknown when inconclusive. The
//! per-kind situation is documented on [`is_strongly_hypercyclic`].
//! Strong disjoint transitivity is exact for every built-in kind because
//! its selection may depend on the target tuple.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::family::FamilySpec;
use crate::natset::EventuallyPeriodicSet;
use crate::nodes::{node_name, NodeSet};
use crate::relations::{BooleanRelation, PowerTrace, RelationSequence};
use crate::topology::FiniteTopology;
use crate::trail::{Frame, Trail};

type Eps = EventuallyPeriodicSet;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("topology is on {top} nodes but the system has {sys}")]
    SizeMismatch { top: usize, sys: usize },
    #[error("disjoint properties need at least two relations")]
    TooFewSystems,
    #[error("systems have mismatched node counts")]
    MixedSizes,
    #[error("open-set tuple space too large ({0} tuples)")]
    TupleGuard(usize),
    #[error("shift transfer needs l ≥ 1")]
    ZeroShift,
    #[error("node index {0} out of range")]
    BadNode(usize),
    #[error(transparent)]
    Relation(#[from] crate::relations::RelationError),
}

const TUPLE_GUARD: usize = 1 << 22;
const SEARCH_BUDGET: usize = 1 << 12;

/// An iterated relation (ρ_n := ρⁿ) or an explicit eventually periodic
/// sequence of relations.
#[derive(Clone, Debug)]
pub enum System {
    Iterated(BooleanRelation),
    Sequence(RelationSequence),
}

impl System {
    pub fn n(&self) -> usize {
        match self {
            System::Iterated(r) => r.n(),
            System::Sequence(s) => s.n(),
        }
    }
}

enum Prepared<'a> {
    Iter(PowerTrace),
    Seq(&'a RelationSequence),
}

impl<'a> Prepared<'a> {
    fn new(sys: &'a System) -> Self {
        match sys {
            System::Iterated(r) => Prepared::Iter(r.power_trace()),
            System::Sequence(s) => Prepared::Seq(s),
        }
    }

    fn own_frame(&self) -> Frame {
        match self {
            Prepared::Iter(t) => Frame { thr: t.preperiod() - 1, per: t.period() },
            Prepared::Seq(s) => Frame { thr: s.prefix_len(), per: s.cycle_len() },
        }
    }

    fn row_at(&self, k: usize, x: usize) -> u64 {
        match self {
            Prepared::Iter(t) => t.power(k).row(x),
            Prepared::Seq(s) => s.relation_at(k).row(x),
        }
    }

    fn image_at(&self, k: usize, u: u64) -> u64 {
        let mut acc = 0;
        let mut bits = u;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc |= self.row_at(k, x);
        }
        acc
    }

    /// Nodes whose orbit is nonempty at every step: D_∞ for an iterated
    /// relation, ⋂ₙ D(ρₙ) for a sequence.
    fn domain_all(&self, n: usize) -> NodeSet {
        match self {
            Prepared::Iter(t) => t.d_infinity(),
            Prepared::Seq(s) => {
                let _ = n;
                s.common_domain()
            }
        }
    }
}

struct Engine<'a> {
    n: usize,
    frame: Frame,
    preps: Vec<Prepared<'a>>,
    opens: Vec<u64>,
    fam: &'a FamilySpec,
}

impl<'a> Engine<'a> {
    fn new(
        systems: &'a [System],
        top: &FiniteTopology,
        fam: &'a FamilySpec,
    ) -> Result<Self, DynamicsError> {
        assert!(!systems.is_empty());
        let n = systems[0].n();
        if systems.iter().any(|s| s.n() != n) {
            return Err(DynamicsError::MixedSizes);
        }
        if top.n() != n {
            return Err(DynamicsError::SizeMismatch { top: top.n(), sys: n });
        }
        let preps: Vec<Prepared> = systems.iter().map(Prepared::new).collect();
        let mut thr = 0;
        let mut per = 1;
        for p in &preps {
            let f = p.own_frame();
            thr = thr.max(f.thr);
            per = crate::natset::lcm(per, f.per);
        }
        let opens: Vec<u64> = top.nonempty_opens().map(|s| s.0).collect();
        Ok(Engine { n, frame: Frame { thr, per }, preps, opens, fam })
    }

    fn source_rows(&self, j: usize, x: usize) -> Vec<u64> {
        (1..=self.frame.len()).map(|k| self.preps[j].row_at(k, x)).collect()
    }

    fn set_rows(&self, j: usize, u: u64) -> Vec<u64> {
        (1..=self.frame.len()).map(|k| self.preps[j].image_at(k, u)).collect()
    }

    fn domain_all(&self) -> NodeSet {
        let mut acc = NodeSet::full(self.n);
        for p in &self.preps {
            acc = acc.intersect(&p.domain_all(self.n));
        }
        acc
    }

    fn hit_trail(&self, rows: &[u64], v: u64) -> Trail {
        let mut t = Trail::empty(self.frame);
        for (k, &r) in rows.iter().enumerate() {
            if r & v != 0 {
                t.set(k + 1);
            }
        }
        t
    }

    fn hit_eps(&self, rows: &[u64], v: u64) -> Eps {
        self.hit_trail(rows, v).to_eps()
    }

    /// Number of open tuples (mᴺ), guarded.
    fn tuple_count(&self) -> Result<usize, DynamicsError> {
        let m = self.opens.len();
        let mut c: usize = 1;
        for _ in 0..self.preps.len() {
            c = c.saturating_mul(m);
            if c > TUPLE_GUARD {
                return Err(DynamicsError::TupleGuard(c));
            }
        }
        Ok(c)
    }

    fn tuple_at(&self, mut idx: usize) -> Vec<u64> {
        let m = self.opens.len();
        let mut t = vec![0u64; self.preps.len()];
        for j in (0..self.preps.len()).rev() {
            t[j] = self.opens[idx % m];
            idx /= m;
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Yes => write!(f, "Yes"),
            Status::No => write!(f, "No"),
            Status::Unknown => write!(f, "Unknown"),
        }
    }
}

/// An open-set tuple whose return set breaks the property, kept for
/// reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub source: Option<NodeSet>,
    pub targets: Vec<NodeSet>,
    pub hit_set: Option<Eps>,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        if let Some(u) = &self.source {
            write!(f, "U={u}")?;
            first = false;
        }
        for (i, v) in self.targets.iter().enumerate() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if self.targets.len() == 1 {
                write!(f, "V={v}")?;
            } else {
                write!(f, "V{}={v}", i + 1)?;
            }
        }
        if let Some(s) = &self.hit_set {
            write!(f, "; S={s}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Node(usize),
    Schedule(SelectionSchedule),
    NodeWithSchedule(usize, SelectionSchedule),
}

/// Three-valued decision with optional witness or refutation. Yes
/// verdicts of existential properties carry a witness (smallest node
/// first); No verdicts of universal properties carry the first refuting
/// open-set tuple in topology order. Unknown appears only for bounded
/// strong-selection searches and carries a note saying so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub refutation: Option<Refutation>,
    pub note: Option<String>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict { status: Status::Yes, witness: None, refutation: None, note: None }
    }

    fn yes_node(x: usize) -> Self {
        Verdict { status: Status::Yes, witness: Some(Witness::Node(x)), refutation: None, note: None }
    }

    fn no() -> Self {
        Verdict { status: Status::No, witness: None, refutation: None, note: None }
    }

    fn no_because(r: Refutation) -> Self {
        Verdict { status: Status::No, witness: None, refutation: Some(r), note: None }
    }

    fn no_note(note: &str) -> Self {
        Verdict { status: Status::No, witness: None, refutation: None, note: Some(note.into()) }
    }

    fn unknown(note: &str) -> Self {
        Verdict { status: Status::Unknown, witness: None, refutation: None, note: Some(note.into()) }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        match &self.witness {
            Some(Witness::Node(x)) | Some(Witness::NodeWithSchedule(x, _)) => {
                write!(f, " witness={}", node_name(*x))?;
            }
            _ => {}
        }
        if let Some(r) = &self.refutation {
            write!(f, " refuted-by={r}")?;
        }
        Ok(())
    }
}

/// A concrete selection y_n (one node per system per step): explicit
/// assignments up to a horizon, then a per-period tail rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionSchedule {
    pub horizon: usize,
    pub period: usize,
    /// n ↦ chosen node per system, for 1 ≤ n ≤ horizon.
    pub assignments: BTreeMap<usize, Vec<usize>>,
    /// Choice per system for n > horizon with (n − horizon − 1) mod period
    /// selecting the row.
    pub tail: Vec<Vec<usize>>,
}

impl SelectionSchedule {
    pub fn choice_at(&self, n: usize) -> &Vec<usize> {
        if n <= self.horizon {
            &self.assignments[&n]
        } else {
            &self.tail[(n - self.horizon - 1) % self.period]
        }
    }
}

// ---------------------------------------------------------------------
// Plain properties.
// ---------------------------------------------------------------------

/// ℱ-hypercyclic vectors: { x ∈ D : S(x, V) ∈ ℱ for every open nonempty V }.
pub fn hypercyclic_vectors(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<NodeSet, DynamicsError> {
    let eng = Engine::new(std::slice::from_ref(sys), top, fam)?;
    let mut out = NodeSet::empty();
    for x in eng.domain_all().iter() {
        let rows = eng.source_rows(0, x);
        let ok = if fam.is_all_nonempty() {
            eng.opens.iter().all(|&v| rows.iter().any(|&r| r & v != 0))
        } else {
            eng.opens.iter().all(|&v| fam.membership(&eng.hit_eps(&rows, v)))
        };
        if ok {
            out.insert(x);
        }
    }
    Ok(out)
}

pub fn is_hypercyclic(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    let vs = hypercyclic_vectors(sys, top, fam)?;
    Ok(match vs.first() {
        Some(x) => Verdict::yes_node(x),
        None => Verdict::no(),
    })
}

pub fn is_top_transitive(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    let eng = Engine::new(std::slice::from_ref(sys), top, fam)?;
    for &u in &eng.opens {
        let rows = eng.set_rows(0, u);
        for &v in &eng.opens {
            let s = eng.hit_eps(&rows, v);
            if !fam.membership(&s) {
                return Ok(Verdict::no_because(Refutation {
                    source: Some(NodeSet(u)),
                    targets: vec![NodeSet(v)],
                    hit_set: Some(s),
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

// ---------------------------------------------------------------------
// Strong selection machinery.
// ---------------------------------------------------------------------

/// One strong-selection instance: per-system orbit rows (all nonzero),
/// and the open tuples every selection must serve.
struct StrongProblem<'e, 'a> {
    eng: &'e Engine<'a>,
    orbits: Vec<Vec<u64>>,
    tuples: &'e [Vec<u64>],
    source: Option<NodeSet>,
}

struct StrongOutcome {
    status: Status,
    refutation: Option<Refutation>,
    note: Option<String>,
    schedule: Option<SelectionSchedule>,
}

impl StrongOutcome {
    fn yes(schedule: Option<SelectionSchedule>) -> Self {
        StrongOutcome { status: Status::Yes, refutation: None, note: None, schedule }
    }

    fn no(refutation: Option<Refutation>, note: Option<String>) -> Self {
        StrongOutcome { status: Status::No, refutation, note, schedule: None }
    }

    fn unknown(note: String) -> Self {
        StrongOutcome { status: Status::Unknown, refutation: None, note: Some(note), schedule: None }
    }
}

fn bits(mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

impl<'e, 'a> StrongProblem<'e, 'a> {
    fn frame(&self) -> Frame {
        self.eng.frame
    }

    /// d-hit bit: every system can land in its target at step k (k may
    /// exceed the frame window; orbit rows repeat periodically).
    fn tuple_hit(&self, t: &[u64], k: usize) -> bool {
        let k = self.fold(k);
        self.orbits.iter().zip(t).all(|(rows, &v)| rows[k - 1] & v != 0)
    }

    /// Forced bit: every system must land in its target at step k.
    fn tuple_forced(&self, t: &[u64], k: usize) -> bool {
        let k = self.fold(k);
        self.orbits.iter().zip(t).all(|(rows, &v)| rows[k - 1] & !v == 0)
    }

    fn hit_trail(&self, t: &[u64]) -> Trail {
        let frame = self.frame();
        let mut tr = Trail::empty(frame);
        for k in 1..=frame.len() {
            if self.tuple_hit(t, k) {
                tr.set(k);
            }
        }
        tr
    }

    fn refute(&self, t: &[u64], hit: Option<Eps>) -> Refutation {
        Refutation {
            source: self.source,
            targets: t.iter().map(|&v| NodeSet(v)).collect(),
            hit_set: hit,
        }
    }

    fn solve(&self, want_schedule: bool) -> StrongOutcome {
        let fam = self.eng.fam;
        let frame = self.frame();

        // Fast exact route for the all-nonempty family: a selection exists
        // iff every tuple is hittable and the finitely-supported conflicts
        // admit a covering assignment.
        if fam.is_all_nonempty() {
            let mut finite_idx = Vec::new();
            for (i, t) in self.tuples.iter().enumerate() {
                let mut nonempty = false;
                let mut infinite = false;
                for k in 1..=frame.len() {
                    if self.tuple_hit(t, k) {
                        nonempty = true;
                        if k > frame.thr {
                            infinite = true;
                            break;
                        }
                    }
                }
                if !nonempty {
                    return StrongOutcome::no(
                        Some(self.refute(t, Some(Eps::empty()))),
                        None,
                    );
                }
                if !infinite {
                    finite_idx.push(i);
                }
            }
            return match self.covering(&finite_idx) {
                Ok(solution) => {
                    let schedule = want_schedule.then(|| self.schedule_from(solution.clone()));
                    StrongOutcome::yes(schedule)
                }
                Err(note) => StrongOutcome::no(None, Some(note)),
            };
        }

        // Necessary condition, exact for every kind: some family member
        // must fit between the forced set and the hit set of each tuple.
        let mut hit_eps: Vec<Eps> = Vec::with_capacity(self.tuples.len());
        let mut all_forced = true;
        for t in self.tuples {
            let hit = self.hit_trail(t);
            let forced = Trail::from_fn(frame, |k| self.tuple_forced(t, k));
            let hit_e = hit.to_eps();
            let forced_e = forced.to_eps();
            if forced_e != hit_e {
                all_forced = false;
            }
            if !fam.range_possible(&forced_e, &hit_e) {
                return StrongOutcome::no(Some(self.refute(t, Some(hit_e))), None);
            }
            hit_eps.push(hit_e);
        }

        // When every hittable step is forced the achieved sets equal the
        // hit sets for any selection, so the necessary condition is also
        // sufficient. This covers the anti-discrete topology.
        if all_forced {
            let schedule = want_schedule.then(|| self.default_schedule());
            return StrongOutcome::yes(schedule);
        }

        // Cofinite family, exact: all achieved sets are cofinite iff the
        // steps where every system can land inside the intersection of all
        // open targets form a cofinite set.
        if matches!(fam.kind(), crate::family::FamilyKind::Cofinite) {
            let mut w = u64::MAX;
            for t in self.tuples {
                for &v in t {
                    w &= v;
                }
            }
            let core = Trail::from_fn(frame, |k| {
                self.orbits.iter().all(|rows| rows[k - 1] & w != 0)
            });
            if core.is_cofinite() {
                let schedule = want_schedule.then(|| self.prefer_schedule(w));
                return StrongOutcome::yes(schedule);
            }
            return StrongOutcome::no(
                None,
                Some("steps allowing a choice inside every open set are not cofinite".into()),
            );
        }

        // Families without ∅ still need every tuple hit at least once.
        if !fam.contains_empty() {
            let finite_idx: Vec<usize> =
                (0..self.tuples.len()).filter(|&i| hit_eps[i].is_finite()).collect();
            if let Err(note) = self.covering(&finite_idx) {
                return StrongOutcome::no(None, Some(note));
            }
        }

        // Bounded search over eventually periodic selections.
        match self.bounded_search(want_schedule) {
            Some(Some(schedule)) => StrongOutcome::yes(Some(schedule)),
            Some(None) => StrongOutcome::yes(None),
            None => StrongOutcome::unknown(
                "bounded eventually-periodic selection search was inconclusive".into(),
            ),
        }
    }

    /// Exact covering decision for the finitely-supported tuples: is
    /// there an assignment of one choice per conflict step covering every
    /// (componentwise-minimal) finite tuple?
    fn covering(&self, finite_idx: &[usize]) -> Result<Vec<(usize, Vec<usize>)>, String> {
        let minimal: Vec<usize> = finite_idx
            .iter()
            .copied()
            .filter(|&i| {
                !finite_idx.iter().any(|&j| {
                    j != i
                        && self.tuples[j]
                            .iter()
                            .zip(&self.tuples[i])
                            .all(|(a, b)| a & !b == 0)
                        && self.tuples[j] != self.tuples[i]
                })
            })
            .collect();
        if minimal.is_empty() {
            return Ok(Vec::new());
        }
        assert!(minimal.len() <= 128, "covering guard: too many finite constraints");
        let frame = self.frame();
        let mut positions: Vec<usize> = Vec::new();
        for &i in &minimal {
            for k in 1..=frame.thr {
                if self.tuple_hit(&self.tuples[i], k) && !positions.contains(&k) {
                    positions.push(k);
                }
            }
        }
        positions.sort_unstable();
        let full: u128 = if minimal.len() == 128 { !0 } else { (1u128 << minimal.len()) - 1 };

        // Reachable coverage masks step by step, with back-pointers for
        // schedule reconstruction.
        let mut layers: Vec<BTreeMap<u128, (u128, Vec<usize>)>> = Vec::new();
        let mut reach: Vec<u128> = vec![0];
        for &k in &positions {
            let choices = self.choices_at(k);
            let mut layer: BTreeMap<u128, (u128, Vec<usize>)> = BTreeMap::new();
            for &cov in &reach {
                for choice in &choices {
                    let mut mask = cov;
                    for (ci, &ti) in minimal.iter().enumerate() {
                        if self.tuples[ti]
                            .iter()
                            .zip(choice)
                            .all(|(&v, &y)| v >> y & 1 == 1)
                        {
                            mask |= 1 << ci;
                        }
                    }
                    layer.entry(mask).or_insert((cov, choice.clone()));
                }
            }
            reach = layer.keys().copied().collect();
            layers.push(layer);
        }
        if !reach.contains(&full) {
            let names: Vec<String> = minimal
                .iter()
                .map(|&i| {
                    let parts: Vec<String> =
                        self.tuples[i].iter().map(|&v| NodeSet(v).to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            return Err(format!(
                "no selection covers the finitely-supported open tuples {}",
                names.join(", ")
            ));
        }
        // Walk back through the layers to recover one covering assignment.
        let mut solution = Vec::new();
        let mut cov = full;
        for (li, &k) in positions.iter().enumerate().rev() {
            let (prev, choice) = layers[li][&cov].clone();
            solution.push((k, choice));
            cov = prev;
        }
        solution.reverse();
        Ok(solution)
    }

    fn choices_at(&self, k: usize) -> Vec<Vec<usize>> {
        let k = self.fold(k);
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for rows in &self.orbits {
            let opts = bits(rows[k - 1]);
            let mut next = Vec::with_capacity(out.len() * opts.len());
            for partial in &out {
                for &y in &opts {
                    let mut c = partial.clone();
                    c.push(y);
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }

    fn default_choice(&self, k: usize) -> Vec<usize> {
        let k = self.fold(k);
        self.orbits.iter().map(|rows| rows[k - 1].trailing_zeros() as usize).collect()
    }

    /// Choice at step k preferring nodes inside `w` when possible.
    fn choice_preferring(&self, k: usize, w: u64) -> Vec<usize> {
        let k = self.fold(k);
        self.orbits
            .iter()
            .map(|rows| {
                let r = rows[k - 1];
                let inside = r & w;
                (if inside != 0 { inside } else { r }).trailing_zeros() as usize
            })
            .collect()
    }

    fn default_schedule(&self) -> SelectionSchedule {
        self.schedule_from(Vec::new())
    }

    fn prefer_schedule(&self, w: u64) -> SelectionSchedule {
        let frame = self.frame();
        let horizon = frame.len();
        let assignments: BTreeMap<usize, Vec<usize>> =
            (1..=horizon).map(|k| (k, self.choice_preferring(k, w))).collect();
        let tail: Vec<Vec<usize>> = (0..frame.per)
            .map(|r| self.choice_preferring(frame.thr + 1 + r, w))
            .collect();
        SelectionSchedule { horizon, period: frame.per, assignments, tail }
    }

    /// Builds a schedule from covering choices: conflict steps as solved,
    /// one dedicated period block per tuple for the infinitely-supported
    /// ones, defaults elsewhere.
    fn schedule_from(&self, covering: Vec<(usize, Vec<usize>)>) -> SelectionSchedule {
        let frame = self.frame();
        let horizon = frame.thr + frame.per * (self.tuples.len() + 1);
        let mut assignments: BTreeMap<usize, Vec<usize>> =
            (1..=horizon).map(|k| (k, self.default_choice(k))).collect();
        for (k, choice) in covering {
            assignments.insert(k, choice);
        }
        for (i, t) in self.tuples.iter().enumerate() {
            let block = frame.thr + i * frame.per;
            if let Some(k) = (block + 1..=block + frame.per).find(|&k| self.tuple_hit(t, k)) {
                let kk = self.fold(k);
                let choice: Vec<usize> = self
                    .orbits
                    .iter()
                    .zip(t)
                    .map(|(rows, &v)| (rows[kk - 1] & v).trailing_zeros() as usize)
                    .collect();
                assignments.insert(k, choice);
            }
        }
        let tail: Vec<Vec<usize>> =
            (0..frame.per).map(|r| self.default_choice(frame.thr + 1 + r)).collect();
        SelectionSchedule { horizon, period: frame.per, assignments, tail }
    }

    /// Evaluates a full selection over horizon H with period-per tail:
    /// do all achieved sets belong to the family?
    fn selection_ok(&self, horizon: usize, choice_at: &dyn Fn(usize) -> Vec<usize>) -> bool {
        let per = self.frame().per;
        self.tuples.iter().all(|t| {
            let achieved = Eps::from_periodic_fn(horizon, per, |n| {
                let rep = if n <= horizon {
                    n
                } else {
                    horizon - per + 1 + (n - (horizon - per + 1)) % per
                };
                let choice = choice_at(rep);
                choice.iter().zip(t).all(|(&y, &v)| v >> y & 1 == 1)
            });
            self.eng.fam.membership(&achieved)
        })
    }

    /// Bit position k folded into the frame window (orbit rows repeat
    /// with the frame period beyond the threshold).
    fn fold(&self, k: usize) -> usize {
        let frame = self.frame();
        if k <= frame.len() {
            k
        } else {
            frame.thr + 1 + (k - frame.thr - 1) % frame.per
        }
    }

    /// Bounded search over eventually periodic selections (period
    /// dividing the frame period beyond the horizon). `None` means the
    /// search is inconclusive; finding no certificate is not a refutation
    /// because the property quantifies over all selections.
    fn bounded_search(&self, want_schedule: bool) -> Option<Option<SelectionSchedule>> {
        let frame = self.frame();
        let ntuples = self.tuples.len().max(1);
        let horizon = frame.thr + 1 + frame.per * ntuples;

        // Cheap candidates first: the covering-style schedule with one
        // dedicated block per tuple, plus round-robin tails that hand the
        // periodic classes out to the tuples in rotated orders.
        let finite_idx: Vec<usize> = (0..self.tuples.len())
            .filter(|&i| self.hit_trail(&self.tuples[i]).is_finite())
            .collect();
        if let Ok(cov) = self.covering(&finite_idx) {
            let mut candidates = vec![self.schedule_from(cov.clone())];
            for offset in 0..ntuples {
                let mut sched = self.schedule_from(cov.clone());
                for r in 0..frame.per {
                    let t = &self.tuples[(r + offset) % ntuples];
                    let k = frame.thr + 1 + r;
                    if self.tuple_hit(t, k) {
                        sched.tail[r] = self
                            .orbits
                            .iter()
                            .zip(t)
                            .map(|(rows, &v)| (rows[k - 1] & v).trailing_zeros() as usize)
                            .collect();
                    }
                }
                candidates.push(sched);
            }
            for sched in candidates {
                if self.selection_ok(sched.horizon, &|n| sched.choice_at(n).clone()) {
                    return Some(want_schedule.then_some(sched));
                }
            }
        }

        // Exhaustive DFS when the selection space is small enough.
        let mut space: usize = 1;
        for k in 1..=horizon {
            let key = self.fold(k);
            for rows in &self.orbits {
                space = space.saturating_mul(rows[key - 1].count_ones() as usize);
                if space > SEARCH_BUDGET {
                    return None;
                }
            }
        }
        let mut assignment: Vec<Vec<usize>> = Vec::with_capacity(horizon);
        if self.dfs(horizon, &mut assignment) {
            let sched = SelectionSchedule {
                horizon,
                period: frame.per,
                assignments: (1..=horizon).map(|k| (k, assignment[k - 1].clone())).collect(),
                tail: (0..frame.per)
                    .map(|r| assignment[horizon - frame.per + r].clone())
                    .collect(),
            };
            return Some(want_schedule.then_some(sched));
        }
        None
    }

    fn dfs(&self, horizon: usize, assignment: &mut Vec<Vec<usize>>) -> bool {
        if assignment.len() == horizon {
            return self.selection_ok(horizon, &|n| assignment[n - 1].clone());
        }
        let key = self.fold(assignment.len() + 1);
        for choice in self.choices_at(key) {
            assignment.push(choice);
            if self.dfs(horizon, assignment) {
                return true;
            }
            assignment.pop();
        }
        false
    }
}

// ---------------------------------------------------------------------
// Strong properties.
// ---------------------------------------------------------------------

/// Per-node strong ℱ-hypercyclicity.
///
/// Exactness by family kind: all-nonempty — always exact (covering
/// search); any family on an anti-discrete topology (or whenever every
/// hittable step is forced) — exact; cofinite — exact; any kind — exact
/// No when the forced-to-hit range admits no member or (for families
/// without ∅) when the covering fails. Otherwise the bounded
/// eventually-periodic selection search returns Yes with a certificate
/// or Unknown.
pub fn strong_hypercyclic_vectors(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<(NodeSet, Vec<Verdict>), DynamicsError> {
    let systems = std::slice::from_ref(sys);
    let eng = Engine::new(systems, top, fam)?;
    let dom = eng.domain_all();
    let tuples: Vec<Vec<u64>> = eng.opens.iter().map(|&v| vec![v]).collect();
    let mut yes = NodeSet::empty();
    let mut verdicts = Vec::with_capacity(eng.n);
    for x in 0..eng.n {
        if !dom.contains(x) {
            verdicts.push(Verdict::no_note("orbit dies out: x leaves the common domain"));
            continue;
        }
        let orbits = vec![eng.source_rows(0, x)];
        let problem = StrongProblem { eng: &eng, orbits, tuples: &tuples, source: None };
        let out = problem.solve(false);
        if out.status == Status::Yes {
            yes.insert(x);
        }
        verdicts.push(Verdict {
            status: out.status,
            witness: (out.status == Status::Yes).then_some(Witness::Node(x)),
            refutation: out.refutation,
            note: out.note,
        });
    }
    Ok((yes, verdicts))
}

pub fn is_strongly_hypercyclic(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    let (yes, verdicts) = strong_hypercyclic_vectors(sys, top, fam)?;
    if let Some(x) = yes.first() {
        return Ok(Verdict::yes_node(x));
    }
    if verdicts.iter().any(|v| v.status == Status::Unknown) {
        return Ok(Verdict::unknown("some per-node strong searches were inconclusive"));
    }
    Ok(Verdict::no())
}

/// Materializes a witness selection for a strong ℱ-hypercyclic node.
pub fn strong_witness_schedule(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
    x: usize,
) -> Result<Option<SelectionSchedule>, DynamicsError> {
    let systems = std::slice::from_ref(sys);
    let eng = Engine::new(systems, top, fam)?;
    if x >= eng.n {
        return Err(DynamicsError::BadNode(x));
    }
    if !eng.domain_all().contains(x) {
        return Ok(None);
    }
    let tuples: Vec<Vec<u64>> = eng.opens.iter().map(|&v| vec![v]).collect();
    let orbits = vec![eng.source_rows(0, x)];
    let problem = StrongProblem { eng: &eng, orbits, tuples: &tuples, source: None };
    let out = problem.solve(true);
    Ok(out.schedule)
}

pub fn is_strongly_top_transitive(
    sys: &System,
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    let eng = Engine::new(std::slice::from_ref(sys), top, fam)?;
    let tuples: Vec<Vec<u64>> = eng.opens.iter().map(|&v| vec![v]).collect();
    let mut saw_unknown = false;
    for &u in &eng.opens {
        let rows = eng.set_rows(0, u);
        if let Some(k) = rows.iter().position(|&r| r == 0) {
            return Ok(Verdict {
                status: Status::No,
                witness: None,
                refutation: Some(Refutation {
                    source: Some(NodeSet(u)),
                    targets: vec![],
                    hit_set: None,
                }),
                note: Some(format!("ρ_{}(U) is empty, no selection exists", k + 1)),
            });
        }
        let problem = StrongProblem {
            eng: &eng,
            orbits: vec![rows],
            tuples: &tuples,
            source: Some(NodeSet(u)),
        };
        let out = problem.solve(false);
        match out.status {
            Status::No => {
                return Ok(Verdict {
                    status: Status::No,
                    witness: None,
                    refutation: out.refutation,
                    note: out.note,
                })
            }
            Status::Unknown => saw_unknown = true,
            Status::Yes => {}
        }
    }
    if saw_unknown {
        return Ok(Verdict::unknown("some per-open strong searches were inconclusive"));
    }
    Ok(Verdict::yes())
}

// ---------------------------------------------------------------------
// Disjoint properties.
// ---------------------------------------------------------------------

fn check_disjoint(systems: &[System]) -> Result<(), DynamicsError> {
    if systems.len() < 2 {
        return Err(DynamicsError::TooFewSystems);
    }
    Ok(())
}

/// ⋂ⱼ S_j(x, V_j): the simultaneous return-time set.
pub fn d_hit_set(
    systems: &[System],
    x: usize,
    targets: &[NodeSet],
) -> Result<Eps, DynamicsError> {
    check_disjoint(systems)?;
    let n = systems[0].n();
    if systems.iter().any(|s| s.n() != n) {
        return Err(DynamicsError::MixedSizes);
    }
    if targets.len() != systems.len() {
        return Err(DynamicsError::TooFewSystems);
    }
    if x >= n {
        return Err(DynamicsError::BadNode(x));
    }
    let top = FiniteTopology::antidiscrete(n);
    let fam = FamilySpec::all_nonempty();
    let eng = Engine::new(systems, &top, &fam)?;
    let frame = eng.frame;
    let rows: Vec<Vec<u64>> = (0..systems.len()).map(|j| eng.source_rows(j, x)).collect();
    let mut trail = Trail::empty(frame);
    for k in 1..=frame.len() {
        if rows.iter().zip(targets).all(|(r, v)| r[k - 1] & v.0 != 0) {
            trail.set(k);
        }
    }
    Ok(trail.to_eps())
}

pub fn d_hypercyclic_vectors(
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<NodeSet, DynamicsError> {
    check_disjoint(systems)?;
    let eng = Engine::new(systems, top, fam)?;
    let count = eng.tuple_count()?;
    let tuples: Vec<Vec<u64>> = (0..count).map(|i| eng.tuple_at(i)).collect();
    let mut out = NodeSet::empty();
    for x in eng.domain_all().iter() {
        let rows: Vec<Vec<u64>> = (0..systems.len()).map(|j| eng.source_rows(j, x)).collect();
        let mut ok = true;
        for t in &tuples {
            if fam.is_all_nonempty() {
                let hit = (1..=eng.frame.len())
                    .any(|k| rows.iter().zip(t).all(|(r, &v)| r[k - 1] & v != 0));
                if !hit {
                    ok = false;
                    break;
                }
            } else {
                let mut trail = Trail::empty(eng.frame);
                for k in 1..=eng.frame.len() {
                    if rows.iter().zip(t).all(|(r, &v)| r[k - 1] & v != 0) {
                        trail.set(k);
                    }
                }
                if !fam.membership(&trail.to_eps()) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.insert(x);
        }
    }
    Ok(out)
}

pub fn is_d_hypercyclic(
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    let vs = d_hypercyclic_vectors(systems, top, fam)?;
    Ok(match vs.first() {
        Some(x) => Verdict::yes_node(x),
        None => Verdict::no(),
    })
}

pub fn is_d_top_transitive(
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    check_disjoint(systems)?;
    let eng = Engine::new(systems, top, fam)?;
    let count = eng.tuple_count()?;
    let tuples: Vec<Vec<u64>> = (0..count).map(|i| eng.tuple_at(i)).collect();
    for &u in &eng.opens {
        // The ∃x sits inside the n-set: the return set of a tuple is the
        // union over x ∈ U of the simultaneous hit sets.
        let per_source: Vec<Vec<Vec<u64>>> = NodeSet(u)
            .iter()
            .map(|x| (0..systems.len()).map(|j| eng.source_rows(j, x)).collect())
            .collect();
        for t in &tuples {
            if fam.is_all_nonempty() {
                let hit = (1..=eng.frame.len()).any(|k| {
                    per_source
                        .iter()
                        .any(|rows| rows.iter().zip(t).all(|(r, &v)| r[k - 1] & v != 0))
                });
                if hit {
                    continue;
                }
                return Ok(Verdict::no_because(Refutation {
                    source: Some(NodeSet(u)),
                    targets: t.iter().map(|&v| NodeSet(v)).collect(),
                    hit_set: Some(Eps::empty()),
                }));
            }
            let mut trail = Trail::empty(eng.frame);
            for k in 1..=eng.frame.len() {
                if per_source
                    .iter()
                    .any(|rows| rows.iter().zip(t).all(|(r, &v)| r[k - 1] & v != 0))
                {
                    trail.set(k);
                }
            }
            let s = trail.to_eps();
            if !fam.membership(&s) {
                return Ok(Verdict::no_because(Refutation {
                    source: Some(NodeSet(u)),
                    targets: t.iter().map(|&v| NodeSet(v)).collect(),
                    hit_set: Some(s),
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

pub fn strong_d_hypercyclic_vectors(
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<(NodeSet, Vec<Verdict>), DynamicsError> {
    check_disjoint(systems)?;
    let eng = Engine::new(systems, top, fam)?;
    let count = eng.tuple_count()?;
    let tuples: Vec<Vec<u64>> = (0..count).map(|i| eng.tuple_at(i)).collect();
    let dom = eng.domain_all();
    let mut yes = NodeSet::empty();
    let mut verdicts = Vec::with_capacity(eng.n);
    for x in 0..eng.n {
        if !dom.contains(x) {
            verdicts.push(Verdict::no_note("x leaves the common domain of the tuple"));
            continue;
        }
        let orbits: Vec<Vec<u64>> =
            (0..systems.len()).map(|j| eng.source_rows(j, x)).collect();
        let problem = StrongProblem { eng: &eng, orbits, tuples: &tuples, source: None };
        let out = problem.solve(false);
        if out.status == Status::Yes {
            yes.insert(x);
        }
        verdicts.push(Verdict {
            status: out.status,
            witness: (out.status == Status::Yes).then_some(Witness::Node(x)),
            refutation: out.refutation,
            note: out.note,
        });
    }
    Ok((yes, verdicts))
}

pub fn is_strongly_d_hypercyclic(
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    let (yes, verdicts) = strong_d_hypercyclic_vectors(systems, top, fam)?;
    if let Some(x) = yes.first() {
        return Ok(Verdict::yes_node(x));
    }
    if verdicts.iter().any(|v| v.status == Status::Unknown) {
        return Ok(Verdict::unknown("some per-node strong searches were inconclusive"));
    }
    Ok(Verdict::no())
}

/// Strong disjoint topological transitivity is exactly decidable for
/// every built-in family: the witness x and its selection may depend on
/// the open tuple, so the achievable return sets per (U, tuple, x) form
/// the full interval between the forced set and the hit set.
pub fn is_strongly_d_top_transitive(
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    check_disjoint(systems)?;
    let eng = Engine::new(systems, top, fam)?;
    let count = eng.tuple_count()?;
    let tuples: Vec<Vec<u64>> = (0..count).map(|i| eng.tuple_at(i)).collect();
    let dom = eng.domain_all();
    let mut source_rows: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
    for x in dom.iter() {
        source_rows.insert(x, (0..systems.len()).map(|j| eng.source_rows(j, x)).collect());
    }
    for &u in &eng.opens {
        for t in &tuples {
            let mut found = false;
            for x in NodeSet(u).iter() {
                let Some(rows) = source_rows.get(&x) else { continue };
                if fam.is_all_nonempty() {
                    // Some family member between forced and hit set exists
                    // iff the hit set is nonempty.
                    if (1..=eng.frame.len())
                        .any(|k| rows.iter().zip(t).all(|(r, &v)| r[k - 1] & v != 0))
                    {
                        found = true;
                        break;
                    }
                    continue;
                }
                let mut hit = Trail::empty(eng.frame);
                let mut forced = Trail::empty(eng.frame);
                for k in 1..=eng.frame.len() {
                    if rows.iter().zip(t).all(|(r, &v)| r[k - 1] & v != 0) {
                        hit.set(k);
                    }
                    if rows.iter().zip(t).all(|(r, &v)| r[k - 1] & !v == 0) {
                        forced.set(k);
                    }
                }
                if fam.range_possible(&forced.to_eps(), &hit.to_eps()) {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(Verdict::no_because(Refutation {
                    source: Some(NodeSet(u)),
                    targets: t.iter().map(|&v| NodeSet(v)).collect(),
                    hit_set: None,
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

// ---------------------------------------------------------------------
// Shift transfer (hypercyclicity propagates backwards along walks when
// the family tolerates shifts).
// ---------------------------------------------------------------------

/// Instance-level check: if some x ∈ ρ^l(z) is hypercyclic and the family
/// tolerates the l-shift on every realized return set of z, then z must
/// be hypercyclic. Returns No with the violating open set if the shift
/// hypothesis fails on this instance, otherwise verifies the implication.
pub fn check_shift_transfer(
    rel: &BooleanRelation,
    top: &FiniteTopology,
    fam: &FamilySpec,
    z: usize,
    l: usize,
) -> Result<Verdict, DynamicsError> {
    if l == 0 {
        return Err(DynamicsError::ZeroShift);
    }
    if z >= rel.n() {
        return Err(DynamicsError::BadNode(z));
    }
    let sys = System::Iterated(rel.clone());
    let eng = Engine::new(std::slice::from_ref(&sys), top, fam)?;
    let hc = hypercyclic_vectors(&sys, top, fam)?;
    let reach = NodeSet(rel.power(l).row(z));
    let premise = reach.iter().any(|x| hc.contains(x));

    let z_rows = eng.source_rows(0, z);
    for &v in &eng.opens {
        let s_z = eng.hit_eps(&z_rows, v);
        let shifted = s_z.shift(l);
        if fam.membership(&shifted) && !fam.membership(&s_z) {
            return Ok(Verdict {
                status: Status::No,
                witness: None,
                refutation: Some(Refutation {
                    source: None,
                    targets: vec![NodeSet(v)],
                    hit_set: Some(s_z),
                }),
                note: Some(format!("family does not transfer under the {l}-shift")),
            });
        }
    }
    if premise {
        let conclusion = hc.contains(z) && eng.domain_all().contains(z);
        if conclusion {
            Ok(Verdict::yes_node(z))
        } else {
            Ok(Verdict::no_note(
                "transfer hypothesis held on realized sets but z is not hypercyclic",
            ))
        }
    } else {
        Ok(Verdict {
            status: Status::Yes,
            witness: None,
            refutation: None,
            note: Some("premise vacuous: no hypercyclic vector in ρ^l(z)".into()),
        })
    }
}

// ---------------------------------------------------------------------
// Property tags for driving all deciders uniformly.
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PropertyTag {
    Hypercyclic,
    StrongHypercyclic,
    Transitive,
    StrongTransitive,
    DHypercyclic,
    StrongDHypercyclic,
    DTransitive,
    StrongDTransitive,
}

impl PropertyTag {
    pub fn is_disjoint(&self) -> bool {
        matches!(
            self,
            PropertyTag::DHypercyclic
                | PropertyTag::StrongDHypercyclic
                | PropertyTag::DTransitive
                | PropertyTag::StrongDTransitive
        )
    }

    pub const ALL_SINGLE: [PropertyTag; 4] = [
        PropertyTag::Hypercyclic,
        PropertyTag::StrongHypercyclic,
        PropertyTag::Transitive,
        PropertyTag::StrongTransitive,
    ];

    pub const ALL_DISJOINT: [PropertyTag; 4] = [
        PropertyTag::DHypercyclic,
        PropertyTag::StrongDHypercyclic,
        PropertyTag::DTransitive,
        PropertyTag::StrongDTransitive,
    ];
}

impl fmt::Display for PropertyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PropertyTag::Hypercyclic => "hypercyclic",
            PropertyTag::StrongHypercyclic => "strong-hypercyclic",
            PropertyTag::Transitive => "transitive",
            PropertyTag::StrongTransitive => "strong-transitive",
            PropertyTag::DHypercyclic => "d-hypercyclic",
            PropertyTag::StrongDHypercyclic => "strong-d-hypercyclic",
            PropertyTag::DTransitive => "d-transitive",
            PropertyTag::StrongDTransitive => "strong-d-transitive",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for PropertyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "hypercyclic" => PropertyTag::Hypercyclic,
            "strong-hypercyclic" => PropertyTag::StrongHypercyclic,
            "transitive" => PropertyTag::Transitive,
            "strong-transitive" => PropertyTag::StrongTransitive,
            "d-hypercyclic" => PropertyTag::DHypercyclic,
            "strong-d-hypercyclic" => PropertyTag::StrongDHypercyclic,
            "d-transitive" => PropertyTag::DTransitive,
            "strong-d-transitive" => PropertyTag::StrongDTransitive,
            _ => return Err(format!("unknown property `{s}`")),
        })
    }
}

/// Runs the decider named by `tag`. Single-relation tags use the first
/// system; disjoint tags need at least two.
pub fn decide(
    tag: PropertyTag,
    systems: &[System],
    top: &FiniteTopology,
    fam: &FamilySpec,
) -> Result<Verdict, DynamicsError> {
    if systems.is_empty() {
        return Err(DynamicsError::TooFewSystems);
    }
    match tag {
        PropertyTag::Hypercyclic => is_hypercyclic(&systems[0], top, fam),
        PropertyTag::StrongHypercyclic => is_strongly_hypercyclic(&systems[0], top, fam),
        PropertyTag::Transitive => is_top_transitive(&systems[0], top, fam),
        PropertyTag::StrongTransitive => is_strongly_top_transitive(&systems[0], top, fam),
        PropertyTag::DHypercyclic => is_d_hypercyclic(systems, top, fam),
        PropertyTag::StrongDHypercyclic => is_strongly_d_hypercyclic(systems, top, fam),
        PropertyTag::DTransitive => is_d_top_transitive(systems, top, fam),
        PropertyTag::StrongDTransitive => is_strongly_d_top_transitive(systems, top, fam),
    }
}
