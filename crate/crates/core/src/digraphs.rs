//! Digraphs and tournaments: connectivity, primitivity and exponents,
//! weak-property delegation to the underlying graph, enumeration up to
//! isomorphism, Hamiltonian path construction, S-collections, the
//! five-node counterexample pair, and the tournament survey.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{self, PropertyTag, Status, System, Verdict};
use crate::family::FamilySpec;
use crate::graphs::{self, PairScope, SIndex, SimpleGraph};
use crate::natset::EventuallyPeriodicSet;
use crate::nodes::NodeSet;
use crate::relations::{hit_set_uv, BooleanRelation};
use crate::topology::FiniteTopology;

type Eps = EventuallyPeriodicSet;

#[derive(Debug, Error)]
pub enum DigraphError {
    #[error("digraphs need at least 2 nodes")]
    TooSmall,
    #[error("node count {0} out of range")]
    BadNodeCount(usize),
    #[error("arc ({0}, {1}) out of range or a loop")]
    BadArc(usize, usize),
    #[error("not a tournament: pair ({0}, {1}) has {2} arcs")]
    NotTournament(usize, usize, usize),
    #[error("digraph is not primitive")]
    NotPrimitive,
    #[error("not strongly connected")]
    NotStronglyConnected,
    #[error("tournament enumeration guarded at n ≤ {max}, got n = {n}")]
    EnumerationGuard { n: usize, max: usize },
    #[error("the counterexample construction needs n ≥ 5; for n ≤ 4 no such pair exists")]
    CounterexampleTooSmall,
    #[error(transparent)]
    Graph(#[from] graphs::GraphError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
}

pub const TOURNAMENT_MAX_NODES: usize = 7;

/// Loop-free directed graph on {0, …, n−1} with n ≥ 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, DigraphError> {
        if n < 2 {
            return Err(DigraphError::TooSmall);
        }
        if n > crate::nodes::MAX_NODES {
            return Err(DigraphError::BadNodeCount(n));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in arcs {
            if a == b || a >= n || b >= n {
                return Err(DigraphError::BadArc(a, b));
            }
            set.insert((a, b));
        }
        Ok(Digraph { n, arcs: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.arcs.contains(&(a, b))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_arc(v, u)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_arc(u, v)).count()
    }

    /// No pair of opposite arcs.
    pub fn is_asymmetric(&self) -> bool {
        self.arcs.iter().all(|&(a, b)| !self.arcs.contains(&(b, a)))
    }

    pub fn to_relation(&self) -> BooleanRelation {
        let arcs: Vec<(usize, usize)> = self.arcs.iter().copied().collect();
        BooleanRelation::from_arcs(self.n, &arcs).expect("validated size")
    }

    /// The underlying simple graph (each arc made symmetric).
    pub fn underlying(&self) -> SimpleGraph {
        let edges: Vec<(usize, usize)> = self.arcs.iter().copied().collect();
        SimpleGraph::new(self.n, &edges).expect("loop-free arcs")
    }

    pub fn is_strongly_connected(&self) -> bool {
        let rel = self.to_relation();
        let mut reach = BooleanRelation::identity(self.n).expect("size");
        for _ in 0..self.n {
            reach = reach.union(&crate::relations::compose(&rel, &reach).expect("same n")).expect("same n");
        }
        (0..self.n).all(|i| (0..self.n).all(|j| reach.has_arc(i, j)))
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.underlying().is_connected()
    }

    pub fn is_primitive(&self) -> bool {
        self.to_relation().power_trace().exponent().is_some()
    }

    /// Smallest k with every entry of the k-th adjacency power positive.
    pub fn exponent(&self) -> Result<usize, DigraphError> {
        self.to_relation().power_trace().exponent().ok_or(DigraphError::NotPrimitive)
    }

    /// Text format: `nodes: n` + `arc: i j` lines, 1-based.
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes: {}\n", self.n);
        for &(a, b) in &self.arcs {
            out.push_str(&format!("arc: {} {}\n", a + 1, b + 1));
        }
        out
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs)
    }
}

/// Complete asymmetric digraph: every node pair joined by exactly one arc.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tournament(Digraph);

impl Tournament {
    pub fn new(digraph: Digraph) -> Result<Self, DigraphError> {
        for i in 0..digraph.n {
            for j in i + 1..digraph.n {
                let c = digraph.has_arc(i, j) as usize + digraph.has_arc(j, i) as usize;
                if c != 1 {
                    return Err(DigraphError::NotTournament(i, j, c));
                }
            }
        }
        Ok(Tournament(digraph))
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self, DigraphError> {
        Tournament::new(Digraph::new(n, arcs)?)
    }

    /// Orientation bits over pairs (i, j), i < j in lexicographic order:
    /// bit set means the arc runs i → j.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self, DigraphError> {
        let mut arcs = Vec::new();
        let mut b = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits >> b & 1 == 1 {
                    arcs.push((i, j));
                } else {
                    arcs.push((j, i));
                }
                b += 1;
            }
        }
        Tournament::from_arcs(n, &arcs)
    }

    pub fn bits(&self) -> u64 {
        let mut bits = 0u64;
        let mut b = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.0.has_arc(i, j) {
                    bits |= 1 << b;
                }
                b += 1;
            }
        }
        bits
    }

    /// Bit string over the pair order, most significant pair first.
    pub fn bit_string(&self) -> String {
        let m = self.n() * (self.n() - 1) / 2;
        let bits = self.bits();
        (0..m).map(|b| if bits >> b & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tournament: {}\n", self.n());
        for &(a, b) in &self.0.arcs {
            out.push_str(&format!("arc: {} {}\n", a + 1, b + 1));
        }
        out
    }

    /// Lexicographically minimal orientation bits over all relabelings.
    pub fn canonical_bits(&self) -> u64 {
        let n = self.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        graphs::permute(&mut perm, 0, &mut |p| {
            let mut bits = 0u64;
            let mut b = 0;
            for i in 0..n {
                for j in i + 1..n {
                    // Arc between the preimages of i and j.
                    let (a, c) = (p.iter().position(|&x| x == i).unwrap(),
                                  p.iter().position(|&x| x == j).unwrap());
                    if self.0.has_arc(a, c) {
                        bits |= 1 << b;
                    }
                    b += 1;
                }
            }
            best = best.min(bits);
        });
        best
    }

    /// A Hamiltonian directed path, built by inserting each node at the
    /// first position the arc directions permit; validated before return.
    pub fn redei_path(&self) -> Vec<usize> {
        let n = self.n();
        let mut path: Vec<usize> = vec![0];
        for k in 1..n {
            let mut inserted = false;
            for pos in 0..=path.len() {
                let ok_before = pos == 0 || self.0.has_arc(path[pos - 1], k);
                let ok_after = pos == path.len() || self.0.has_arc(k, path[pos]);
                if ok_before && ok_after {
                    path.insert(pos, k);
                    inserted = true;
                    break;
                }
            }
            assert!(inserted, "insertion always succeeds in a tournament");
        }
        for w in path.windows(2) {
            assert!(self.0.has_arc(w[0], w[1]), "constructed path must follow arcs");
        }
        path
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament(n={}, bits={})", self.n(), self.bit_string())
    }
}

/// All labeled loop-free digraphs on n nodes.
pub fn enumerate_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    v.push((i, j));
                }
            }
        }
        v
    };
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| {
        let arcs: Vec<(usize, usize)> =
            (0..m).filter(|&b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        Digraph::new(n, &arcs).expect("valid arcs")
    })
}

/// Labeled tournaments in orientation-bit order, or isomorphism-class
/// representatives (grown by augmentation, canonicalized by the
/// lexicographically minimal bit string over all relabelings).
pub fn enumerate_tournaments(n: usize, up_to_iso: bool) -> Result<Vec<Tournament>, DigraphError> {
    if !(2..=TOURNAMENT_MAX_NODES).contains(&n) {
        return Err(DigraphError::EnumerationGuard { n, max: TOURNAMENT_MAX_NODES });
    }
    if !up_to_iso {
        let m = n * (n - 1) / 2;
        return Ok((0u64..1 << m).map(|bits| Tournament::from_bits(n, bits).expect("valid")).collect());
    }
    let mut classes: Vec<Tournament> = vec![Tournament::from_bits(2, 0).expect("valid")];
    for size in 3..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for base in &classes {
            // Orient all arcs between the new node and the old ones.
            for mask in 0u64..1 << (size - 1) {
                let mut arcs: Vec<(usize, usize)> = base.0.arcs.iter().copied().collect();
                for b in 0..size - 1 {
                    if mask >> b & 1 == 1 {
                        arcs.push((b, size - 1));
                    } else {
                        arcs.push((size - 1, b));
                    }
                }
                let t = Tournament::from_arcs(size, &arcs).expect("valid");
                if seen.insert(t.canonical_bits()) {
                    next.push(t);
                }
            }
        }
        classes = next;
    }
    classes.sort_by_key(|t| t.canonical_bits());
    Ok(classes)
}

/// The deduplicated collection { S(U, V) } of a tournament.
pub fn tournament_s_collection(
    t: &Tournament,
    scope: PairScope<'_>,
) -> Result<SIndex, DigraphError> {
    let trace = t.0.to_relation().power_trace();
    Ok(graphs::s_index_from_trace(&trace, t.n(), scope)?)
}

/// Delegates a property to the underlying simple graph(s) — the weak
/// variant of the property — and asserts the directed property implies it
/// on this instance.
pub fn weak_property(
    digraphs: &[Digraph],
    top: &FiniteTopology,
    fam: &FamilySpec,
    tag: PropertyTag,
) -> Result<Verdict, DigraphError> {
    let underlying: Vec<System> = digraphs
        .iter()
        .map(|d| System::Iterated(d.underlying().to_relation()))
        .collect();
    let weak = dynamics::decide(tag, &underlying, top, fam)?;
    let directed: Vec<System> =
        digraphs.iter().map(|d| System::Iterated(d.to_relation())).collect();
    let strong = dynamics::decide(tag, &directed, top, fam)?;
    // A directed Yes forces a weak Yes: the symmetric closure extends the
    // relation, and extensions preserve the properties under condition (I).
    if strong.status == Status::Yes && fam.upward_closed() {
        assert!(
            weak.status == Status::Yes,
            "directed property must imply the weak property"
        );
    }
    Ok(weak)
}

/// Report of the exponent-based necessary condition on a strongly
/// connected tournament (or tuple of them).
#[derive(Clone, Debug)]
pub struct ExponentCheck {
    pub exponent: usize,
    pub diameter: usize,
    /// Every realized S(U, V) over the scope contains {n : n ≥ e}.
    pub tail_ok: bool,
    /// d ≤ e ≤ d + 3.
    pub bounds_ok: bool,
    /// With an ℱ in hand: the family guarantees tails that start late
    /// enough, so ℱ-hypercyclicity is not already ruled out.
    pub family_consistent: Option<bool>,
    pub verdict: Verdict,
}

/// Exponent e, diameter d, the tail-containment of every realized
/// singleton S-set, and the d ≤ e ≤ d+3 window, for one strongly
/// connected tournament or the max-exponent of a tuple.
pub fn exponent_check(
    tournaments: &[Tournament],
    fam: Option<&FamilySpec>,
) -> Result<ExponentCheck, DigraphError> {
    assert!(!tournaments.is_empty());
    for t in tournaments {
        if !t.0.is_strongly_connected() {
            return Err(DigraphError::NotStronglyConnected);
        }
    }
    let mut exponent = 0;
    let mut diameter = 0;
    let mut tail_ok = true;
    let mut bounds_ok = true;
    for t in tournaments {
        let e = t.0.exponent()?;
        let trace = t.0.to_relation().power_trace();
        let d = directed_diameter(&t.0);
        exponent = exponent.max(e);
        diameter = diameter.max(d);
        // The d ≤ e ≤ d+3 window is a 5-node-and-up fact; the strong
        // 4-node tournament has d = 3 and e = 9.
        if t.n() >= 5 && !(d <= e && e <= d + 3) {
            bounds_ok = false;
        }
        let tail = Eps::tail_from(e);
        for u in 0..t.n() {
            for v in 0..t.n() {
                let s = hit_set_uv(&trace, NodeSet::singleton(u), NodeSet::singleton(v));
                if !tail.is_subset(&s) {
                    tail_ok = false;
                }
            }
        }
    }
    // Cross-check of the literal universal reading ("hypercyclic forces
    // every family member to contain the tail from e"): when the decider
    // says Yes but the family has members missing that tail, the literal
    // claim is contradicted on this instance and reported, not reconciled.
    let family_consistent = match fam {
        None => None,
        Some(f) => {
            let n = tournaments[0].n();
            let top = FiniteTopology::discrete(n);
            let yes = if tournaments.len() == 1 {
                dynamics::is_hypercyclic(
                    &System::Iterated(tournaments[0].0.to_relation()),
                    &top,
                    f,
                )?
                .is_yes()
            } else {
                let systems: Vec<System> = tournaments
                    .iter()
                    .map(|t| System::Iterated(t.0.to_relation()))
                    .collect();
                dynamics::is_d_hypercyclic(&systems, &top, f)?.is_yes()
            };
            let every_member_has_tail =
                matches!(f.guaranteed_tail_start(), Some(e2) if e2 <= exponent);
            Some(!yes || every_member_has_tail)
        }
    };
    let ok = tail_ok && bounds_ok;
    let verdict = if ok {
        Verdict { status: Status::Yes, witness: None, refutation: None, note: None }
    } else {
        Verdict {
            status: Status::No,
            witness: None,
            refutation: None,
            note: Some(format!(
                "exponent facts violated: e={exponent} d={diameter} tail_ok={tail_ok}"
            )),
        }
    };
    Ok(ExponentCheck { exponent, diameter, tail_ok, bounds_ok, family_consistent, verdict })
}

/// max over ordered pairs of directed distance.
pub fn directed_diameter(d: &Digraph) -> usize {
    let n = d.n;
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if d.has_arc(v, u) && dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        best = best.max(dist.iter().copied().max().unwrap());
    }
    best
}

pub fn is_hamiltonian(t: &Tournament) -> bool {
    // A tournament has a Hamiltonian cycle iff it is strongly connected;
    // checked directly by brute force over rotations for small n.
    let n = t.n();
    let mut perm: Vec<usize> = (1..n).collect();
    let mut found = false;
    graphs::permute(&mut perm, 0, &mut |p| {
        if found {
            return;
        }
        let mut cycle = vec![0];
        cycle.extend_from_slice(p);
        let ok = cycle
            .iter()
            .zip(cycle.iter().cycle().skip(1))
            .take(n)
            .all(|(&a, &b)| t.0.has_arc(a, b));
        if ok {
            found = true;
        }
    });
    found
}

/// The counterexample pair for n ≥ 5: two tournaments and the topology
/// {∅, {x2}, {x3}, {x2, x3}, X} which together are d-hypercyclic with
/// unique witness x1 but not strongly d-hypercyclic. Arcs not fixed by
/// the defining families are oriented from lower to higher index.
pub fn build_counterexample_pair(
    n: usize,
) -> Result<(Tournament, Tournament, FiniteTopology), DigraphError> {
    if n < 5 {
        return Err(DigraphError::CounterexampleTooSmall);
    }
    if n > TOURNAMENT_MAX_NODES {
        return Err(DigraphError::EnumerationGuard { n, max: TOURNAMENT_MAX_NODES });
    }
    // 0-based translations of the two arc families (x1 = node 0, ...).
    let mut t1: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        t1.push((0, i));
    }
    for i in 2..n {
        t1.push((1, i));
    }
    for i in 0..n {
        if i == 3 || i >= 5 {
            t1.push((2, i));
        }
    }
    for i in 4..n {
        t1.push((3, i));
    }
    for i in 0..n {
        if i == 2 || i >= 5 {
            t1.push((4, i));
        }
    }
    // The second tournament mirrors the first with the roles of x2 and x3
    // swapped: x3 beats everything except x1, and x2, x4, x5 form the
    // 3-cycle x2 → x4 → x5 → x2 (so x2's family skips x5, keeping the
    // pair {x2, x5} single-arc).
    let mut t2: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        t2.push((0, i));
    }
    for i in 0..n {
        if i == 1 || i >= 3 {
            t2.push((2, i));
        }
    }
    for i in 0..n {
        if i == 3 || i >= 5 {
            t2.push((1, i));
        }
    }
    for i in 4..n {
        t2.push((3, i));
    }
    for i in 0..n {
        if i == 1 || i >= 5 {
            t2.push((4, i));
        }
    }
    let fill = |arcs: &mut Vec<(usize, usize)>| {
        for i in 0..n {
            for j in i + 1..n {
                if !arcs.contains(&(i, j)) && !arcs.contains(&(j, i)) {
                    arcs.push((i, j));
                }
            }
        }
    };
    fill(&mut t1);
    fill(&mut t2);
    let t1 = Tournament::from_arcs(n, &t1)?;
    let t2 = Tournament::from_arcs(n, &t2)?;
    let top = FiniteTopology::validate(
        n,
        &[
            NodeSet::empty(),
            NodeSet::singleton(1),
            NodeSet::singleton(2),
            NodeSet::from_iter([1, 2]),
            NodeSet::full(n),
        ],
    )
    .expect("five-set topology");

    // Postcondition, verified by the deciders themselves.
    let systems = vec![
        System::Iterated(t1.0.to_relation()),
        System::Iterated(t2.0.to_relation()),
    ];
    let fam = FamilySpec::all_nonempty();
    let vectors = dynamics::d_hypercyclic_vectors(&systems, &top, &fam)?;
    assert_eq!(vectors, NodeSet::singleton(0), "unique d-hypercyclic vector must be x1");
    let strong = dynamics::is_strongly_d_hypercyclic(&systems, &top, &fam)?;
    assert!(strong.is_no(), "the pair must not be strongly d-hypercyclic");
    Ok((t1, t2, top))
}

/// One row of the tournament survey.
#[derive(Clone, Debug)]
pub struct SurveyRow {
    pub canonical_bits: u64,
    pub bit_string: String,
    pub s_value: usize,
    pub exponent: Option<usize>,
    pub strongly_connected: bool,
}

/// Survey of S values over tournaments with n nodes: per class (or per
/// labeled tournament), the S value, the exponent when primitive, and
/// strong connectivity. Rows arrive in deterministic canonical-bits
/// order.
pub fn survey(
    n: usize,
    up_to_iso: bool,
    strong_only: bool,
) -> Result<Vec<SurveyRow>, DigraphError> {
    let ts = enumerate_tournaments(n, up_to_iso)?;
    let mut rows = Vec::new();
    for t in ts {
        if strong_only && !t.0.is_strongly_connected() {
            continue;
        }
        let s = tournament_s_collection(&t, PairScope::AllSubsets)?;
        let trace = t.0.to_relation().power_trace();
        rows.push(SurveyRow {
            canonical_bits: if up_to_iso { t.canonical_bits() } else { t.bits() },
            bit_string: t.bit_string(),
            s_value: s.count,
            exponent: trace.exponent(),
            strongly_connected: t.0.is_strongly_connected(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyKind;

    fn cycle3() -> Digraph {
        Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn transitive_tournament(n: usize) -> Tournament {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                arcs.push((i, j));
            }
        }
        Tournament::from_arcs(n, &arcs).unwrap()
    }

    fn pende_i() -> Digraph {
        Digraph::new(5, &[(2, 1), (2, 4), (1, 0), (0, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn connectivity() {
        assert!(cycle3().is_strongly_connected());
        let t4 = transitive_tournament(4);
        assert!(!t4.0.is_strongly_connected());
        assert!(t4.0.is_weakly_connected());
        let g = pende_i();
        assert!(g.is_weakly_connected());
        assert!(!g.is_strongly_connected());
    }

    #[test]
    fn underlying_graph() {
        let g = pende_i().underlying();
        assert_eq!(g.edge_count(), 4);
        assert!(g.has_edge(0, 3));
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn primitivity_and_exponents() {
        // Permutation powers never become all-positive.
        assert!(!cycle3().is_primitive());
        assert!(matches!(cycle3().exponent(), Err(DigraphError::NotPrimitive)));

        // Once all-positive, all later powers stay all-positive.
        for t in enumerate_tournaments(5, true).unwrap() {
            if let Ok(e) = t.0.exponent() {
                let trace = t.0.to_relation().power_trace();
                assert!((3..=7).contains(&e), "3 ≤ e ≤ n+2 for n = 5, got {e}");
                for q in e..e + 6 {
                    assert!(trace.power(q).all_ones(), "power {q} must stay positive");
                }
                // Minimality: power e−1 misses some pair.
                assert!(!trace.power(e - 1).all_ones());
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tournaments(2, true).unwrap().len(), 1);
        assert_eq!(enumerate_tournaments(3, true).unwrap().len(), 2);
        assert_eq!(enumerate_tournaments(4, true).unwrap().len(), 4);
        assert_eq!(enumerate_tournaments(5, true).unwrap().len(), 12);
        assert_eq!(enumerate_tournaments(3, false).unwrap().len(), 8);
        assert!(enumerate_tournaments(8, false).is_err());
        assert_eq!(enumerate_digraphs(3).count(), 64);
    }

    #[test]
    fn redei_paths() {
        // Transitive tournament: the unique topological order.
        assert_eq!(transitive_tournament(4).redei_path(), vec![0, 1, 2, 3]);
        // 3-cycle: any rotation works; validity is asserted inside.
        let c = Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(c.redei_path().len(), 3);
        // Every labeled 5-tournament gets a valid path (validated inside).
        for t in enumerate_tournaments(5, false).unwrap() {
            assert_eq!(t.redei_path().len(), 5);
        }
    }

    #[test]
    fn s_collections_of_4_tournament_classes() {
        // Transitive class: brute-force realizes ∅, {1}, {1,2}, {1,2,3}.
        let t = transitive_tournament(4);
        let s = tournament_s_collection(&t, PairScope::AllSubsets).unwrap();
        let expect: BTreeSet<Eps> = [
            Eps::empty(),
            Eps::from_elements(&[1]),
            Eps::from_elements(&[1, 2]),
            Eps::from_elements(&[1, 2, 3]),
        ]
        .into_iter()
        .collect();
        assert_eq!(s.sets, expect);

        // 3-cycle with a dominating node: residue classes mod 3 and their
        // unions.
        let t = Tournament::from_arcs(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        )
        .unwrap();
        let s = tournament_s_collection(&t, PairScope::AllSubsets).unwrap();
        let three = |a: usize| Eps::from_progression(a, 3).unwrap();
        let gens = [three(3), three(1), three(2)];
        for set in &s.sets {
            if !set.is_empty() {
                // Each realized set is a union of the three residue classes.
                let mut u = Eps::empty();
                for g in &gens {
                    if g.is_subset(set) {
                        u = u.union(g);
                    }
                }
                assert_eq!(&u, set, "realized set must be a union of residue classes");
            }
        }
        assert_eq!(s.count, 8);
    }

    #[test]
    fn weak_property_delegation() {
        let fam = FamilySpec::all_nonempty();
        let g = pende_i();
        let top = FiniteTopology::discrete(5);
        // Underlying graph is connected, so the weak property holds while
        // the directed one fails.
        let weak = weak_property(
            std::slice::from_ref(&g),
            &top,
            &fam,
            PropertyTag::Hypercyclic,
        )
        .unwrap();
        assert!(weak.is_yes());

        let strong_dir = dynamics::is_hypercyclic(
            &System::Iterated(g.to_relation()),
            &top,
            &fam,
        )
        .unwrap();
        assert!(strong_dir.is_no());

        // Strongly connected digraph: transitive in both senses.
        let c = cycle3();
        let top3 = FiniteTopology::discrete(3);
        let weak = weak_property(
            std::slice::from_ref(&c),
            &top3,
            &fam,
            PropertyTag::Transitive,
        )
        .unwrap();
        assert!(weak.is_yes());
    }

    #[test]
    fn exponent_checks() {
        // The strong 4-tournament: cycle x1x2x3x4 plus arcs x1x3, x2x4.
        // Its exponent is the classical outlier e = 9 with d = 3, which is
        // why the d ≤ e ≤ d+3 window only starts at five nodes.
        let t = Tournament::from_arcs(
            4,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
        )
        .unwrap();
        assert_eq!(t.0.exponent().unwrap(), 9);
        let chk = exponent_check(std::slice::from_ref(&t), None).unwrap();
        assert!(chk.tail_ok);
        assert!(chk.bounds_ok);
        assert!(chk.verdict.is_yes());

        // A strong 5-tournament sits inside both windows.
        let five = enumerate_tournaments(5, true)
            .unwrap()
            .into_iter()
            .find(|t| t.0.is_strongly_connected())
            .unwrap();
        let chk5 = exponent_check(std::slice::from_ref(&five), None).unwrap();
        assert!(chk5.bounds_ok && chk5.tail_ok);
        assert!(chk5.diameter <= chk5.exponent && chk5.exponent <= chk5.diameter + 3);

        assert!(matches!(
            exponent_check(&[transitive_tournament(4)], None),
            Err(DigraphError::NotStronglyConnected)
        ));

        // Some primitive 6-tournament attains each exponent in 3..=8, and
        // minimality leaves a pair unreached at e−1 (checked in the
        // primitivity test via all_ones on e−1).
        let mut seen_exponents = BTreeSet::new();
        for t in enumerate_tournaments(6, true).unwrap() {
            if let Ok(e) = t.0.exponent() {
                seen_exponents.insert(e);
            }
        }
        assert!(seen_exponents.contains(&3));
        assert!(seen_exponents.iter().all(|&e| (3..=8).contains(&e)));
    }

    #[test]
    fn counterexample_pair() {
        for n in [5, 6] {
            let (t1, t2, top) = build_counterexample_pair(n).unwrap();
            assert_eq!(t1.n(), n);
            assert_eq!(t2.n(), n);
            assert_eq!(top.opens().len(), 5);
        }
        assert!(matches!(
            build_counterexample_pair(4),
            Err(DigraphError::CounterexampleTooSmall)
        ));
    }

    #[test]
    fn survey_shapes() {
        let rows = survey(4, true, false).unwrap();
        assert_eq!(rows.len(), 4);
        let rows3 = survey(3, true, false).unwrap();
        assert_eq!(rows3.len(), 2);
        let strong5 = survey(5, true, true).unwrap();
        assert!(strong5.iter().all(|r| r.strongly_connected));
        assert!(survey(8, true, false).is_err());
    }

    #[test]
    fn asymmetric_digraphs_have_no_2_return() {
        // No closed walk of length 2 in an asymmetric digraph.
        for d in enumerate_digraphs(4) {
            if !d.is_asymmetric() {
                continue;
            }
            let trace = d.to_relation().power_trace();
            for x in 0..4 {
                let s = crate::relations::hit_set(&trace, x, NodeSet::singleton(x));
                assert!(!s.contains(2), "digraph {d:?} node {x}");
            }
        }
    }

    #[test]
    fn hamiltonicity_matches_strong_connectivity() {
        for n in [4, 5] {
            for t in enumerate_tournaments(n, true).unwrap() {
                assert_eq!(is_hamiltonian(&t), t.0.is_strongly_connected(), "{t:?}");
            }
        }
    }

    #[test]
    fn family_consistency_hook() {
        let t = Tournament::from_arcs(
            4,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
        )
        .unwrap();
        // Tail families make the universal reading consistent.
        let fam = FamilySpec::new(FamilyKind::Tail(3));
        let chk = exponent_check(std::slice::from_ref(&t), Some(&fam)).unwrap();
        if chk.exponent >= 3 {
            assert_eq!(chk.family_consistent, Some(true));
        }
        // All-nonempty has members without the tail, so a hypercyclic
        // verdict contradicts the universal reading; the contradiction is
        // reported, not hidden.
        let chk =
            exponent_check(std::slice::from_ref(&t), Some(&FamilySpec::all_nonempty())).unwrap();
        assert_eq!(chk.family_consistent, Some(false));
    }
}
