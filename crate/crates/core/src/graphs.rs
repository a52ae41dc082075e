//! Simple graphs: bipartite structure, the distance-based closed form for
//! return-time sets on connected bipartite graphs, the S index, the
//! even/odd walk bound ϑ, and the associated inequalities.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::natset::EventuallyPeriodicSet;
use crate::nodes::NodeSet;
use crate::relations::{hit_set_uv, BooleanRelation, PowerTrace};
use crate::topology::FiniteTopology;

type Eps = EventuallyPeriodicSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graphs need at least 2 nodes")]
    TooSmall,
    #[error("node count {0} out of range")]
    BadNodeCount(usize),
    #[error("edge ({0}, {1}) out of range or a loop")]
    BadEdge(usize, usize),
    #[error("operation requires a connected graph")]
    Disconnected,
    #[error("ϑ is infinite for this graph")]
    ThetaInfinite,
    #[error("the given node list is not a closed odd contour of the graph")]
    InvalidOddCycle,
    #[error("subset-pair enumeration guarded at n ≤ {max}, got n = {n}")]
    SubsetGuard { n: usize, max: usize },
    #[error("cycle graphs need n ≥ 3")]
    CycleTooSmall,
}

/// Loop-free symmetric graph on {0, …, n−1} with n ≥ 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

pub const S_INDEX_MAX_NODES: usize = 10;

/// Which (U, V) pairs an S-collection ranges over.
#[derive(Clone, Copy, Debug)]
pub enum PairScope<'a> {
    /// All pairs of nonempty subsets of the node set.
    AllSubsets,
    /// Pairs of nonempty open sets of a topology.
    Topology(&'a FiniteTopology),
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooSmall);
        }
        if n > crate::nodes::MAX_NODES {
            return Err(GraphError::BadNodeCount(n));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(GraphError::BadEdge(a, b));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        SimpleGraph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::CycleTooSmall);
        }
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        SimpleGraph::new(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        SimpleGraph::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(v, u)).collect()
    }

    pub fn to_relation(&self) -> BooleanRelation {
        let mut arcs = Vec::with_capacity(2 * self.edges.len());
        for &(a, b) in &self.edges {
            arcs.push((a, b));
            arcs.push((b, a));
        }
        BooleanRelation::from_arcs(self.n, &arcs).expect("validated size")
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    match color[u] {
                        None => {
                            color[u] = Some(!color[v].unwrap());
                            queue.push_back(u);
                        }
                        Some(c) => {
                            if c == color[v].unwrap() {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// BFS distances; `None` entries mean unreachable. d(u, u) = 0.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        let mut out = vec![vec![None; self.n]; self.n];
        for s in 0..self.n {
            out[s][s] = Some(0);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let d = out[s][v].unwrap();
                for u in self.neighbors(v) {
                    if out[s][u].is_none() {
                        out[s][u] = Some(d + 1);
                        queue.push_back(u);
                    }
                }
            }
        }
        out
    }

    /// `None` means infinite (disconnected).
    pub fn diameter(&self) -> Option<usize> {
        let dm = self.distance_matrix();
        let mut best = 0;
        for row in &dm {
            for d in row {
                match d {
                    Some(d) => best = best.max(*d),
                    None => return None,
                }
            }
        }
        Some(best)
    }

    /// Shortest even and odd walk lengths (≥ 1) between every ordered
    /// pair, via BFS on the parity-doubled state space.
    fn parity_distances(&self) -> Vec<Vec<[Option<usize>; 2]>> {
        let mut out = vec![vec![[None, None]; self.n]; self.n];
        for s in 0..self.n {
            let mut dist: Vec<[Option<usize>; 2]> = vec![[None, None]; self.n];
            let mut queue = std::collections::VecDeque::new();
            for u in self.neighbors(s) {
                if dist[u][1].is_none() {
                    dist[u][1] = Some(1);
                    queue.push_back((u, 1usize));
                }
            }
            while let Some((v, parity)) = queue.pop_front() {
                let d = dist[v][parity].unwrap();
                for u in self.neighbors(v) {
                    let np = parity ^ 1;
                    if dist[u][np].is_none() {
                        dist[u][np] = Some(d + 1);
                        queue.push_back((u, np));
                    }
                }
            }
            out[s] = dist;
        }
        out
    }

    /// Smallest L such that every ordered node pair (including u = v) is
    /// joined by an even walk of length ≤ L and an odd walk of length ≤ L;
    /// `None` (∞) iff the graph is bipartite or disconnected.
    pub fn theta(&self) -> Option<usize> {
        let pd = self.parity_distances();
        let mut best = 0;
        for u in 0..self.n {
            for v in 0..self.n {
                for parity in [0, 1] {
                    match pd[u][v][parity] {
                        Some(d) => best = best.max(d),
                        None => return None,
                    }
                }
            }
        }
        Some(best)
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// L(U, V) = { d(u,v) + 2k : u ∈ U, v ∈ V, k ≥ 0 } ∩ ℕ for a connected
/// graph.
pub fn l_set(g: &SimpleGraph, u: NodeSet, v: NodeSet) -> Result<Eps, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let dm = g.distance_matrix();
    let mut acc = Eps::empty();
    for a in u.iter() {
        for b in v.iter() {
            let d = dm[a][b].expect("connected");
            acc = acc.union(&Eps::from_progression(d, 2).expect("step 2"));
        }
    }
    Ok(acc)
}

/// Outcome of the closed-form check on one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub pairs_checked: usize,
    /// First (U, V) with S(U, V) ≠ L(U, V) on a bipartite graph.
    pub mismatch: Option<(NodeSet, NodeSet, Eps, Eps)>,
    /// First (U, V) with L(U, V) ⊄ S(U, V).
    pub inclusion_failure: Option<(NodeSet, NodeSet)>,
}

impl ClosedFormReport {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none() && self.inclusion_failure.is_none()
    }
}

/// Checks S(U, V) = L(U, V) over the pair scope when the connected graph
/// is bipartite, and the one-sided inclusion L(U, V) ⊆ S(U, V) for every
/// connected graph.
pub fn verify_closed_form(
    g: &SimpleGraph,
    scope: PairScope<'_>,
) -> Result<ClosedFormReport, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let bipartite = g.is_bipartite();
    let trace = g.to_relation().power_trace();
    let mut report =
        ClosedFormReport { pairs_checked: 0, mismatch: None, inclusion_failure: None };
    for (u, v) in pair_list(g.n, scope)? {
        let s = hit_set_uv(&trace, u, v);
        let l = l_set(g, u, v)?;
        report.pairs_checked += 1;
        if !l.is_subset(&s) {
            report.inclusion_failure = Some((u, v));
            return Ok(report);
        }
        if bipartite && s != l {
            report.mismatch = Some((u, v, s, l));
            return Ok(report);
        }
    }
    Ok(report)
}

fn pair_list(n: usize, scope: PairScope<'_>) -> Result<Vec<(NodeSet, NodeSet)>, GraphError> {
    let sets: Vec<NodeSet> = match scope {
        PairScope::AllSubsets => {
            if n > S_INDEX_MAX_NODES {
                return Err(GraphError::SubsetGuard { n, max: S_INDEX_MAX_NODES });
            }
            (1u64..1 << n).map(NodeSet).collect()
        }
        PairScope::Topology(t) => t.nonempty_opens().collect(),
    };
    let mut pairs = Vec::with_capacity(sets.len() * sets.len());
    for &u in &sets {
        for &v in &sets {
            pairs.push((u, v));
        }
    }
    Ok(pairs)
}

/// The deduplicated collection { S(U, V) } with its cardinality.
#[derive(Clone, Debug)]
pub struct SIndex {
    pub count: usize,
    pub sets: BTreeSet<Eps>,
}

/// S index over the requested pair scope (all subsets is the discrete
/// case).
pub fn s_index(g: &SimpleGraph, scope: PairScope<'_>) -> Result<SIndex, GraphError> {
    let trace = g.to_relation().power_trace();
    s_index_from_trace(&trace, g.n, scope)
}

pub(crate) fn s_index_from_trace(
    trace: &PowerTrace,
    n: usize,
    scope: PairScope<'_>,
) -> Result<SIndex, GraphError> {
    let mut sets = BTreeSet::new();
    for (u, v) in pair_list(n, scope)? {
        sets.insert(hit_set_uv(trace, u, v));
    }
    Ok(SIndex { count: sets.len(), sets })
}

/// Exact value of d + d²/4 − χ_odd(d)/4, always an integer.
pub fn bipartite_bound(diameter: usize) -> usize {
    let d = diameter;
    let num = 4 * d + d * d - (d % 2);
    assert!(num % 4 == 0, "bound expression must be an integer");
    num / 4
}

/// S value of the path graph on n nodes by the diameter formula.
pub fn path_s_index_formula(n: usize) -> usize {
    assert!(n >= 2);
    bipartite_bound(n - 1)
}

/// ⌊(ϑ² + 2ϑ + 1)/4⌋.
pub fn theta_bound(theta: usize) -> usize {
    (theta * theta + 2 * theta + 1) / 4
}

/// Upper bound on ϑ from an odd closed contour: max over ordered node
/// pairs of 2·d(u, C) + d(u, v) + |C|. The cycle is its node sequence
/// (odd length, consecutive nodes adjacent, last adjacent to first).
/// Asserts the bound dominates ϑ.
pub fn theta_upper_from_odd_cycle(g: &SimpleGraph, cycle: &[usize]) -> Result<usize, GraphError> {
    if cycle.len() < 3 || cycle.len() % 2 == 0 {
        return Err(GraphError::InvalidOddCycle);
    }
    let mut distinct: Vec<usize> = cycle.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != cycle.len() || cycle.iter().any(|&v| v >= g.n) {
        return Err(GraphError::InvalidOddCycle);
    }
    for w in 0..cycle.len() {
        let a = cycle[w];
        let b = cycle[(w + 1) % cycle.len()];
        if !g.has_edge(a, b) {
            return Err(GraphError::InvalidOddCycle);
        }
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let dm = g.distance_matrix();
    let d_to_cycle = |u: usize| -> usize {
        cycle.iter().map(|&w| dm[u][w].expect("connected")).min().expect("cycle nonempty")
    };
    let mut best = 0;
    for u in 0..g.n {
        for v in 0..g.n {
            best = best.max(2 * d_to_cycle(u) + dm[u][v].expect("connected") + cycle.len());
        }
    }
    let theta = g.theta().ok_or(GraphError::ThetaInfinite)?;
    assert!(best >= theta, "odd-cycle bound must dominate ϑ");
    Ok(best)
}

/// All labeled graphs on n nodes (edge subsets in lexicographic edge-bit
/// order).
pub fn enumerate_graphs(n: usize) -> impl Iterator<Item = SimpleGraph> {
    let pairs: Vec<(usize, usize)> = {
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                v.push((i, j));
            }
        }
        v
    };
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            (0..m).filter(|&b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        SimpleGraph::new(n, &edges).expect("valid edges")
    })
}

/// Lexicographically minimal edge set over all node relabelings.
pub fn canonical_form(g: &SimpleGraph) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..g.n).collect();
    let mut best: Option<BTreeSet<(usize, usize)>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mapped: BTreeSet<(usize, usize)> = g
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (p[a], p[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        if best.as_ref().map_or(true, |b| mapped < *b) {
            best = Some(mapped);
        }
    });
    best.unwrap_or_default().into_iter().collect()
}

pub(crate) fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// Isomorphism-class representatives of graphs on n nodes, grown by
/// vertex augmentation from the classes one size down. (Removing the last
/// vertex of any graph on n nodes leaves a graph on n−1, so augmentation
/// is exhaustive.)
pub fn enumerate_graph_classes(n: usize) -> Vec<SimpleGraph> {
    assert!(n >= 2);
    if n == 2 {
        return vec![
            SimpleGraph::new(2, &[]).unwrap(),
            SimpleGraph::new(2, &[(0, 1)]).unwrap(),
        ];
    }
    let smaller = enumerate_graph_classes(n - 1);
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut out = Vec::new();
    for base in smaller {
        for mask in 0u64..1 << (n - 1) {
            let mut edges: Vec<(usize, usize)> = base.edges.iter().copied().collect();
            for b in 0..n - 1 {
                if mask >> b & 1 == 1 {
                    edges.push((b, n - 1));
                }
            }
            let g = SimpleGraph::new(n, &edges).expect("valid");
            let canon = canonical_form(&g);
            if seen.insert(canon) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_basics() {
        let p4 = SimpleGraph::path(4).unwrap();
        assert_eq!(p4.diameter(), Some(3));
        assert!(p4.is_bipartite());
        let c4 = SimpleGraph::cycle(4).unwrap();
        assert!(c4.is_bipartite());
        let disconnected = SimpleGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(disconnected.diameter(), None);
        assert!(!disconnected.is_connected());
        assert!(SimpleGraph::new(3, &[(0, 0)]).is_err());
        assert!(SimpleGraph::new(1, &[]).is_err());
    }

    #[test]
    fn standard_graphs() {
        assert_eq!(SimpleGraph::complete(2).unwrap().edge_count(), 1);
        assert_eq!(SimpleGraph::cycle(4).unwrap().edge_count(), 4);
        assert_eq!(SimpleGraph::path(4).unwrap().edge_count(), 3);
        assert!(SimpleGraph::cycle(2).is_err());
    }

    #[test]
    fn l_set_examples() {
        let c4 = SimpleGraph::cycle(4).unwrap();
        // Distance 2, step 2: the even numbers. Cross-check by walks.
        let l = l_set(&c4, NodeSet::singleton(0), NodeSet::singleton(2)).unwrap();
        assert_eq!(l, Eps::evens());
        let trace = c4.to_relation().power_trace();
        assert_eq!(hit_set_uv(&trace, NodeSet::singleton(0), NodeSet::singleton(2)), l);

        // U = V = {x1} in any connected graph with an edge: the d = 0
        // progression meets ℕ at {2, 4, ...}.
        let any = SimpleGraph::path(3).unwrap();
        assert_eq!(
            l_set(&any, NodeSet::singleton(0), NodeSet::singleton(0)).unwrap(),
            Eps::evens()
        );
        assert_eq!(
            l_set(&any, NodeSet::singleton(0), NodeSet::singleton(2)).unwrap(),
            Eps::evens()
        );
        let split = SimpleGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(l_set(&split, NodeSet::singleton(0), NodeSet::singleton(1)).is_err());
    }

    #[test]
    fn closed_form_reports() {
        let c4 = SimpleGraph::cycle(4).unwrap();
        let r = verify_closed_form(&c4, PairScope::AllSubsets).unwrap();
        assert!(r.ok());
        assert_eq!(r.pairs_checked, 225);

        // Non-bipartite: only the inclusion is claimed.
        let k3 = SimpleGraph::complete(3).unwrap();
        assert!(verify_closed_form(&k3, PairScope::AllSubsets).unwrap().ok());

        let p2 = SimpleGraph::path(2).unwrap();
        assert!(verify_closed_form(&p2, PairScope::AllSubsets).unwrap().ok());
    }

    #[test]
    fn s_index_examples() {
        // Brute force over all 225 subset pairs gives 5 for P_4, matching
        // the diameter formula.
        let p4 = SimpleGraph::path(4).unwrap();
        let s = s_index(&p4, PairScope::AllSubsets).unwrap();
        assert_eq!(s.count, 5);
        assert_eq!(path_s_index_formula(4), 5);

        let k3 = SimpleGraph::complete(3).unwrap();
        let s = s_index(&k3, PairScope::AllSubsets).unwrap();
        assert_eq!(s.count, 2);
        assert!(s.sets.contains(&Eps::naturals()));
        assert!(s.sets.contains(&Eps::cofinite_excluding(&[1])));

        // S_{G,τ} ≤ S_G on a sample topology.
        let top = FiniteTopology::generated_by(4, &[NodeSet::singleton(1)]).unwrap();
        let st = s_index(&p4, PairScope::Topology(&top)).unwrap();
        assert!(st.count <= 5);
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(bipartite_bound(3), 5);
        assert_eq!(bipartite_bound(1), 1);
        assert_eq!(bipartite_bound(4), 8);
        assert_eq!(theta_bound(3), 4);
    }

    /// Independent ϑ oracle: enumerate all walks up to `limit` by brute
    /// DFS and take the max over pairs of the shortest even/odd lengths.
    fn theta_by_walk_enumeration(g: &SimpleGraph, limit: usize) -> Option<usize> {
        let n = g.n();
        let mut shortest = vec![vec![[usize::MAX; 2]; n]; n];
        for s in 0..n {
            let mut stack = vec![(s, 0usize)];
            while let Some((v, len)) = stack.pop() {
                if len > 0 && shortest[s][v][len % 2] > len {
                    shortest[s][v][len % 2] = len;
                }
                if len < limit {
                    for u in g.neighbors(v) {
                        stack.push((u, len + 1));
                    }
                }
            }
        }
        let mut best = 0;
        for u in 0..n {
            for v in 0..n {
                for parity in [0, 1] {
                    let d = shortest[u][v][parity];
                    if d == usize::MAX {
                        return None;
                    }
                    best = best.max(d);
                }
            }
        }
        Some(best)
    }

    #[test]
    fn theta_values() {
        // Bipartite graphs admit no odd closed walk.
        assert_eq!(SimpleGraph::cycle(4).unwrap().theta(), None);
        assert_eq!(SimpleGraph::path(5).unwrap().theta(), None);

        // Oracle: exhaustive walk enumeration to length 6 for K_3.
        let k3 = SimpleGraph::complete(3).unwrap();
        assert_eq!(k3.theta(), theta_by_walk_enumeration(&k3, 6));
        assert_eq!(k3.theta(), Some(3));

        // Oracle to length 12 for C_5: the diagonal needs the odd length
        // 5, adjacent pairs need the even length 4.
        let c5 = SimpleGraph::cycle(5).unwrap();
        assert_eq!(c5.theta(), theta_by_walk_enumeration(&c5, 12));
        assert_eq!(c5.theta(), Some(5));
    }

    #[test]
    fn odd_cycle_bounds() {
        let k3 = SimpleGraph::complete(3).unwrap();
        let b = theta_upper_from_odd_cycle(&k3, &[0, 1, 2]).unwrap();
        assert_eq!(b, 4);
        assert!(b >= k3.theta().unwrap());

        let c5 = SimpleGraph::cycle(5).unwrap();
        let b = theta_upper_from_odd_cycle(&c5, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(b, 7);
        assert!(b >= c5.theta().unwrap());

        assert_eq!(
            theta_upper_from_odd_cycle(&c5, &[0, 1, 2, 3]),
            Err(GraphError::InvalidOddCycle)
        );
    }

    #[test]
    fn enumeration_and_canonical_forms() {
        assert_eq!(enumerate_graphs(3).count(), 8);
        assert_eq!(enumerate_graph_classes(3).len(), 4);
        assert_eq!(enumerate_graph_classes(4).len(), 11);
        // Canonical form identifies relabelings.
        let a = SimpleGraph::new(4, &[(0, 1), (1, 2)]).unwrap();
        let b = SimpleGraph::new(4, &[(3, 2), (2, 0)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn s_index_is_relabeling_invariant() {
        for g in enumerate_graphs(4).filter(|g| g.is_connected()) {
            let base = s_index(&g, PairScope::AllSubsets).unwrap().count;
            let relabeled: Vec<(usize, usize)> =
                g.edges().map(|(a, b)| ((a + 1) % 4, (b + 1) % 4)).collect();
            let h = SimpleGraph::new(4, &relabeled).unwrap();
            assert_eq!(s_index(&h, PairScope::AllSubsets).unwrap().count, base);
        }
    }
}
