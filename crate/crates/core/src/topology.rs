//! Finite topological spaces on the ground set {0, …, n−1}.
//!
//! On a finite set, closure under pairwise union and pairwise
//! intersection together with ∅ and X certifies a topology, so validation
//! is a direct check. Exhaustive enumeration is provided for n ≤ 4 (the
//! candidate space is 2^(2^n) collections); larger spaces use the
//! generator-closure sampler.

use std::fmt;

use thiserror::Error;

use crate::nodes::NodeSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("a topology must contain ∅ and the full set")]
    MissingEmptyOrFull,
    #[error("not closed under union: {0} ∪ {1} is missing")]
    NotClosedUnderUnion(NodeSet, NodeSet),
    #[error("not closed under intersection: {0} ∩ {1} is missing")]
    NotClosedUnderIntersection(NodeSet, NodeSet),
    #[error("open set mentions node out of range for n = {n}")]
    NodeOutOfRange { n: usize },
    #[error("exhaustive topology enumeration is guarded at n ≤ 4; sample with generators instead")]
    EnumerationTooLarge,
    #[error("node count {n} out of supported range")]
    BadNodeCount { n: usize },
}

/// Validated topology: deduplicated opens sorted by (popcount, value).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteTopology {
    n: usize,
    opens: Vec<NodeSet>,
}

impl FiniteTopology {
    pub fn validate(n: usize, opens: &[NodeSet]) -> Result<Self, TopologyError> {
        if n == 0 || n > crate::nodes::MAX_NODES {
            return Err(TopologyError::BadNodeCount { n });
        }
        let full = NodeSet::full(n);
        let mut sets: Vec<NodeSet> = opens.to_vec();
        for s in &sets {
            if !s.is_subset(&full) {
                return Err(TopologyError::NodeOutOfRange { n });
            }
        }
        sets.sort_by_key(|s| (s.len(), s.0));
        sets.dedup();
        if !sets.contains(&NodeSet::empty()) || !sets.contains(&full) {
            return Err(TopologyError::MissingEmptyOrFull);
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let (a, b) = (sets[i], sets[j]);
                if !sets.contains(&a.union(&b)) {
                    return Err(TopologyError::NotClosedUnderUnion(a, b));
                }
                if !sets.contains(&a.intersect(&b)) {
                    return Err(TopologyError::NotClosedUnderIntersection(a, b));
                }
            }
        }
        Ok(FiniteTopology { n, opens: sets })
    }

    pub fn discrete(n: usize) -> Self {
        assert!(n >= 1 && n <= 16, "discrete topology guarded at n ≤ 16");
        let opens: Vec<NodeSet> = (0u64..1 << n).map(NodeSet).collect();
        FiniteTopology::validate(n, &opens).expect("power set is a topology")
    }

    pub fn antidiscrete(n: usize) -> Self {
        FiniteTopology::validate(n, &[NodeSet::empty(), NodeSet::full(n)])
            .expect("trivial topology")
    }

    /// Smallest topology containing the generators: closure of
    /// {∅, X, generators...} under pairwise union and intersection.
    pub fn generated_by(n: usize, generators: &[NodeSet]) -> Result<Self, TopologyError> {
        if n == 0 || n > crate::nodes::MAX_NODES {
            return Err(TopologyError::BadNodeCount { n });
        }
        let full = NodeSet::full(n);
        for g in generators {
            if !g.is_subset(&full) {
                return Err(TopologyError::NodeOutOfRange { n });
            }
        }
        let mut sets: Vec<NodeSet> = vec![NodeSet::empty(), full];
        sets.extend_from_slice(generators);
        sets.sort();
        sets.dedup();
        loop {
            let mut added = Vec::new();
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    for c in [sets[i].union(&sets[j]), sets[i].intersect(&sets[j])] {
                        if sets.binary_search(&c).is_err() && !added.contains(&c) {
                            added.push(c);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            sets.extend(added);
            sets.sort();
            sets.dedup();
        }
        FiniteTopology::validate(n, &sets)
    }

    /// Every labeled topology on n points, exactly once, ordered by the
    /// collection bitmask over subsets-as-integers.
    pub fn enumerate_all(n: usize) -> Result<Vec<FiniteTopology>, TopologyError> {
        if n == 0 {
            return Err(TopologyError::BadNodeCount { n });
        }
        if n > 4 {
            return Err(TopologyError::EnumerationTooLarge);
        }
        let subsets = 1usize << n;
        let full = subsets - 1;
        let mut out = Vec::new();
        'cand: for mask in 0u64..1 << subsets {
            if mask & 1 == 0 || mask >> full & 1 == 0 {
                continue;
            }
            let members: Vec<usize> = (0..subsets).filter(|&s| mask >> s & 1 == 1).collect();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    if mask >> (a | b) & 1 == 0 || mask >> (a & b) & 1 == 0 {
                        continue 'cand;
                    }
                }
            }
            let opens: Vec<NodeSet> = members.iter().map(|&s| NodeSet(s as u64)).collect();
            out.push(FiniteTopology::validate(n, &opens).expect("closure checked"));
        }
        Ok(out)
    }

    /// Deterministic sample for n ≥ 5: all topologies generated by at most
    /// three open generators, deduplicated, in sorted order.
    pub fn sample_generated(n: usize, max_count: usize) -> Vec<FiniteTopology> {
        let subsets = 1u64 << n;
        let mut seen = std::collections::BTreeSet::new();
        'outer: for a in 0..subsets {
            for b in a..subsets {
                for c in b..subsets {
                    let t = FiniteTopology::generated_by(n, &[NodeSet(a), NodeSet(b), NodeSet(c)])
                        .expect("generators in range");
                    seen.insert(t);
                    if seen.len() >= max_count * 8 {
                        break 'outer;
                    }
                }
            }
        }
        let all: Vec<FiniteTopology> = seen.into_iter().collect();
        if all.len() <= max_count {
            all
        } else {
            // Deterministic thinning: keep a evenly spaced subsequence.
            let step = all.len() as f64 / max_count as f64;
            (0..max_count).map(|i| all[(i as f64 * step) as usize].clone()).collect()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[NodeSet] {
        &self.opens
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = NodeSet> + '_ {
        self.opens.iter().copied().filter(|s| !s.is_empty())
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1 << self.n
    }

    pub fn is_antidiscrete(&self) -> bool {
        self.opens.len() == 2
    }

    /// Minimal elements of the nonempty opens under inclusion.
    pub fn minimal_nonempty_opens(&self) -> Vec<NodeSet> {
        let nonempty: Vec<NodeSet> = self.nonempty_opens().collect();
        nonempty
            .iter()
            .copied()
            .filter(|v| !nonempty.iter().any(|w| !w.is_empty() && w != v && w.is_subset(v)))
            .collect()
    }

    /// Text format: one `open: i j k` line per open set (1-based nodes);
    /// a bare `open:` denotes ∅.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.opens {
            out.push_str("open:");
            for i in s.iter() {
                out.push_str(&format!(" {}", i + 1));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.opens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if s.is_empty() {
                write!(f, "∅")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `open:` lines (1-based node indices).
pub fn parse_topology_lines(n: usize, lines: &[&str]) -> Result<FiniteTopology, String> {
    let mut opens = Vec::new();
    for line in lines {
        let rest = line.strip_prefix("open:").ok_or_else(|| format!("bad line `{line}`"))?;
        let mut s = NodeSet::empty();
        for tok in rest.split_whitespace() {
            let i: usize = tok.parse().map_err(|_| format!("bad node `{tok}`"))?;
            if i == 0 || i > n {
                return Err(format!("node {i} out of range 1..={n}"));
            }
            s.insert(i - 1);
        }
        opens.push(s);
    }
    FiniteTopology::validate(n, &opens).map_err(|e| e.to_string())
}
