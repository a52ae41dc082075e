//! Node indices and subsets of the ground set {0, …, n−1}.
//!
//! Nodes are 0-based internally; all text formats and reports use the
//! 1-based names x1, …, xn.

use std::fmt;

/// Subset of {0, …, n−1} as a bitmask; n is capped at 64 throughout.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(pub u64);

pub const MAX_NODES: usize = 64;

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_NODES);
        if n == 64 {
            NodeSet(!0)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        NodeSet(1u64 << i)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn first(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = NodeSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// 1-based display name of a node index.
pub fn node_name(i: usize) -> String {
    format!("x{}", i + 1)
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", node_name(i))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
