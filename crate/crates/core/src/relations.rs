//! Binary relations on a finite node set as boolean matrices, the
//! walk-counting and power-periodicity engine behind every hit-set
//! computation.
//!
//! Walk counts are abstracted to booleans: the adjacency powers are only
//! ever compared against ≥ 1, so reachability bits are exact and cannot
//! overflow.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::natset::EventuallyPeriodicSet;
use crate::nodes::{NodeSet, MAX_NODES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("node count {0} out of supported range 1..={MAX_NODES}")]
    BadNodeCount(usize),
    #[error("arc ({0}, {1}) out of range")]
    ArcOutOfRange(usize, usize),
}

/// n×n bit matrix; `bits[i]` is the row of node i, bit j set iff
/// (x_i, x_j) ∈ ρ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanRelation {
    n: usize,
    rows: Vec<u64>,
}

impl BooleanRelation {
    pub fn empty(n: usize) -> Result<Self, RelationError> {
        if n == 0 || n > MAX_NODES {
            return Err(RelationError::BadNodeCount(n));
        }
        Ok(BooleanRelation { n, rows: vec![0; n] })
    }

    pub fn identity(n: usize) -> Result<Self, RelationError> {
        let mut r = Self::empty(n)?;
        for i in 0..n {
            r.rows[i] = 1 << i;
        }
        Ok(r)
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self, RelationError> {
        let mut r = Self::empty(n)?;
        for &(i, j) in arcs {
            if i >= n || j >= n {
                return Err(RelationError::ArcOutOfRange(i, j));
            }
            r.rows[i] |= 1 << j;
        }
        Ok(r)
    }

    /// Bit mask by row index (unchecked convenience for hot loops).
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn set_arc(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1 << j;
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_arc(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.has_arc(i, j) == self.has_arc(j, i)))
    }

    pub fn inverse(&self) -> BooleanRelation {
        let mut r = BooleanRelation { n: self.n, rows: vec![0; self.n] };
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_arc(i, j) {
                    r.rows[j] |= 1 << i;
                }
            }
        }
        r
    }

    /// Rows with at least one outgoing arc: D(ρ).
    pub fn domain(&self) -> NodeSet {
        NodeSet((0..self.n).filter(|&i| self.rows[i] != 0).fold(0, |m, i| m | 1 << i))
    }

    pub fn range(&self) -> NodeSet {
        NodeSet(self.rows.iter().fold(0, |m, r| m | r))
    }

    /// ρ(S) = {y : y ∈ ρ(x) for some x ∈ S}.
    pub fn image(&self, s: NodeSet) -> NodeSet {
        NodeSet(s.iter().fold(0, |m, i| m | self.rows[i]))
    }

    pub fn union(&self, other: &BooleanRelation) -> Result<BooleanRelation, RelationError> {
        if self.n != other.n {
            return Err(RelationError::DimensionMismatch(self.n, other.n));
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(BooleanRelation { n: self.n, rows })
    }

    pub fn all_ones(&self) -> bool {
        let full = NodeSet::full(self.n).0;
        self.rows.iter().all(|&r| r == full)
    }

    fn multiply(&self, rhs: &BooleanRelation) -> BooleanRelation {
        // Boolean matrix product: out[i] = OR of rhs rows selected by self[i].
        let mut rows = vec![0u64; self.n];
        for i in 0..self.n {
            let mut bits = self.rows[i];
            let mut acc = 0u64;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                acc |= rhs.rows[j];
            }
            rows[i] = acc;
        }
        BooleanRelation { n: self.n, rows }
    }

    /// ρ^k with ρ^0 the identity relation.
    pub fn power(&self, k: usize) -> BooleanRelation {
        let mut acc = BooleanRelation::identity(self.n).expect("n validated");
        for _ in 0..k {
            acc = acc.multiply(self);
        }
        acc
    }

    /// Exact (preperiod, period) of the power sequence ρ^1, ρ^2, …
    pub fn power_trace(&self) -> PowerTrace {
        let mut powers: Vec<BooleanRelation> = Vec::new();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut current = self.clone();
        loop {
            if let Some(&first) = seen.get(&current.rows) {
                let preperiod = first + 1;
                let period = powers.len() - first;
                return PowerTrace { n: self.n, powers, preperiod, period };
            }
            seen.insert(current.rows.clone(), powers.len());
            powers.push(current.clone());
            current = current.multiply(self);
        }
    }

    /// D_∞(ρ) = ⋂_{k ≥ 1} D(ρ^k); the intersection stabilizes once the
    /// powers cycle.
    pub fn d_infinity(&self) -> NodeSet {
        self.power_trace().d_infinity()
    }

    /// Text format: `nodes: n` then one `arc: i j` line per pair (1-based).
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes: {}\n", self.n);
        for (i, j) in self.arcs() {
            out.push_str(&format!("arc: {} {}\n", i + 1, j + 1));
        }
        out
    }
}

impl fmt::Debug for BooleanRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanRelation(n={}, arcs={:?})", self.n, self.arcs())
    }
}

/// σ∘ρ applies ρ first: (x, t) ∈ σ∘ρ iff ∃y with (x, y) ∈ ρ and (y, t) ∈ σ.
pub fn compose(
    sigma: &BooleanRelation,
    rho: &BooleanRelation,
) -> Result<BooleanRelation, RelationError> {
    if sigma.n != rho.n {
        return Err(RelationError::DimensionMismatch(sigma.n, rho.n));
    }
    Ok(rho.multiply(sigma))
}

/// The distinct powers ρ^1, …, ρ^(s+p−1) with ρ^(k+p) = ρ^k for k ≥ s,
/// s and p minimal.
#[derive(Clone, Debug)]
pub struct PowerTrace {
    n: usize,
    powers: Vec<BooleanRelation>,
    preperiod: usize,
    period: usize,
}

impl PowerTrace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn preperiod(&self) -> usize {
        self.preperiod
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn distinct_powers(&self) -> &[BooleanRelation] {
        &self.powers
    }

    /// ρ^k for k ≥ 1.
    pub fn power(&self, k: usize) -> &BooleanRelation {
        assert!(k >= 1);
        if k < self.preperiod + self.period {
            &self.powers[k - 1]
        } else {
            &self.powers[self.preperiod - 1 + (k - self.preperiod) % self.period]
        }
    }

    pub fn d_infinity(&self) -> NodeSet {
        let mut acc = NodeSet::full(self.n);
        for p in &self.powers {
            acc = acc.intersect(&p.domain());
        }
        acc
    }

    /// Smallest k with ρ^k all-positive, when one exists.
    pub fn exponent(&self) -> Option<usize> {
        self.powers.iter().position(|p| p.all_ones()).map(|i| i + 1)
    }
}

/// S(x, V) = {n ∈ ℕ : ρ^n(x) ∩ V ≠ ∅} from the power trace.
pub fn hit_set(trace: &PowerTrace, x: usize, v: NodeSet) -> EventuallyPeriodicSet {
    let s = trace.preperiod;
    let p = trace.period;
    EventuallyPeriodicSet::from_periodic_fn(s.saturating_sub(1), p, |n| {
        trace.power(n).row(x) & v.0 != 0
    })
}

/// S(U, V) = {n ∈ ℕ : ρ^n(U) ∩ V ≠ ∅}.
pub fn hit_set_uv(trace: &PowerTrace, u: NodeSet, v: NodeSet) -> EventuallyPeriodicSet {
    let s = trace.preperiod;
    let p = trace.period;
    EventuallyPeriodicSet::from_periodic_fn(s.saturating_sub(1), p, |n| {
        u.iter().any(|x| trace.power(n).row(x) & v.0 != 0)
    })
}

/// Eventually periodic sequence of relations (ρ_n): ρ_n is `prefix[n−1]`
/// for n ≤ |prefix| and cycles through `cycle` afterwards.
#[derive(Clone, Debug)]
pub struct RelationSequence {
    prefix: Vec<BooleanRelation>,
    cycle: Vec<BooleanRelation>,
}

impl RelationSequence {
    pub fn new(
        prefix: Vec<BooleanRelation>,
        cycle: Vec<BooleanRelation>,
    ) -> Result<Self, RelationError> {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        let n = cycle[0].n;
        for r in prefix.iter().chain(&cycle) {
            if r.n != n {
                return Err(RelationError::DimensionMismatch(n, r.n));
            }
        }
        Ok(RelationSequence { prefix, cycle })
    }

    pub fn constant(rel: BooleanRelation) -> Self {
        RelationSequence { prefix: Vec::new(), cycle: vec![rel] }
    }

    pub fn n(&self) -> usize {
        self.cycle[0].n
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    pub fn relation_at(&self, n: usize) -> &BooleanRelation {
        assert!(n >= 1);
        if n <= self.prefix.len() {
            &self.prefix[n - 1]
        } else {
            &self.cycle[(n - self.prefix.len() - 1) % self.cycle.len()]
        }
    }

    /// ⋂_{n ∈ ℕ} D(ρ_n).
    pub fn common_domain(&self) -> NodeSet {
        let mut acc = NodeSet::full(self.n());
        for r in self.prefix.iter().chain(&self.cycle) {
            acc = acc.intersect(&r.domain());
        }
        acc
    }
}

/// S(x, V) = {n : ρ_n(x) ∩ V ≠ ∅} for a relation sequence (each ρ_n is
/// applied once, not iterated).
pub fn seq_hit_set(seq: &RelationSequence, x: usize, v: NodeSet) -> EventuallyPeriodicSet {
    EventuallyPeriodicSet::from_periodic_fn(seq.prefix_len(), seq.cycle_len(), |n| {
        seq.relation_at(n).row(x) & v.0 != 0
    })
}

/// S(U, V) for a relation sequence.
pub fn seq_hit_set_uv(seq: &RelationSequence, u: NodeSet, v: NodeSet) -> EventuallyPeriodicSet {
    EventuallyPeriodicSet::from_periodic_fn(seq.prefix_len(), seq.cycle_len(), |n| {
        seq.relation_at(n).image(u).intersect(&v).0 != 0
    })
}
