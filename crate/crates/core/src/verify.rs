//! Exhaustive desk-scale verification suites.
//!
//! Each suite sweeps an instance space, checks one structural statement
//! on every instance, and reports deterministic pass/fail lines (failures
//! verbatim, passes aggregated per block). Sweeps parallelize over
//! instances; results are keyed and sorted so output is byte-identical at
//! any thread count.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::digraphs::{self, Tournament};
use crate::dynamics::{self, System};
use crate::family::FamilySpec;
use crate::graphs::{self, PairScope, SimpleGraph};
use crate::natset::EventuallyPeriodicSet;
use crate::nodes::NodeSet;
use crate::relations::{hit_set, hit_set_uv, BooleanRelation};
use crate::topology::FiniteTopology;

type Eps = EventuallyPeriodicSet;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Upper size bound where a suite sweeps over n.
    pub max_n: Option<usize>,
    /// Seed for randomized sampling (the backbone suite).
    pub seed: u64,
    /// Cap on sampled topologies per n where full enumeration is
    /// infeasible (n ≥ 5).
    pub sample_cap: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_n: None, seed: 0, sample_cap: None }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub lines: Vec<String>,
    pub passed: u64,
    pub failed: u64,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), lines: Vec::new(), passed: 0, failed: 0 }
    }

    fn pass_block(&mut self, instances: u64, msg: &str) {
        self.passed += instances;
        self.lines.push(format!("PASS {msg}"));
    }

    fn fail(&mut self, msg: &str) {
        self.failed += 1;
        self.lines.push(format!("FAIL {msg}"));
    }

    fn note(&mut self, msg: &str) {
        self.lines.push(format!("NOTE {msg}"));
    }

    fn absorb_failures(&mut self, mut failures: Vec<String>) {
        failures.sort();
        for f in failures {
            self.fail(&f);
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(
            out,
            "suite {}: {} checks passed, {} failed",
            self.name, self.passed, self.failed
        );
        out
    }
}

pub const SUITES: &[&str] = &[
    "examples",
    "tournaments4",
    "moguce",
    "reza",
    "poka",
    "vaterpolo",
    "pende-primp",
    "pende-primp-disjoint",
    "pende-bn",
    "radio",
    "idiot",
    "backbone",
    "determinism",
    "all",
];

#[derive(Debug, thiserror::Error)]
#[error("unknown suite `{0}`; available: {}", SUITES.join(", "))]
pub struct UnknownSuite(pub String);

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, UnknownSuite> {
    match name {
        "examples" => Ok(examples_suite()),
        "tournaments4" => Ok(tournaments4_suite()),
        "moguce" => Ok(moguce_suite(opts)),
        "reza" => Ok(reza_suite(opts)),
        "poka" => Ok(poka_suite(opts)),
        "vaterpolo" => Ok(vaterpolo_suite(opts)),
        "pende-primp" => Ok(pende_primp_suite(opts)),
        "pende-primp-disjoint" => Ok(pende_primp_disjoint_suite(opts)),
        "pende-bn" => Ok(pende_bn_suite(opts)),
        "radio" => Ok(radio_suite(opts)),
        "idiot" => Ok(idiot_suite(opts)),
        "backbone" => Ok(backbone_suite(opts)),
        "determinism" => Ok(determinism_suite(opts)),
        "all" => {
            let mut total = SuiteReport::new("all");
            for s in SUITES.iter().filter(|&&s| s != "all" && s != "determinism") {
                let r = run_suite(s, opts)?;
                total.lines.extend(r.lines);
                total.passed += r.passed;
                total.failed += r.failed;
            }
            Ok(total)
        }
        other => Err(UnknownSuite(other.to_string())),
    }
}

// ---------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------

/// Exhaustive walk exploration independent of the matrix product: a DFS
/// over actual walks with (node, remaining-length) dedup per start node.
pub fn walk_reachability(rel: &BooleanRelation, from: usize, max_len: usize) -> Vec<Vec<bool>> {
    fn dfs(
        rel: &BooleanRelation,
        at: usize,
        used: usize,
        max_len: usize,
        reach: &mut [Vec<bool>],
        visited: &mut [Vec<bool>],
    ) {
        if visited[used][at] {
            return;
        }
        visited[used][at] = true;
        if used > 0 {
            reach[used][at] = true;
        }
        if used == max_len {
            return;
        }
        for j in 0..rel.n() {
            if rel.has_arc(at, j) {
                dfs(rel, j, used + 1, max_len, reach, visited);
            }
        }
    }
    let mut reach = vec![vec![false; rel.n()]; max_len + 1];
    let mut visited = vec![vec![false; rel.n()]; max_len + 1];
    dfs(rel, from, 0, max_len, &mut reach, &mut visited);
    reach
}

/// Shared-frame u32 windows of all singleton-pair return sets of a
/// relation, for exact set comparison and deduplication: bit k−1 is
/// membership of k; positions thr+1..=thr+per repeat forever.
struct WindowTable {
    n: usize,
    thr: usize,
    per: usize,
    len: usize,
    sing: Vec<u32>,
}

impl WindowTable {
    fn from_relation(rel: &BooleanRelation, min_thr: usize) -> WindowTable {
        let trace = rel.power_trace();
        let thr = (trace.preperiod() - 1).max(min_thr);
        let per = trace.period();
        let len = thr + per;
        assert!(len <= 32, "window frame exceeds 32 bits");
        let n = rel.n();
        let mut sing = vec![0u32; n * n];
        for k in 1..=len {
            let p = trace.power(k);
            for u in 0..n {
                for v in 0..n {
                    if p.has_arc(u, v) {
                        sing[u * n + v] |= 1 << (k - 1);
                    }
                }
            }
        }
        WindowTable { n, thr, per, len, sing }
    }

    /// All S(U, V) windows indexed by U * 2^n + V over nonempty masks.
    fn pair_windows(&self) -> Vec<u32> {
        let n = self.n;
        let m = 1usize << n;
        // svw[u][V] = OR of singleton windows to each v in V.
        let mut svw = vec![0u32; n * m];
        for u in 0..n {
            for v_mask in 1..m {
                let low = v_mask & v_mask.wrapping_neg();
                let v = low.trailing_zeros() as usize;
                svw[u * m + v_mask] = svw[u * m + (v_mask ^ low)] | self.sing[u * n + v];
            }
        }
        let mut out = vec![0u32; m * m];
        for u_mask in 1..m {
            let low = u_mask & u_mask.wrapping_neg();
            let u = low.trailing_zeros() as usize;
            for v_mask in 1..m {
                out[u_mask * m + v_mask] =
                    out[(u_mask ^ low) * m + v_mask] | svw[u * m + v_mask];
            }
        }
        out
    }

    fn cycle_mask(&self) -> u32 {
        let mut mask = 0u32;
        for k in self.thr + 1..=self.len {
            mask |= 1 << (k - 1);
        }
        mask
    }

    /// Window of the tail {k : k ≥ e} in this frame (e ≤ len required).
    fn tail_window(&self, e: usize) -> u32 {
        let mut mask = 0u32;
        for k in e..=self.len {
            mask |= 1 << (k - 1);
        }
        mask
    }
}

fn discrete_topologies_with_samples(
    n: usize,
    cap: usize,
) -> Vec<FiniteTopology> {
    if n <= 4 {
        FiniteTopology::enumerate_all(n).expect("n ≤ 4")
    } else {
        FiniteTopology::sample_generated(n, cap)
    }
}

// ---------------------------------------------------------------------
// Worked examples (acceptance criterion 1).
// ---------------------------------------------------------------------

fn examples_suite() -> SuiteReport {
    let mut rep = SuiteReport::new("examples");
    let all = FamilySpec::all_nonempty();

    // K_2: the two realized return sets are the even and odd numbers.
    {
        let k2 = SimpleGraph::complete(2).unwrap().to_relation();
        let trace = k2.power_trace();
        let s12 = hit_set(&trace, 0, NodeSet::singleton(1));
        let s11 = hit_set(&trace, 0, NodeSet::singleton(0));
        if s12 == Eps::odds() && s11 == Eps::evens() {
            rep.pass_block(2, "K_2 return sets are (1+2·N0) and (2+2·N0)");
        } else {
            rep.fail(&format!("K_2 return sets wrong: S(x1,{{x2}})={s12} S(x1,{{x1}})={s11}"));
        }
    }

    // K_n, n = 3, 4, 5: the realized collection is exactly {ℕ∖{1}, ℕ},
    // so hypercyclicity holds iff the family contains ℕ∖{1}.
    for n in 3..=5 {
        let kn = SimpleGraph::complete(n).unwrap().to_relation();
        let idx = graphs::s_index(&SimpleGraph::complete(n).unwrap(), PairScope::AllSubsets)
            .unwrap();
        let expected: BTreeSet<Eps> =
            [Eps::naturals(), Eps::cofinite_excluding(&[1])].into_iter().collect();
        let top = FiniteTopology::discrete(n);
        let sys = System::Iterated(kn);
        let with = FamilySpec::upward_from(vec![Eps::cofinite_excluding(&[1])]);
        let without = FamilySpec::finite_unions_of(vec![Eps::evens(), Eps::odds()], true);
        let hc_with = dynamics::is_hypercyclic(&sys, &top, &with).unwrap();
        let tt_with = dynamics::is_top_transitive(&sys, &top, &with).unwrap();
        let hc_without = dynamics::is_hypercyclic(&sys, &top, &without).unwrap();
        if idx.sets == expected && hc_with.is_yes() && tt_with.is_yes() && hc_without.is_no() {
            rep.pass_block(4, &format!("K_{n} realized condition is N\\{{1}}"));
        } else {
            rep.fail(&format!("K_{n}: realized collection or verdicts wrong: {:?}", idx.sets));
        }
    }

    // C_4 with the odd-only family fails all eight properties.
    {
        let c4 = SimpleGraph::cycle(4).unwrap().to_relation();
        let top = FiniteTopology::discrete(4);
        let odd = crate::family::parse_family("odd-only").unwrap();
        let sys = vec![System::Iterated(c4.clone()), System::Iterated(c4)];
        let mut all_no = true;
        for tag in dynamics::PropertyTag::ALL_SINGLE {
            let v = dynamics::decide(tag, &sys[..1], &top, &odd).unwrap();
            if !v.is_no() {
                all_no = false;
                rep.fail(&format!("C_4 odd-only {tag} expected No, got {v}"));
            }
        }
        for tag in dynamics::PropertyTag::ALL_DISJOINT {
            let v = dynamics::decide(tag, &sys, &top, &odd).unwrap();
            if !v.is_no() {
                all_no = false;
                rep.fail(&format!("C_4 odd-only {tag} expected No, got {v}"));
            }
        }
        if all_no {
            rep.pass_block(8, "C_4 under odd-only fails all eight properties");
        }
    }

    // First five-node example: unique hypercyclic vector x3, empty strong
    // set, transitivity refuted by the unreachable pair.
    {
        let (rel, top) = pende_i_instance();
        let sys = System::Iterated(rel);
        let hc = dynamics::hypercyclic_vectors(&sys, &top, &all).unwrap();
        let (strong, _) = dynamics::strong_hypercyclic_vectors(&sys, &top, &all).unwrap();
        let tt = dynamics::is_top_transitive(&sys, &top, &all).unwrap();
        if hc == NodeSet::singleton(2) && strong.is_empty() && tt.is_no() {
            rep.pass_block(3, "five-node example: vectors {x3}, strong set empty, transitive No");
        } else {
            rep.fail(&format!(
                "five-node example: hc={hc} strong={strong} tt={tt}"
            ));
        }
    }

    // Second example, two copies: unique d-hypercyclic vector x1 and no
    // strong d-hypercyclic vector.
    {
        let (rel, top) = pende_ii_instance();
        let sys = vec![System::Iterated(rel.clone()), System::Iterated(rel)];
        let d = dynamics::d_hypercyclic_vectors(&sys, &top, &all).unwrap();
        let strong = dynamics::is_strongly_d_hypercyclic(&sys, &top, &all).unwrap();
        let dtt = dynamics::is_d_top_transitive(&sys, &top, &all).unwrap();
        if d == NodeSet::singleton(0) && strong.is_no() && dtt.is_no() {
            rep.pass_block(3, "four-node pair: unique d-witness x1, strongly No, d-transitive No");
        } else {
            rep.fail(&format!("four-node pair: d={d} strong={strong} dtt={dtt}"));
        }
    }
    rep
}

/// Five-node digraph with arcs x3→x2, x3→x5, x2→x1, x1→x4, x4→x1 and
/// topology {∅, {x2}, {x5}, {x2,x5}, X}.
pub fn pende_i_instance() -> (BooleanRelation, FiniteTopology) {
    let rel = BooleanRelation::from_arcs(5, &[(2, 1), (2, 4), (1, 0), (0, 3), (3, 0)]).unwrap();
    let top = FiniteTopology::validate(
        5,
        &[
            NodeSet::empty(),
            NodeSet::singleton(1),
            NodeSet::singleton(4),
            NodeSet::from_iter([1, 4]),
            NodeSet::full(5),
        ],
    )
    .unwrap();
    (rel, top)
}

/// Four-node digraph with arcs x1→x2, x1→x3, x3→x4, x4→x3 and topology
/// {∅, {x2}, {x3}, {x2,x3}, X}.
pub fn pende_ii_instance() -> (BooleanRelation, FiniteTopology) {
    let rel = BooleanRelation::from_arcs(4, &[(0, 1), (0, 2), (2, 3), (3, 2)]).unwrap();
    let top = FiniteTopology::validate(
        4,
        &[
            NodeSet::empty(),
            NodeSet::singleton(1),
            NodeSet::singleton(2),
            NodeSet::from_iter([1, 2]),
            NodeSet::full(4),
        ],
    )
    .unwrap();
    (rel, top)
}

// ---------------------------------------------------------------------
// Four-node tournament classification (acceptance criterion 2).
// ---------------------------------------------------------------------

fn tournaments4_suite() -> SuiteReport {
    let mut rep = SuiteReport::new("tournaments4");
    let classes = digraphs::enumerate_tournaments(4, true).unwrap();
    if classes.len() != 4 {
        rep.fail(&format!("expected 4 isomorphism classes, got {}", classes.len()));
        return rep;
    }
    for t in &classes {
        let trace = t.digraph().to_relation().power_trace();
        let s = trace.preperiod();
        let p = trace.period();
        let horizon = s + 2 * p;
        // Route A: matrix powers. Route B: exhaustive walk enumeration to
        // length s+2p, then periodic extension with the trace shape; the
        // window is re-checked for consistency with that shape.
        let by_matrix = digraphs::tournament_s_collection(t, PairScope::AllSubsets).unwrap();
        let mut by_walks: BTreeSet<Eps> = BTreeSet::new();
        let reach: Vec<Vec<Vec<bool>>> =
            (0..4).map(|u| walk_reachability(&t.digraph().to_relation(), u, horizon)).collect();
        let mut consistent = true;
        for u_mask in 1u64..16 {
            for v_mask in 1u64..16 {
                let bit = |k: usize| {
                    NodeSet(u_mask)
                        .iter()
                        .any(|u| NodeSet(v_mask).iter().any(|v| reach[u][k][v]))
                };
                for k in s.max(1)..=horizon - p {
                    if bit(k) != bit(k + p) {
                        consistent = false;
                    }
                }
                by_walks.insert(Eps::from_periodic_fn(s.saturating_sub(1), p, bit));
            }
        }
        if !consistent {
            rep.fail(&format!(
                "class {}: walk window not periodic with the trace shape",
                t.bit_string()
            ));
            continue;
        }
        if by_matrix.sets == by_walks {
            rep.pass_block(
                1,
                &format!(
                    "class {} S-collection agrees across matrix and walk routes (S={})",
                    t.bit_string(),
                    by_matrix.count
                ),
            );
        } else {
            rep.fail(&format!(
                "class {}: matrix route {:?} vs walk route {:?}",
                t.bit_string(),
                by_matrix.sets,
                by_walks
            ));
        }
    }

    // Cross-checks against the published lists; discrepancies are printed
    // verbatim, not reconciled. The transitive class is the one with
    // out-degrees {0, 1, 2, 3}.
    let transitive = classes.iter().find(|t| {
        let mut degs: Vec<usize> = (0..4).map(|v| t.digraph().out_degree(v)).collect();
        degs.sort_unstable();
        degs == [0, 1, 2, 3]
    });
    if let Some(t) = transitive {
        compare_collection(
            &mut rep,
            "transitive class",
            t,
            &[
                Eps::empty(),
                Eps::from_elements(&[1]),
                Eps::from_elements(&[2]),
                Eps::from_elements(&[1, 2, 3]),
            ],
        );
    } else {
        rep.fail("transitive 4-tournament class not identified");
    }
    let strong = classes.iter().find(|t| t.digraph().is_strongly_connected());
    if let Some(t) = strong {
        compare_collection(
            &mut rep,
            "strong class",
            t,
            &[
                Eps::cofinite_excluding(&[2]),
                Eps::cofinite_excluding(&[1, 4]),
                Eps::cofinite_excluding(&[2, 3, 6]),
                Eps::cofinite_excluding(&[1, 2, 3, 6]),
                Eps::cofinite_excluding(&[1, 3, 4, 7]),
                Eps::cofinite_excluding(&[1, 2, 4, 5, 8]),
            ],
        );
    } else {
        rep.fail("strong 4-tournament class not identified");
    }
    rep
}

fn compare_collection(rep: &mut SuiteReport, label: &str, t: &Tournament, published: &[Eps]) {
    // The published lists name the generating sets; the realized
    // singleton-pair sets are the natural generators of the collection.
    let trace = t.digraph().to_relation().power_trace();
    let mut realized: BTreeSet<Eps> = BTreeSet::new();
    for u in 0..4 {
        for v in 0..4 {
            realized.insert(hit_set_uv(
                &trace,
                NodeSet::singleton(u),
                NodeSet::singleton(v),
            ));
        }
    }
    let published_set: BTreeSet<Eps> = published.iter().cloned().collect();
    let missing: Vec<String> =
        published_set.difference(&realized).map(|s| s.to_string()).collect();
    let extra: Vec<String> =
        realized.difference(&published_set).map(|s| s.to_string()).collect();
    if missing.is_empty() && extra.is_empty() {
        rep.pass_block(1, &format!("{label}: singleton sets match the published list"));
    } else {
        rep.note(&format!(
            "{label}: published-but-not-realized [{}]; realized-but-not-published [{}]",
            missing.join(", "),
            extra.join(", ")
        ));
        rep.pass_block(1, &format!("{label}: cross-check recorded"));
    }
}

// ---------------------------------------------------------------------
// Closed form S(U,V) = L(U,V) on connected bipartite graphs
// (acceptance criterion 3) plus the one-sided inclusion everywhere.
// ---------------------------------------------------------------------

fn moguce_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("moguce");
    let max_n = opts.max_n.unwrap_or(7).min(7);
    for n in 2..=max_n {
        let m = n * (n - 1) / 2;
        let (checked, failures) = (0u64..1 << m)
            .into_par_iter()
            .map(|mask| {
                let g = graph_from_mask(n, mask);
                if !g.is_connected() {
                    return (0u64, None);
                }
                let bipartite = g.is_bipartite();
                if !bipartite && n == 7 {
                    // The non-bipartite inclusion branch at n = 7 runs on
                    // isomorphism classes below.
                    return (0, None);
                }
                match check_closed_form_windows(&g, bipartite) {
                    Ok(()) => (1, None),
                    Err(e) => (0, Some(e)),
                }
            })
            .fold(
                || (0u64, Vec::new()),
                |(c, mut v), (dc, e)| {
                    if let Some(e) = e {
                        v.push(e);
                    }
                    (c + dc, v)
                },
            )
            .reduce(
                || (0u64, Vec::new()),
                |(c1, mut v1), (c2, v2)| {
                    v1.extend(v2);
                    (c1 + c2, v1)
                },
            );
        if failures.is_empty() {
            rep.pass_block(
                checked,
                &format!("n={n}: closed form and inclusion hold on {checked} connected graphs"),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    if max_n >= 7 {
        // Non-bipartite inclusion at n = 7 over isomorphism classes (the
        // inclusion is invariant under relabeling).
        let classes: Vec<SimpleGraph> = graphs::enumerate_graph_classes(7)
            .into_iter()
            .filter(|g| g.is_connected() && !g.is_bipartite())
            .collect();
        let failures: Vec<String> = classes
            .par_iter()
            .filter_map(|g| check_closed_form_windows(g, false).err())
            .collect();
        let count = classes.len() as u64;
        if failures.is_empty() {
            rep.pass_block(
                count,
                &format!("n=7: inclusion holds on {count} non-bipartite connected classes"),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

fn enumerate_graph_masks(n: usize) -> Vec<SimpleGraph> {
    graphs::enumerate_graphs(n).collect()
}

fn graph_from_mask(n: usize, mask: u64) -> SimpleGraph {
    let mut edges = Vec::new();
    let mut b = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> b & 1 == 1 {
                edges.push((i, j));
            }
            b += 1;
        }
    }
    SimpleGraph::new(n, &edges).expect("valid edges")
}

/// Window-level comparison of the matrix route S(U, V) against the
/// distance route L(U, V) over all nonempty subset pairs. Equality is
/// demanded on bipartite inputs, the inclusion L ⊆ S otherwise.
fn check_closed_form_windows(g: &SimpleGraph, require_equality: bool) -> Result<(), String> {
    let n = g.n();
    let dm = g.distance_matrix();
    let diam = g.diameter().expect("connected");
    let rel = g.to_relation();
    let table = WindowTable::from_relation(&rel, diam.max(1));
    let frame_len = table.len;
    // Distance-route singleton windows in the same frame.
    let mut lsing = vec![0u32; n * n];
    for u in 0..n {
        for v in 0..n {
            let d = dm[u][v].expect("connected");
            for k in 1..=frame_len {
                if k >= d && (k - d) % 2 == 0 {
                    lsing[u * n + v] |= 1 << (k - 1);
                }
            }
        }
    }
    let s_pairs = table.pair_windows();
    // Frame validity: on bipartite graphs the trace period is exactly 2,
    // matching the period-2 distance sets, so window equality decides set
    // equality. On non-bipartite connected graphs the trace period is 1
    // with an all-ones cycle, so beyond the threshold the inclusion holds
    // automatically and the window bits decide the prefix exactly.
    let l_table = WindowTable { n, thr: table.thr, per: table.per, len: table.len, sing: lsing };
    let l_pairs = l_table.pair_windows();
    let m = 1usize << n;
    for u_mask in 1..m {
        for v_mask in 1..m {
            let s = s_pairs[u_mask * m + v_mask];
            let l = l_pairs[u_mask * m + v_mask];
            if require_equality {
                if s != l {
                    return Err(format!(
                        "closed form fails on {:?} at U={:x} V={:x}: S window {s:b} vs L window {l:b}",
                        g, u_mask, v_mask
                    ));
                }
            } else if l & !s != 0 {
                return Err(format!(
                    "inclusion fails on {:?} at U={:x} V={:x}",
                    g, u_mask, v_mask
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Diameter and ϑ bounds (acceptance criterion 4).
// ---------------------------------------------------------------------

fn reza_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("reza");
    let max_n = opts.max_n.unwrap_or(7).min(7);
    let cap = opts.sample_cap.unwrap_or(40);

    // Path formula against brute force.
    for n in 2..=8 {
        let g = SimpleGraph::path(n).unwrap();
        let brute = graphs::s_index(&g, PairScope::AllSubsets).unwrap().count;
        let formula = graphs::path_s_index_formula(n);
        if brute == formula {
            rep.pass_block(1, &format!("path n={n}: S value {brute} matches the formula"));
        } else {
            rep.fail(&format!("path n={n}: brute {brute} vs formula {formula}"));
        }
    }

    for n in 2..=max_n {
        let graphs_n: Vec<SimpleGraph> = if n < 7 {
            enumerate_graph_masks(n).into_iter().filter(|g| g.is_connected()).collect()
        } else {
            graphs::enumerate_graph_classes(7).into_iter().filter(|g| g.is_connected()).collect()
        };
        let topologies = discrete_topologies_with_samples(n, cap);
        let failures: Vec<String> = graphs_n
            .par_iter()
            .filter_map(|g| check_bounds(g, &topologies).err())
            .collect();
        let label = if n < 7 { "graphs" } else { "isomorphism classes" };
        if failures.is_empty() {
            rep.pass_block(
                graphs_n.len() as u64,
                &format!("n={n}: bounds hold on {} connected {label}", graphs_n.len()),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

fn check_bounds(g: &SimpleGraph, topologies: &[FiniteTopology]) -> Result<(), String> {
    let rel = g.to_relation();
    let table = WindowTable::from_relation(&rel, 1);
    let pairs = table.pair_windows();
    let m = 1usize << g.n();
    let mut distinct: Vec<u32> = Vec::with_capacity((m - 1) * (m - 1));
    for u_mask in 1..m {
        for v_mask in 1..m {
            distinct.push(pairs[u_mask * m + v_mask]);
        }
    }
    distinct.sort_unstable();
    distinct.dedup();
    let s_g = distinct.len();

    if g.is_bipartite() {
        let d = g.diameter().expect("connected");
        let bound = graphs::bipartite_bound(d);
        if s_g > bound {
            return Err(format!("{g:?}: S value {s_g} exceeds bipartite bound {bound}"));
        }
    } else {
        let theta = g.theta().expect("non-bipartite connected");
        let bound = graphs::theta_bound(theta);
        if s_g > bound {
            return Err(format!("{g:?}: S value {s_g} exceeds ϑ bound {bound} (ϑ={theta})"));
        }
        // Tail containment: every pair set contains {k : k ≥ ϑ}.
        if table.len >= theta {
            let tail = table.tail_window(theta);
            let cyc = table.cycle_mask();
            for u_mask in 1..m {
                for v_mask in 1..m {
                    let w = pairs[u_mask * m + v_mask];
                    if w & tail != tail || w & cyc != cyc {
                        return Err(format!(
                            "{g:?}: tail from ϑ={theta} missing at U={u_mask:x} V={v_mask:x}"
                        ));
                    }
                }
            }
        } else {
            // ϑ beyond the window: the cycle is a single all-present class
            // on primitive graphs, so tail containment reduces to the
            // cycle bits.
            let cyc = table.cycle_mask();
            for u_mask in 1..m {
                for v_mask in 1..m {
                    if pairs[u_mask * m + v_mask] & cyc != cyc {
                        return Err(format!(
                            "{g:?}: cycle not saturated at U={u_mask:x} V={v_mask:x}"
                        ));
                    }
                }
            }
        }
    }

    // S_{G,τ} ≤ S_G for the provided topologies.
    for top in topologies {
        let mut seen: Vec<u32> = Vec::new();
        for u in top.nonempty_opens() {
            for v in top.nonempty_opens() {
                seen.push(pairs[(u.0 as usize) * m + v.0 as usize]);
            }
        }
        seen.sort_unstable();
        seen.dedup();
        if seen.len() > s_g {
            return Err(format!("{g:?}: S over {top} exceeds the all-subsets S value"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Equivalence sweeps (acceptance criterion 5 and friends).
// ---------------------------------------------------------------------

fn equivalence_failure(
    label: &str,
    plain: &dynamics::Verdict,
    strong: &dynamics::Verdict,
) -> Option<String> {
    if plain.status != strong.status {
        Some(format!("{label}: plain {plain} vs strong {strong}"))
    } else {
        None
    }
}

/// Single digraphs, every topology: hypercyclic ⟺ strongly hypercyclic.
fn pende_primp_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("pende-primp");
    let fam = FamilySpec::all_nonempty();
    let max_n = opts.max_n.unwrap_or(4).min(4);
    for n in 2..=max_n {
        let topologies = FiniteTopology::enumerate_all(n).expect("n ≤ 4");
        let digraphs_n: Vec<digraphs::Digraph> = digraphs::enumerate_digraphs(n).collect();
        let failures: Vec<String> = digraphs_n
            .par_iter()
            .filter_map(|d| {
                let sys = System::Iterated(d.to_relation());
                for top in &topologies {
                    let plain = dynamics::is_hypercyclic(&sys, top, &fam).unwrap();
                    let strong = dynamics::is_strongly_hypercyclic(&sys, top, &fam).unwrap();
                    if let Some(msg) =
                        equivalence_failure(&format!("digraph {d:?} topology {top}"), &plain, &strong)
                    {
                        return Some(msg);
                    }
                }
                None
            })
            .collect();
        let total = digraphs_n.len() as u64 * topologies.len() as u64;
        if failures.is_empty() {
            rep.pass_block(
                total,
                &format!(
                    "n={n}: hypercyclic ⟺ strongly hypercyclic on {} digraphs × {} topologies",
                    digraphs_n.len(),
                    topologies.len()
                ),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

/// Digraph pairs n ≤ 3, every topology: d-hypercyclic ⟺ strongly.
fn pende_primp_disjoint_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("pende-primp-disjoint");
    let fam = FamilySpec::all_nonempty();
    let max_n = opts.max_n.unwrap_or(3).min(3);
    for n in 2..=max_n {
        let topologies = FiniteTopology::enumerate_all(n).expect("n ≤ 3");
        let digraphs_n: Vec<digraphs::Digraph> = digraphs::enumerate_digraphs(n).collect();
        let failures: Vec<String> = digraphs_n
            .par_iter()
            .flat_map_iter(|d1| digraphs_n.iter().map(move |d2| (d1, d2)))
            .filter_map(|(d1, d2)| {
                let sys =
                    vec![System::Iterated(d1.to_relation()), System::Iterated(d2.to_relation())];
                for top in &topologies {
                    let plain = dynamics::is_d_hypercyclic(&sys, top, &fam).unwrap();
                    let strong = dynamics::is_strongly_d_hypercyclic(&sys, top, &fam).unwrap();
                    if let Some(msg) = equivalence_failure(
                        &format!("pair ({d1:?}, {d2:?}) topology {top}"),
                        &plain,
                        &strong,
                    ) {
                        return Some(msg);
                    }
                }
                None
            })
            .collect();
        let total =
            (digraphs_n.len() * digraphs_n.len() * topologies.len()) as u64;
        if failures.is_empty() {
            rep.pass_block(
                total,
                &format!(
                    "n={n}: d-hypercyclic ⟺ strongly on {}² pairs × {} topologies",
                    digraphs_n.len(),
                    topologies.len()
                ),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

/// Graph pairs n ≤ 4, every topology: d-hypercyclic ⟺ strongly
/// d-hypercyclic, both deciders run independently.
fn poka_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("poka");
    let fam = FamilySpec::all_nonempty();
    let max_n = opts.max_n.unwrap_or(4).min(4);
    for n in 2..=max_n {
        let topologies = FiniteTopology::enumerate_all(n).expect("n ≤ 4");
        let graphs_n: Vec<SimpleGraph> = enumerate_graph_masks(n);
        let failures: Vec<String> = graphs_n
            .par_iter()
            .flat_map_iter(|g1| graphs_n.iter().map(move |g2| (g1, g2)))
            .filter_map(|(g1, g2)| {
                let sys = vec![
                    System::Iterated(g1.to_relation()),
                    System::Iterated(g2.to_relation()),
                ];
                for top in &topologies {
                    let plain = dynamics::is_d_hypercyclic(&sys, top, &fam).unwrap();
                    let strong = dynamics::is_strongly_d_hypercyclic(&sys, top, &fam).unwrap();
                    if let Some(msg) = equivalence_failure(
                        &format!("graphs ({g1:?}, {g2:?}) topology {top}"),
                        &plain,
                        &strong,
                    ) {
                        return Some(msg);
                    }
                }
                None
            })
            .collect();
        let total = (graphs_n.len() * graphs_n.len() * topologies.len()) as u64;
        if failures.is_empty() {
            rep.pass_block(
                total,
                &format!(
                    "n={n}: d-hypercyclic ⟺ strongly on {}² graph pairs × {} topologies",
                    graphs_n.len(),
                    topologies.len()
                ),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

/// Discrete topology: (i) digraphs n ≤ 4, hypercyclic ⟺ strongly and
/// transitive ⟺ strongly; (ii) digraph pairs n ≤ 3, d-hypercyclic ⟺
/// strongly.
fn vaterpolo_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("vaterpolo");
    let fam = FamilySpec::all_nonempty();
    let max_n = opts.max_n.unwrap_or(4).min(4);
    for n in 2..=max_n {
        let top = FiniteTopology::discrete(n);
        let digraphs_n: Vec<digraphs::Digraph> = digraphs::enumerate_digraphs(n).collect();
        let failures: Vec<String> = digraphs_n
            .par_iter()
            .filter_map(|d| {
                let sys = System::Iterated(d.to_relation());
                let hc = dynamics::is_hypercyclic(&sys, &top, &fam).unwrap();
                let shc = dynamics::is_strongly_hypercyclic(&sys, &top, &fam).unwrap();
                if let Some(m) = equivalence_failure(&format!("digraph {d:?} hc"), &hc, &shc) {
                    return Some(m);
                }
                let tt = dynamics::is_top_transitive(&sys, &top, &fam).unwrap();
                let stt = dynamics::is_strongly_top_transitive(&sys, &top, &fam).unwrap();
                equivalence_failure(&format!("digraph {d:?} tt"), &tt, &stt)
            })
            .collect();
        if failures.is_empty() {
            rep.pass_block(
                2 * digraphs_n.len() as u64,
                &format!("(i) n={n}: both equivalences hold on {} digraphs", digraphs_n.len()),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    for n in 2..=max_n.min(3) {
        let top = FiniteTopology::discrete(n);
        let digraphs_n: Vec<digraphs::Digraph> = digraphs::enumerate_digraphs(n).collect();
        let failures: Vec<String> = digraphs_n
            .par_iter()
            .flat_map_iter(|d1| digraphs_n.iter().map(move |d2| (d1, d2)))
            .filter_map(|(d1, d2)| {
                let sys =
                    vec![System::Iterated(d1.to_relation()), System::Iterated(d2.to_relation())];
                let plain = dynamics::is_d_hypercyclic(&sys, &top, &fam).unwrap();
                let strong = dynamics::is_strongly_d_hypercyclic(&sys, &top, &fam).unwrap();
                equivalence_failure(&format!("pair ({d1:?}, {d2:?})"), &plain, &strong)
            })
            .collect();
        if failures.is_empty() {
            rep.pass_block(
                (digraphs_n.len() * digraphs_n.len()) as u64,
                &format!("(ii) n={n}: d-equivalence holds on {}² pairs", digraphs_n.len()),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

/// Tournaments: (i) hypercyclic ⟺ strongly hypercyclic for n in 3..=6;
/// (ii) tournament pairs n = 4 over every topology; (iii) the
/// counterexample construction for n in 5..=7.
fn pende_bn_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("pende-bn");
    let fam = FamilySpec::all_nonempty();
    let max_n = opts.max_n.unwrap_or(6).min(7);
    let cap = opts.sample_cap.unwrap_or(60);

    for n in 3..=max_n.max(3) {
        if n > 6 {
            break;
        }
        let topologies = discrete_topologies_with_samples(n, cap);
        let ts = digraphs::enumerate_tournaments(n, false).unwrap();
        let failures: Vec<String> = ts
            .par_iter()
            .filter_map(|t| {
                let sys = System::Iterated(t.digraph().to_relation());
                for top in &topologies {
                    let plain = dynamics::is_hypercyclic(&sys, top, &fam).unwrap();
                    let strong = dynamics::is_strongly_hypercyclic(&sys, top, &fam).unwrap();
                    if let Some(m) = equivalence_failure(
                        &format!("tournament {} topology {top}", t.bit_string()),
                        &plain,
                        &strong,
                    ) {
                        return Some(m);
                    }
                }
                None
            })
            .collect();
        let policy = if n <= 4 { "all topologies" } else { "generator-sampled topologies" };
        if failures.is_empty() {
            rep.pass_block(
                (ts.len() * topologies.len()) as u64,
                &format!(
                    "(i) n={n}: equivalence on {} tournaments × {} {policy}",
                    ts.len(),
                    topologies.len()
                ),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }

    // (ii) pairs of 4-tournaments over all 355 topologies.
    {
        let topologies = FiniteTopology::enumerate_all(4).unwrap();
        let ts = digraphs::enumerate_tournaments(4, false).unwrap();
        let failures: Vec<String> = ts
            .par_iter()
            .flat_map_iter(|t1| ts.iter().map(move |t2| (t1, t2)))
            .filter_map(|(t1, t2)| {
                let sys = vec![
                    System::Iterated(t1.digraph().to_relation()),
                    System::Iterated(t2.digraph().to_relation()),
                ];
                for top in &topologies {
                    let plain = dynamics::is_d_hypercyclic(&sys, top, &fam).unwrap();
                    let strong = dynamics::is_strongly_d_hypercyclic(&sys, top, &fam).unwrap();
                    if let Some(m) = equivalence_failure(
                        &format!("pair ({}, {}) topology {top}", t1.bit_string(), t2.bit_string()),
                        &plain,
                        &strong,
                    ) {
                        return Some(m);
                    }
                }
                None
            })
            .collect();
        let total = (ts.len() * ts.len() * topologies.len()) as u64;
        if failures.is_empty() {
            rep.pass_block(
                total,
                &format!("(ii) n=4: d-equivalence on {}² pairs × 355 topologies", ts.len()),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }

    // (iii) the construction; its postcondition is decider-verified inside.
    for n in 5..=max_n.max(5).min(7) {
        match digraphs::build_counterexample_pair(n) {
            Ok((t1, t2, _top)) => rep.pass_block(
                1,
                &format!(
                    "(iii) n={n}: pair ({}, {}) is d-hypercyclic with unique witness x1, not strongly",
                    t1.bit_string(),
                    t2.bit_string()
                ),
            ),
            Err(e) => rep.fail(&format!("(iii) n={n}: construction failed: {e}")),
        }
    }
    rep
}

/// Connected non-bipartite graph pairs: strongly d-hypercyclic with every
/// node a witness, under the all-nonempty family and discrete topology;
/// bipartite pairs on a common 2-coloring are never d-hypercyclic.
fn radio_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("radio");
    let fam = FamilySpec::all_nonempty();
    let max_n = opts.max_n.unwrap_or(4).min(5);
    for n in 3..=max_n {
        let top = FiniteTopology::discrete(n);
        let nonbip: Vec<SimpleGraph> = enumerate_graph_masks(n)
            .into_iter()
            .filter(|g| g.is_connected() && !g.is_bipartite())
            .collect();
        let failures: Vec<String> = nonbip
            .par_iter()
            .flat_map_iter(|g1| nonbip.iter().map(move |g2| (g1, g2)))
            .filter_map(|(g1, g2)| {
                let sys = vec![
                    System::Iterated(g1.to_relation()),
                    System::Iterated(g2.to_relation()),
                ];
                let (strong, _) =
                    dynamics::strong_d_hypercyclic_vectors(&sys, &top, &fam).unwrap();
                if strong != NodeSet::full(n) {
                    Some(format!(
                        "pair ({g1:?}, {g2:?}): strong d-witness set {strong} is not everything"
                    ))
                } else {
                    None
                }
            })
            .collect();
        if failures.is_empty() {
            rep.pass_block(
                (nonbip.len() * nonbip.len()) as u64,
                &format!(
                    "n={n}: every node is a strong d-witness on {}² non-bipartite pairs",
                    nonbip.len()
                ),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }

    // Bipartite pairs on a common coloring cannot be d-hypercyclic.
    for n in 2..=max_n.min(4) {
        let top = FiniteTopology::discrete(n);
        let mut checked = 0u64;
        let mut failures = Vec::new();
        for side_mask in 1u64..(1 << n) - 1 {
            let side = NodeSet(side_mask);
            let crossing: Vec<(usize, usize)> = {
                let mut v = Vec::new();
                for i in side.iter() {
                    for j in 0..n {
                        if !side.contains(j) {
                            v.push((i, j));
                        }
                    }
                }
                v
            };
            let m = crossing.len();
            let graphs_on_split: Vec<SimpleGraph> = (0u64..1 << m)
                .map(|mask| {
                    let edges: Vec<(usize, usize)> = (0..m)
                        .filter(|&b| mask >> b & 1 == 1)
                        .map(|b| crossing[b])
                        .collect();
                    SimpleGraph::new(n, &edges).unwrap()
                })
                .filter(|g| g.edge_count() > 0)
                .collect();
            for g1 in &graphs_on_split {
                for g2 in &graphs_on_split {
                    let sys = vec![
                        System::Iterated(g1.to_relation()),
                        System::Iterated(g2.to_relation()),
                    ];
                    let v = dynamics::is_d_hypercyclic(&sys, &top, &fam).unwrap();
                    checked += 1;
                    if !v.is_no() {
                        failures.push(format!(
                            "bipartite pair on split {side}: ({g1:?}, {g2:?}) gave {v}"
                        ));
                    }
                }
            }
        }
        if failures.is_empty() {
            rep.pass_block(checked, &format!("n={n}: {checked} bipartite pairs all refused"));
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

/// Exponent facts on labeled tournaments (acceptance criterion 7):
/// primitive ⟹ 3 ≤ e ≤ n+2, d ≤ e ≤ d+3, and every realized singleton
/// return set contains the tail from e.
fn idiot_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("idiot");
    let max_n = opts.max_n.unwrap_or(7).min(7);
    for n in 5..=max_n {
        let m = n * (n - 1) / 2;
        let masks: Vec<u64> = (0u64..1 << m).collect();
        let outcomes: Vec<Result<bool, String>> = masks
            .par_iter()
            .map(|&bits| {
                let t = Tournament::from_bits(n, bits).expect("valid");
                let rel = t.digraph().to_relation();
                let trace = rel.power_trace();
                let Some(e) = trace.exponent() else {
                    return Ok(false);
                };
                if !(3..=n + 2).contains(&e) {
                    return Err(format!("tournament {}: exponent {e} outside 3..=n+2", t.bit_string()));
                }
                let d = digraphs::directed_diameter(t.digraph());
                if !(d <= e && e <= d + 3) {
                    return Err(format!(
                        "tournament {}: d={d}, e={e} violates d ≤ e ≤ d+3",
                        t.bit_string()
                    ));
                }
                // Once all-ones, the powers stay all-ones, so the trace
                // cycle is the single all-ones matrix and every singleton
                // return set contains the tail from e.
                if trace.period() != 1 || !trace.power(e).all_ones() {
                    return Err(format!("tournament {}: trace cycle not saturated", t.bit_string()));
                }
                for k in e..trace.preperiod() + trace.period() {
                    if !trace.power(k).all_ones() {
                        return Err(format!(
                            "tournament {}: power {k} lost positivity",
                            t.bit_string()
                        ));
                    }
                }
                if e >= 2 && trace.power(e - 1).all_ones() {
                    return Err(format!("tournament {}: exponent {e} not minimal", t.bit_string()));
                }
                Ok(true)
            })
            .collect();
        let mut primitive = 0u64;
        let mut failures = Vec::new();
        for o in outcomes {
            match o {
                Ok(true) => primitive += 1,
                Ok(false) => {}
                Err(e) => failures.push(e),
            }
        }
        if failures.is_empty() {
            rep.pass_block(
                primitive,
                &format!(
                    "n={n}: exponent facts hold on {primitive} primitive of {} labeled tournaments",
                    masks.len()
                ),
            );
        } else {
            rep.absorb_failures(failures);
        }
    }
    rep
}

/// Matrix-power reachability versus exhaustive walk enumeration on
/// random relations (acceptance criterion 8).
fn backbone_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("backbone");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = 10_000usize;
    let max_k = 8usize;
    let mut cases: Vec<BooleanRelation> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let n = rng.gen_range(1..=5);
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.35) {
                    arcs.push((i, j));
                }
            }
        }
        cases.push(BooleanRelation::from_arcs(n, &arcs).unwrap());
    }
    let failures: Vec<String> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(idx, rel)| {
            let n = rel.n();
            let reaches: Vec<Vec<Vec<bool>>> =
                (0..n).map(|u| walk_reachability(rel, u, max_k)).collect();
            let mut power = BooleanRelation::identity(n).unwrap();
            for k in 1..=max_k {
                power = crate::relations::compose(rel, &power).unwrap();
                for u in 0..n {
                    for v in 0..n {
                        if power.has_arc(u, v) != reaches[u][k][v] {
                            return Some(format!(
                                "sample {idx}: power {k} disagrees with walks at ({u},{v}) on {rel:?}"
                            ));
                        }
                    }
                }
            }
            None
        })
        .collect();
    if failures.is_empty() {
        rep.pass_block(
            (samples * max_k) as u64,
            &format!("{samples} random relations × k ≤ {max_k}: bit-exact agreement"),
        );
    } else {
        rep.absorb_failures(failures);
    }
    rep
}

/// Determinism across thread counts: the vaterpolo suite must render
/// byte-identically under 1 and 2 worker threads.
fn determinism_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("determinism");
    let run_with = |threads: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("pool");
        pool.install(|| {
            let mut o = opts.clone();
            o.max_n = Some(3);
            run_suite("vaterpolo", &o).unwrap().render()
        })
    };
    let one = run_with(1);
    let two = run_with(2);
    if one == two {
        rep.pass_block(1, "suite output byte-identical across 1 and 2 threads");
    } else {
        rep.fail("suite output differs across thread counts");
    }
    rep
}
