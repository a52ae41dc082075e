//! Cross-module invariants: restriction invariance, component projection,
//! the discrete finite-union characterization, strong-implies-plain under
//! upward closure, the anti-discrete collapse, and the worked selection
//! and shift-transfer examples.

use hyperrel_core::dynamics::{
    self, check_shift_transfer, d_hit_set, hypercyclic_vectors, is_d_hypercyclic,
    is_d_top_transitive, is_hypercyclic, is_strongly_d_hypercyclic,
    is_strongly_d_top_transitive, is_strongly_hypercyclic, is_strongly_top_transitive,
    is_top_transitive, strong_hypercyclic_vectors, strong_witness_schedule, Status, System,
};
use hyperrel_core::family::{FamilyKind, FamilySpec};
use hyperrel_core::natset::EventuallyPeriodicSet as Eps;
use hyperrel_core::nodes::NodeSet;
use hyperrel_core::relations::{hit_set, BooleanRelation, RelationSequence};
use hyperrel_core::topology::FiniteTopology;
use hyperrel_core::{digraphs, graphs};

fn rel(n: usize, arcs: &[(usize, usize)]) -> BooleanRelation {
    BooleanRelation::from_arcs(n, arcs).unwrap()
}

fn all_relations(n: usize) -> Vec<BooleanRelation> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let arcs: Vec<(usize, usize)> = (0..pairs.len())
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| pairs[b])
                .collect();
            rel(n, &arcs)
        })
        .collect()
}

fn family_list() -> Vec<FamilySpec> {
    vec![
        FamilySpec::all_nonempty(),
        FamilySpec::tail(2).unwrap(),
        FamilySpec::new(FamilyKind::Infinite),
        FamilySpec::new(FamilyKind::Cofinite),
        FamilySpec::new(FamilyKind::OddOnly),
        FamilySpec::new(FamilyKind::MinCard(2)),
        FamilySpec::upward_from(vec![Eps::evens()]),
        FamilySpec::finite_unions_of(vec![Eps::from_elements(&[1]), Eps::naturals()], true),
    ]
}

/// Restriction of every power to the rows inside D_∞, as a sequence.
fn restricted_sequence(r: &BooleanRelation) -> RelationSequence {
    let trace = r.power_trace();
    let dom = trace.d_infinity();
    let restrict = |m: &BooleanRelation| -> BooleanRelation {
        let arcs: Vec<(usize, usize)> =
            m.arcs().into_iter().filter(|&(i, _)| dom.contains(i)).collect();
        BooleanRelation::from_arcs(m.n(), &arcs).unwrap()
    };
    let s = trace.preperiod();
    let p = trace.period();
    let prefix: Vec<BooleanRelation> = (1..s).map(|k| restrict(trace.power(k))).collect();
    let cycle: Vec<BooleanRelation> = (s..s + p).map(|k| restrict(trace.power(k))).collect();
    RelationSequence::new(prefix, cycle).unwrap()
}

/// Restriction invariance: the deciders agree between the iterated
/// relation and the sequence of row-restricted powers (exhaustive n ≤ 3,
/// all topologies, all built-in kinds).
#[test]
fn restriction_invariance_on_sequences_of_restricted_powers() {
    for n in 1..=3 {
        let topologies = FiniteTopology::enumerate_all(n).unwrap();
        for r in all_relations(n) {
            let seq = System::Sequence(restricted_sequence(&r));
            let iter = System::Iterated(r);
            for top in &topologies {
                for fam in family_list() {
                    let a = hypercyclic_vectors(&iter, top, &fam).unwrap();
                    let b = hypercyclic_vectors(&seq, top, &fam).unwrap();
                    assert_eq!(a, b, "hc vectors differ: {iter:?} {top} {fam}");
                    let (sa, va) = strong_hypercyclic_vectors(&iter, top, &fam).unwrap();
                    let (sb, vb) = strong_hypercyclic_vectors(&seq, top, &fam).unwrap();
                    assert_eq!(sa, sb, "strong sets differ: {iter:?} {top} {fam}");
                    for (x, (pa, pb)) in va.iter().zip(&vb).enumerate() {
                        assert_eq!(
                            pa.status, pb.status,
                            "node {x} strong verdict differs: {iter:?} {top} {fam}"
                        );
                    }
                }
            }
        }
    }
}

/// The row-restricted relation, iterated, is a different object: its
/// powers lose two-step walks through nodes outside D_∞, so the naive
/// "restrict, then iterate" reading of restriction invariance is false.
#[test]
fn iterating_the_restricted_relation_changes_verdicts() {
    // x keeps a loop, a exits the common domain, v is only reachable
    // through a.
    let r = rel(3, &[(0, 0), (0, 1), (1, 2)]);
    let top = FiniteTopology::discrete(3);
    let fam = FamilySpec::all_nonempty();
    let sys = System::Iterated(r.clone());
    assert_eq!(
        hypercyclic_vectors(&sys, &top, &fam).unwrap(),
        NodeSet::singleton(0)
    );
    let dom = r.d_infinity();
    assert_eq!(dom, NodeSet::singleton(0));
    let chopped = rel(3, &[(0, 0), (0, 1)]);
    let chopped_sys = System::Iterated(chopped);
    // v = node 2 becomes unreachable, so x loses hypercyclicity.
    assert!(hypercyclic_vectors(&chopped_sys, &top, &fam).unwrap().is_empty());
}

/// Component projection: a d-hypercyclic pair projects to hypercyclic
/// components when the relations coincide or the family is upward closed.
#[test]
fn component_projection() {
    let families = family_list();
    // Equal pairs: every relation on 3 nodes, arbitrary family.
    let topologies = FiniteTopology::enumerate_all(3).unwrap();
    for r in all_relations(3) {
        let pair = vec![System::Iterated(r.clone()), System::Iterated(r.clone())];
        let single = System::Iterated(r.clone());
        for top in &topologies {
            for fam in &families {
                if is_d_hypercyclic(&pair, top, fam).unwrap().is_yes() {
                    assert!(
                        is_hypercyclic(&single, top, fam).unwrap().is_yes(),
                        "equal pair projects: {r:?} {top} {fam}"
                    );
                }
            }
        }
    }
    // Distinct loop-free pairs under upward-closed families.
    let digraphs3: Vec<BooleanRelation> =
        digraphs::enumerate_digraphs(3).map(|d| d.to_relation()).collect();
    let upward: Vec<&FamilySpec> = families.iter().filter(|f| f.upward_closed()).collect();
    let discrete = FiniteTopology::discrete(3);
    for r1 in &digraphs3 {
        for r2 in &digraphs3 {
            let pair = vec![System::Iterated(r1.clone()), System::Iterated(r2.clone())];
            for fam in &upward {
                if is_d_hypercyclic(&pair, &discrete, fam).unwrap().is_yes() {
                    for r in [r1, r2] {
                        assert!(
                            is_hypercyclic(&System::Iterated(r.clone()), &discrete, fam)
                                .unwrap()
                                .is_yes(),
                            "component not hypercyclic: {r1:?} {r2:?} {fam}"
                        );
                    }
                }
            }
        }
    }
}

/// Discrete topology and a union-closed family: x is hypercyclic iff
/// x ∈ D_∞ and every singleton return set belongs to the family. Both
/// sides computed independently.
#[test]
fn discrete_finite_union_characterization() {
    for n in 2..=3 {
        let top = FiniteTopology::discrete(n);
        for r in all_relations(n) {
            let trace = r.power_trace();
            let dom = trace.d_infinity();
            let sys = System::Iterated(r.clone());
            // Every built-in kind is closed under finite unions.
            for fam in family_list() {
                let lhs = hypercyclic_vectors(&sys, &top, &fam).unwrap();
                let mut rhs = NodeSet::empty();
                for x in dom.iter() {
                    if (0..n).all(|i| fam.membership(&hit_set(&trace, x, NodeSet::singleton(i)))) {
                        rhs.insert(x);
                    }
                }
                assert_eq!(lhs, rhs, "{r:?} {fam}");
            }
        }
    }
}

/// Condition (I): a strong Yes forces a plain Yes for upward-closed
/// families, for hypercyclicity and transitivity alike.
#[test]
fn strong_implies_plain_under_upward_closure() {
    let topologies = FiniteTopology::enumerate_all(3).unwrap();
    let families: Vec<FamilySpec> =
        family_list().into_iter().filter(|f| f.upward_closed()).collect();
    for r in all_relations(3) {
        let sys = System::Iterated(r.clone());
        for top in &topologies {
            for fam in &families {
                if is_strongly_hypercyclic(&sys, top, fam).unwrap().is_yes() {
                    assert!(
                        is_hypercyclic(&sys, top, fam).unwrap().is_yes(),
                        "strong hc without plain hc: {r:?} {top} {fam}"
                    );
                }
                if is_strongly_top_transitive(&sys, top, fam).unwrap().is_yes() {
                    assert!(
                        is_top_transitive(&sys, top, fam).unwrap().is_yes(),
                        "strong tt without plain tt: {r:?} {top} {fam}"
                    );
                }
            }
        }
    }
}

/// Anti-discrete topology with ℕ in the family: plain and strong notions
/// coincide and the witness set is exactly D_∞.
#[test]
fn anti_discrete_collapse() {
    for n in 2..=3 {
        let top = FiniteTopology::antidiscrete(n);
        let families: Vec<FamilySpec> =
            family_list().into_iter().filter(|f| f.contains_n()).collect();
        for r in all_relations(n) {
            let dom = r.d_infinity();
            let sys = System::Iterated(r.clone());
            for fam in &families {
                let plain = hypercyclic_vectors(&sys, &top, fam).unwrap();
                let (strong, _) = strong_hypercyclic_vectors(&sys, &top, fam).unwrap();
                assert_eq!(plain, dom, "{r:?} {fam}");
                assert_eq!(strong, dom, "{r:?} {fam}");
                let tt = is_top_transitive(&sys, &top, fam).unwrap();
                let stt = is_strongly_top_transitive(&sys, &top, fam).unwrap();
                if !dom.is_empty() {
                    // With a nonempty common domain, S(X, X) = ℕ and the
                    // two transitivity notions coincide.
                    assert_eq!(tt.status, stt.status, "{r:?} {fam}");
                } else {
                    // Orbits die out: no selection exists, while the plain
                    // notion may still accept the finite S(X, X).
                    assert_eq!(stt.status, Status::No, "{r:?} {fam}");
                }
            }
        }
    }
}

/// The two-node instance from the non-anti-discrete discussion: both
/// nodes are hypercyclic; the forced selection y_n = x2 also witnesses
/// both as strong vectors under the literal selection definition.
#[test]
fn two_node_strong_vectors() {
    let r = rel(2, &[(0, 1), (1, 1)]);
    let top = FiniteTopology::validate(
        2,
        &[NodeSet::empty(), NodeSet::singleton(1), NodeSet::full(2)],
    )
    .unwrap();
    let fam = FamilySpec::all_nonempty();
    let sys = System::Iterated(r);
    assert_eq!(hypercyclic_vectors(&sys, &top, &fam).unwrap(), NodeSet::full(2));
    let (strong, _) = strong_hypercyclic_vectors(&sys, &top, &fam).unwrap();
    assert_eq!(strong, NodeSet::full(2));
}

/// Selection schedules materialize and stay inside the orbits.
#[test]
fn schedules_validate() {
    let (r, top) = hyperrel_core::verify::pende_ii_instance();
    let fam = FamilySpec::all_nonempty();
    let sys = System::Iterated(r.clone());
    let (strong, _) = strong_hypercyclic_vectors(&sys, &top, &fam).unwrap();
    assert!(strong.contains(0));
    let sched = strong_witness_schedule(&sys, &top, &fam, 0).unwrap().unwrap();
    let trace = r.power_trace();
    let mut hit_opens = NodeSet::empty();
    for n in 1..=sched.horizon + 3 * sched.period {
        let y = sched.choice_at(n)[0];
        assert!(
            trace.power(n).has_arc(0, y),
            "schedule leaves the orbit at step {n}"
        );
        for v in top.nonempty_opens() {
            if v.contains(y) {
                hit_opens = hit_opens.union(&v);
            }
        }
    }
    for v in top.nonempty_opens() {
        assert!(
            v.iter().any(|i| hit_opens.contains(i)),
            "open {v} never hit by the schedule"
        );
    }
}

/// Strong transitivity under the literal definition: the single-arc
/// relation is transitive but not strongly (its squares have empty
/// domain); the alternating sequence also fails strongly because the
/// even-indexed relations have empty images on {x}.
#[test]
fn strong_transitivity_examples() {
    // Single arc, discrete, family {∅, {1}}.
    let r = rel(2, &[(0, 1)]);
    let top = FiniteTopology::discrete(2);
    let fam = FamilySpec::finite_unions_of(vec![Eps::from_elements(&[1])], true);
    let sys = System::Iterated(r);
    assert!(is_top_transitive(&sys, &top, &fam).unwrap().is_yes());
    let strong = is_strongly_top_transitive(&sys, &top, &fam).unwrap();
    assert!(strong.is_no());

    // Alternating sequence: ρ_2({x}) = ∅ already blocks any selection.
    let fwd = rel(2, &[(0, 1)]);
    let bwd = rel(2, &[(1, 0)]);
    let seq = System::Sequence(RelationSequence::new(vec![], vec![fwd, bwd]).unwrap());
    let up = FamilySpec::upward_from(vec![Eps::evens(), Eps::odds()]);
    let strong = is_strongly_top_transitive(&seq, &top, &up).unwrap();
    assert!(strong.is_no());

    // Identity on the anti-discrete space is strongly transitive.
    let id = System::Iterated(BooleanRelation::identity(3).unwrap());
    let anti = FiniteTopology::antidiscrete(3);
    let all = FamilySpec::all_nonempty();
    assert!(is_strongly_top_transitive(&id, &anti, &all).unwrap().is_yes());
}

/// Two-node tournament pair: d-transitive for a family containing ∅ and
/// {1}, never strongly d-transitive (the common domain of the squares is
/// empty).
#[test]
fn two_node_pair_transitive_but_not_strongly() {
    let r = rel(2, &[(0, 1)]);
    let pair = vec![System::Iterated(r.clone()), System::Iterated(r)];
    let top = FiniteTopology::discrete(2);
    let fam = FamilySpec::finite_unions_of(vec![Eps::from_elements(&[1])], true);
    assert!(is_d_top_transitive(&pair, &top, &fam).unwrap().is_yes());
    assert!(is_strongly_d_top_transitive(&pair, &top, &fam).unwrap().is_no());
}

#[test]
fn d_hit_set_examples() {
    // N copies of the same relation with the same target reduce to the
    // plain hit set.
    let (r, _) = hyperrel_core::verify::pende_i_instance();
    let trace = r.power_trace();
    let v = NodeSet::from_iter([0, 3]);
    let copies = vec![System::Iterated(r.clone()), System::Iterated(r.clone())];
    assert_eq!(
        d_hit_set(&copies, 2, &[v, v]).unwrap(),
        hit_set(&trace, 2, v)
    );

    // K_2 against itself with swapped targets: odd ∩ even = ∅.
    let k2 = SimpleGraphRel::k2();
    let pair = vec![System::Iterated(k2.clone()), System::Iterated(k2)];
    assert_eq!(
        d_hit_set(&pair, 0, &[NodeSet::singleton(1), NodeSet::singleton(0)]).unwrap(),
        Eps::empty()
    );

    // The five-node counterexample pair: both probed tuples are hit.
    let (t1, t2, _top) = digraphs::build_counterexample_pair(5).unwrap();
    let pair = vec![
        System::Iterated(t1.digraph().to_relation()),
        System::Iterated(t2.digraph().to_relation()),
    ];
    let a = d_hit_set(&pair, 0, &[NodeSet::singleton(1), NodeSet::singleton(1)]).unwrap();
    let b = d_hit_set(&pair, 0, &[NodeSet::singleton(1), NodeSet::singleton(2)]).unwrap();
    assert!(!a.is_empty());
    assert!(!b.is_empty());
}

struct SimpleGraphRel;

impl SimpleGraphRel {
    fn k2() -> BooleanRelation {
        graphs::SimpleGraph::complete(2).unwrap().to_relation()
    }
}

/// Complete-graph tuples: two copies of K_2 need ∅, 2ℕ and 2ℕ+1 in the
/// family; two copies of K_n (n ≥ 3) need ℕ∖{1}.
#[test]
fn complete_graph_disjoint_conditions() {
    let k2 = SimpleGraphRel::k2();
    let pair = vec![System::Iterated(k2.clone()), System::Iterated(k2)];
    let top = FiniteTopology::discrete(2);
    let with_empty = FamilySpec::finite_unions_of(vec![Eps::evens(), Eps::odds()], true);
    assert!(is_d_hypercyclic(&pair, &top, &with_empty).unwrap().is_yes());
    assert!(is_d_top_transitive(&pair, &top, &with_empty).unwrap().is_yes());
    assert!(is_d_hypercyclic(&pair, &top, &FamilySpec::all_nonempty()).unwrap().is_no());

    for n in 3..=4 {
        let kn = graphs::SimpleGraph::complete(n).unwrap().to_relation();
        let pair = vec![System::Iterated(kn.clone()), System::Iterated(kn)];
        let top = FiniteTopology::discrete(n);
        let with = FamilySpec::upward_from(vec![Eps::cofinite_excluding(&[1])]);
        let without =
            FamilySpec::finite_unions_of(vec![Eps::from_elements(&[1]), Eps::naturals()], true);
        assert!(is_d_hypercyclic(&pair, &top, &with).unwrap().is_yes());
        assert!(is_d_top_transitive(&pair, &top, &with).unwrap().is_yes());
        assert!(is_d_hypercyclic(&pair, &top, &without).unwrap().is_no());
    }
}

#[test]
fn shift_transfer_examples() {
    // Families of sets with at least m elements always transfer.
    let k3 = graphs::SimpleGraph::complete(3).unwrap().to_relation();
    let top = FiniteTopology::discrete(3);
    let min2 = FamilySpec::new(FamilyKind::MinCard(2));
    let v = check_shift_transfer(&k3, &top, &min2, 0, 1).unwrap();
    assert_eq!(v.status, Status::Yes);

    // The odd-only family flips parity under a 1-shift on the square.
    let c4 = graphs::SimpleGraph::cycle(4).unwrap().to_relation();
    let top4 = FiniteTopology::discrete(4);
    let odd = FamilySpec::new(FamilyKind::OddOnly);
    let v = check_shift_transfer(&c4, &top4, &odd, 0, 1).unwrap();
    assert_eq!(v.status, Status::No);

    // l = 0 is rejected.
    assert!(check_shift_transfer(&c4, &top4, &odd, 0, 0).is_err());
}

/// Strong hypercyclicity of tournaments at the discrete topology is the
/// positive-indegree condition; exhaustive over labeled tournaments.
#[test]
fn tournament_strong_hypercyclicity_is_positive_indegree() {
    let fam = FamilySpec::all_nonempty();
    for n in 3..=6 {
        let top = FiniteTopology::discrete(n);
        for t in digraphs::enumerate_tournaments(n, false).unwrap() {
            let sys = System::Iterated(t.digraph().to_relation());
            let strong = is_strongly_hypercyclic(&sys, &top, &fam).unwrap();
            let min_indegree_positive = (0..n).all(|v| t.digraph().in_degree(v) >= 1);
            assert_eq!(
                strong.is_yes(),
                min_indegree_positive,
                "tournament {} (n={n})",
                t.bit_string()
            );
        }
    }
}

/// For tournament tuples on at least four nodes: strongly d-transitive ⟺
/// every component strongly connected ⟺ every component Hamiltonian.
#[test]
fn tournament_tuples_strong_transitivity_is_strong_connectivity() {
    let fam = FamilySpec::all_nonempty();
    // Exhaustive labeled pairs at n = 4.
    let ts4 = digraphs::enumerate_tournaments(4, false).unwrap();
    let top4 = FiniteTopology::discrete(4);
    for t1 in &ts4 {
        for t2 in &ts4 {
            let pair = vec![
                System::Iterated(t1.digraph().to_relation()),
                System::Iterated(t2.digraph().to_relation()),
            ];
            let sdt = is_strongly_d_top_transitive(&pair, &top4, &fam).unwrap();
            let expected = t1.digraph().is_strongly_connected()
                && t2.digraph().is_strongly_connected();
            assert_eq!(sdt.is_yes(), expected, "({}, {})", t1.bit_string(), t2.bit_string());
            if expected {
                assert!(digraphs::is_hamiltonian(t1) && digraphs::is_hamiltonian(t2));
            }
        }
    }
    // Isomorphism-class pairs at n = 5.
    let ts5 = digraphs::enumerate_tournaments(5, true).unwrap();
    let top5 = FiniteTopology::discrete(5);
    for t1 in &ts5 {
        for t2 in &ts5 {
            let pair = vec![
                System::Iterated(t1.digraph().to_relation()),
                System::Iterated(t2.digraph().to_relation()),
            ];
            let sdt = is_strongly_d_top_transitive(&pair, &top5, &fam).unwrap();
            let expected = t1.digraph().is_strongly_connected()
                && t2.digraph().is_strongly_connected();
            assert_eq!(sdt.is_yes(), expected);
        }
    }
}

/// Sequence tuples use the intersection of all step domains.
#[test]
fn sequence_tuples() {
    let fwd = rel(2, &[(0, 1)]);
    let bwd = rel(2, &[(1, 0)]);
    let alternating = RelationSequence::new(vec![], vec![fwd.clone(), bwd.clone()]).unwrap();
    let pair = vec![
        System::Sequence(alternating.clone()),
        System::Sequence(alternating),
    ];
    let top = FiniteTopology::discrete(2);
    let fam = FamilySpec::all_nonempty();
    // No node survives every step, so nothing is d-hypercyclic.
    assert!(is_d_hypercyclic(&pair, &top, &fam).unwrap().is_no());

    // A constant sequence applies the same relation once at every step,
    // so the all-pairs relation makes every node a d-hypercyclic vector.
    let constant = RelationSequence::constant(rel(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]));
    let pair = vec![
        System::Sequence(constant.clone()),
        System::Sequence(constant),
    ];
    let v = dynamics::d_hypercyclic_vectors(&pair, &top, &fam).unwrap();
    assert_eq!(v, NodeSet::full(2));

    // The constant K_2 sequence never returns a point to itself.
    let k2seq = RelationSequence::constant(rel(2, &[(0, 1), (1, 0)]));
    let pair = vec![System::Sequence(k2seq.clone()), System::Sequence(k2seq)];
    assert!(is_d_hypercyclic(&pair, &top, &fam).unwrap().is_no());
}
