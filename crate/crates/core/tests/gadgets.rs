use std::collections::VecDeque;

use pplab_core::bitset::BitSet;
use pplab_core::digraph::{contains_subgraph, make_family, make_path, named_digraph, Digraph, Family, SubgraphMode};
use pplab_core::gadgets::{
    brute_force_assignment, brute_force_1in3, claw, reduce_to_c3plus, reduce_to_c3pp, reduce_to_tcn,
    structural_audit, AuditProfile, OneInThreeInstance, Reduction, ReductionOptions, VariableMode,
};
use pplab_core::hom::{find_hom, verify_hom, HomSearch, SearchBudget};
use pplab_core::rng::stream;

fn c3plus() -> Digraph {
    named_digraph("C3plus").unwrap().into_digraph()
}

fn c3pp() -> Digraph {
    named_digraph("C3plusplus").unwrap().into_digraph()
}

fn tc(n: usize) -> Digraph {
    make_family(Family::Tc(n)).unwrap()
}

/// All instances over exactly `0..V` with at most three clauses and six
/// variables, each clause a sorted triple, clauses non-decreasing.
fn small_instances() -> Vec<OneInThreeInstance> {
    let mut triples = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                triples.push([a, b, c]);
            }
        }
    }
    let mut out = Vec::new();
    let mut push = |cl: Vec<[usize; 3]>| {
        let vars = cl.iter().flatten().max().unwrap() + 1;
        if let Ok(i) = OneInThreeInstance::new(vars, cl) {
            out.push(i);
        }
    };
    for i in 0..triples.len() {
        push(vec![triples[i]]);
        for j in i..triples.len() {
            push(vec![triples[i], triples[j]]);
            for k in j..triples.len() {
                push(vec![triples[i], triples[j], triples[k]]);
            }
        }
    }
    out
}

/// Target digraph and the vertex that marks a variable as true.
fn targets() -> Vec<(&'static str, Digraph, usize)> {
    vec![("C3plus", c3plus(), 1), ("TC4", tc(4), 0), ("TC5", tc(5), 0), ("C3plusplus", c3pp(), 1)]
}

fn build(name: &str, inst: &OneInThreeInstance, opts: ReductionOptions) -> Reduction {
    match name {
        "C3plus" => reduce_to_c3plus(inst, opts),
        "TC4" => reduce_to_tcn(inst, 4, opts),
        "TC5" => reduce_to_tcn(inst, 5, opts),
        "C3plusplus" => reduce_to_c3pp(inst, opts),
        _ => unreachable!(),
    }
    .unwrap()
}

/// Checks the reduction against the oracle and reads an assignment back from
/// any homomorphism found.
fn check(inst: &OneInThreeInstance, opts: ReductionOptions) {
    let sat = brute_force_1in3(inst).unwrap();
    for (name, target, truth) in targets() {
        let r = build(name, inst, opts);
        let found = find_hom(&r.digraph, &target, SearchBudget::UNLIMITED).found();
        assert_eq!(found.is_some(), sat, "{name} {opts:?} on {:?}", inst.clauses());
        if let Some(h) = found {
            assert!(verify_hom(&r.digraph, &target, &h));
            let assignment: Vec<bool> = r.variable_sinks.iter().map(|s| h[s[0]] == truth).collect();
            assert!(inst.satisfied_by(&assignment), "{name}: read-back fails on {:?}", inst.clauses());
        }
    }
}

#[test]
fn small_instances_match_the_oracle() {
    let all = small_instances();
    println!("{} instances", all.len());
    for inst in &all {
        check(inst, ReductionOptions::default());
        check(inst, ReductionOptions::new(VariableMode::Identify, 0).unwrap());
    }
}

#[test]
fn spacing_preserves_answers() {
    for inst in small_instances().iter().step_by(7) {
        for d in 1..=3 {
            check(inst, ReductionOptions::new(VariableMode::Cycle, d).unwrap());
        }
    }
}

#[test]
fn random_instances_match_the_oracle() {
    let mut rng = stream(21, "gadget-sweep");
    let mut sat = 0;
    for k in 0..1_000 {
        let inst = OneInThreeInstance::random(3 + k % 8, 1 + k % 6, &mut rng).unwrap();
        sat += brute_force_1in3(&inst).unwrap() as usize;
        let opts = match k % 3 {
            0 => ReductionOptions::default(),
            1 => ReductionOptions::new(VariableMode::Identify, 0).unwrap(),
            _ => ReductionOptions::new(VariableMode::Cycle, 1 + k % 3).unwrap(),
        };
        check(&inst, opts);
    }
    assert!(sat > 100 && sat < 1_000, "{sat} satisfiable");
}

fn others(target: &Digraph, truth: usize) -> BitSet {
    BitSet::from_iter_with_capacity(target.n(), (0..target.n()).filter(|&a| a != truth))
}

/// No homomorphism splits the sinks of a variable across the marking vertex,
/// and none puts other than exactly one clause vertex on it.
fn classes_are_forced(r: &Reduction, target: &Digraph, truth: usize) {
    let g = &r.digraph;
    for sinks in &r.variable_sinks {
        for &s in sinks {
            for &t in sinks {
                if s != t {
                    let split = HomSearch::new(g, target).pin(s, truth).restrict(t, others(target, truth));
                    assert!(!split.find().is_found());
                }
            }
        }
    }
    for tops in &r.clause_tops {
        let mut none = HomSearch::new(g, target);
        for &t in tops {
            none = none.restrict(t, others(target, truth));
        }
        assert!(!none.find().is_found());
        for i in 0..3 {
            for j in i + 1..3 {
                let two = HomSearch::new(g, target).pin(tops[i], truth).pin(tops[j], truth);
                assert!(!two.find().is_found());
            }
        }
    }
}

#[test]
fn equivalence_classes_hold_in_every_homomorphism() {
    let single = OneInThreeInstance::new(3, vec![[0, 1, 2]]).unwrap();
    let shared = OneInThreeInstance::new(5, vec![[0, 1, 2], [0, 3, 4]]).unwrap();
    let triple = OneInThreeInstance::new(6, vec![[0, 1, 2], [0, 3, 4], [0, 1, 5]]).unwrap();
    for (name, target, truth) in targets() {
        for inst in [&single, &shared, &triple] {
            for d in 0..=1 {
                let r = build(name, inst, ReductionOptions::new(VariableMode::Cycle, d).unwrap());
                classes_are_forced(&r, &target, truth);
            }
        }
    }
}

#[test]
fn clause_gadget_figure_labels() {
    let one = OneInThreeInstance::new(3, vec![[0, 1, 2]]).unwrap();
    let r = reduce_to_c3plus(&one, ReductionOptions::default()).unwrap();
    let gadget = r.digraph.induced(&(0..9).collect::<Vec<_>>());
    // tops, middles, bottoms; figure labels minus one
    let c3p = [0, 0, 1, 1, 1, 2, 0, 2, 1];
    assert!(verify_hom(&gadget, &c3plus(), &c3p));
    for n in 4..=6 {
        let tcn = [0, n - 1, n - 1, n - 1, 1, 1, 0, 2, n - 1];
        assert!(verify_hom(&gadget, &tc(n), &tcn));
    }
    let r = reduce_to_c3pp(&one, ReductionOptions::default()).unwrap();
    let gadget = r.digraph.induced(&(0..9).collect::<Vec<_>>());
    let pp = [0, 1, 0, 1, 0, 1, 2, 1, 0];
    assert!(verify_hom(&gadget, &c3pp(), &pp));
}

#[test]
fn audits_pass_on_random_outputs() {
    let mut rng = stream(22, "gadget-audit");
    for k in 0..100 {
        let inst = OneInThreeInstance::random(4 + k % 6, 1 + k % 5, &mut rng).unwrap();
        let opts = ReductionOptions::new(VariableMode::Cycle, k % 3).unwrap();
        let a = reduce_to_c3plus(&inst, opts).unwrap();
        let rep = structural_audit(&a.digraph, AuditProfile::C3plusP4Free);
        assert!(rep.passed(), "{:?}", rep.checks);
        let rev = a.digraph.reverse();
        for out in 0..=3 {
            let f = claw(out);
            let free = |g: &Digraph| contains_subgraph(g, &f, SubgraphMode::Subgraph).is_none();
            assert!(free(&a.digraph) || free(&rev));
        }
        let t = reduce_to_tcn(&inst, 4, opts).unwrap();
        assert!(structural_audit(&t.digraph, AuditProfile::TcnP4Free).passed());
        let p = reduce_to_c3pp(&inst, opts).unwrap();
        assert!(structural_audit(&p.digraph, AuditProfile::C3ppP3Free).passed());
    }
}

#[test]
fn occurrence_vertices_carry_a_sink_claw() {
    let inst = OneInThreeInstance::new(5, vec![[0, 1, 2], [0, 3, 4]]).unwrap();
    let r = reduce_to_c3plus(&inst, ReductionOptions::default()).unwrap();
    assert!(contains_subgraph(&r.digraph, &claw(0), SubgraphMode::Subgraph).is_some());
}

fn underlying_distances(d: &Digraph, from: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; d.n()];
    let mut queue = VecDeque::new();
    for &s in from {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for v in d.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[test]
fn spacers_push_clause_gadgets_apart() {
    let inst = OneInThreeInstance::new(5, vec![[0, 1, 2], [0, 3, 4]]).unwrap();
    for d in 0..=3 {
        let r = reduce_to_c3plus(&inst, ReductionOptions::new(VariableMode::Cycle, d).unwrap()).unwrap();
        let g = &r.digraph;
        let dist = underlying_distances(g, &(0..9).collect::<Vec<_>>());
        assert_eq!((9..18).map(|v| dist[v]).min(), Some(4 * d + 2));
        // directed paths on three vertices stay inside clause gadgets
        for &(u, v) in g.arcs() {
            for &w in g.out_neighbors(v) {
                assert!(u < 18 && v < 18 && w < 18 && u / 9 == w / 9);
            }
        }
    }
}

#[test]
fn identify_mode_avoids_one_alternating_path() {
    let forward_first = make_path(&"<><><>".parse().unwrap());
    let other = make_path(&"><><><".parse().unwrap());
    let mut rng = stream(23, "gadget-identify");
    let mut saw_other = false;
    for k in 0..60 {
        let inst = OneInThreeInstance::random(4 + k % 5, 2 + k % 4, &mut rng).unwrap();
        let r = reduce_to_c3plus(&inst, ReductionOptions::new(VariableMode::Identify, 0).unwrap()).unwrap();
        assert!(contains_subgraph(&r.digraph, &forward_first, SubgraphMode::Subgraph).is_none());
        saw_other |= contains_subgraph(&r.digraph, &other, SubgraphMode::Subgraph).is_some();
    }
    assert!(saw_other);
}

#[test]
fn oracle_assignment_satisfies() {
    for inst in small_instances().iter().step_by(13) {
        if let Some(a) = brute_force_assignment(inst).unwrap() {
            assert!(inst.satisfied_by(&a));
        }
    }
}

