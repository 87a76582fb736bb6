use std::ops::ControlFlow;

use pplab_core::digraph::{has_directed_triangle, named_digraph, Digraph};
use pplab_core::enumerate::{enumerate_digraphs, random_greedy, EnumFilter};
use pplab_core::hom::{hom_exists, verify_hom};
use pplab_core::obstructions::{find_induced_p3, path_tt_duality};
use pplab_core::rng::stream;
use pplab_core::solvers::{
    is_p4_subgraph_free, solve_c3plus_p3free, solve_c3plus_p4subfree_with, Algorithm, SolverOutcome,
};

fn agree(algo: Algorithm, n_param: usize, d: &Digraph) -> SolverOutcome {
    let out = algo.solve(d, n_param).unwrap();
    let template = algo.template(n_param).unwrap();
    assert_eq!(
        out.decision,
        hom_exists(d, &template),
        "{} disagrees with the search on {:?}",
        algo.name(),
        d.arcs()
    );
    if let Some(c) = &out.certificate {
        assert!(verify_hom(d, &template, c));
    }
    if !out.decision {
        assert!(out.reason.is_some());
    }
    out
}

fn sweep(filter: &EnumFilter, max_n: usize, mut visit: impl FnMut(&Digraph)) {
    for n in 1..=max_n {
        enumerate_digraphs(n, filter, true, None, |d| {
            visit(d);
            ControlFlow::Continue(())
        })
        .unwrap();
    }
}

fn p4_free_loopless() -> EnumFilter {
    EnumFilter {
        p4_subgraph_free: true,
        ..EnumFilter::loopless()
    }
}

#[test]
fn levels_match_search_and_duality() {
    sweep(&EnumFilter::default(), 4, |d| {
        for k in 1..=5 {
            let out = agree(Algorithm::Levels, k, d);
            let (a, b) = path_tt_duality(d, k).unwrap();
            assert_eq!((a, b), (out.decision, out.decision));
        }
    });
}

#[test]
fn p4_subgraph_free_solvers_match_search() {
    sweep(&p4_free_loopless(), 6, |d| {
        agree(Algorithm::K3P4SubgraphFree, 0, d);
        agree(Algorithm::C3ppP4SubgraphFree, 0, d);
        agree(Algorithm::C3pP4SubgraphFree, 0, d);
    });
    let with_loops = EnumFilter {
        p4_subgraph_free: true,
        ..EnumFilter::default()
    };
    sweep(&with_loops, 4, |d| {
        agree(Algorithm::C3pP4SubgraphFree, 0, d);
    });
}

#[test]
fn c3plus_p3_free_matches_search() {
    let filter = EnumFilter {
        induced_p3_free: true,
        ..EnumFilter::loopless()
    };
    let mut fallbacks = 0;
    let mut total = 0;
    sweep(&filter, 6, |d| {
        let out = agree(Algorithm::C3pP3Free, 0, d);
        total += 1;
        fallbacks += out.fallback_components;
    });
    let with_loops = EnumFilter {
        induced_p3_free: true,
        ..EnumFilter::default()
    };
    sweep(&with_loops, 4, |d| {
        agree(Algorithm::C3pP3Free, 0, d);
    });
    println!("{total} inputs, {fallbacks} components decided by the general search");
}

#[test]
fn tcn_p3_free_matches_search() {
    let loopless = EnumFilter {
        induced_p3_free: true,
        ..EnumFilter::loopless()
    };
    sweep(&loopless, 5, |d| {
        agree(Algorithm::TcnP3Free, 4, d);
        agree(Algorithm::TcnP3Free, 5, d);
    });
    let with_loops = EnumFilter {
        induced_p3_free: true,
        ..EnumFilter::default()
    };
    sweep(&with_loops, 4, |d| {
        agree(Algorithm::TcnP3Free, 4, d);
    });
}

#[test]
fn random_instances_on_eight_vertices() {
    let mut rng = stream(11, "solver-sweep");
    for i in 0..10_000 {
        let attempts = 4 + i % 40;
        let d = random_greedy(8, attempts, false, &mut rng, is_p4_subgraph_free);
        agree(Algorithm::K3P4SubgraphFree, 0, &d);
        agree(Algorithm::C3ppP4SubgraphFree, 0, &d);
        agree(Algorithm::C3pP4SubgraphFree, 0, &d);
        let d = random_greedy(8, attempts, false, &mut rng, |g| find_induced_p3(g).is_none());
        agree(Algorithm::C3pP3Free, 0, &d);
        agree(Algorithm::TcnP3Free, 4, &d);
        agree(Algorithm::TcnP3Free, 5, &d);
        let d = random_greedy(8, attempts, false, &mut rng, |_| true);
        agree(Algorithm::Levels, 1 + i % 8, &d);
    }
}

#[test]
fn extension_without_triangles() {
    let mut rng = stream(13, "solver-ladder");
    let mut yes = 0;
    for i in 0..3_000 {
        let n = 8 + i % 5;
        let d = random_greedy(n, 6 + i % 40, false, &mut rng, |g| {
            find_induced_p3(g).is_none() && !has_directed_triangle(g)
        });
        let out = agree(Algorithm::C3pP3Free, 0, &d);
        assert_eq!(out.fallback_components, 0);
        yes += out.decision as usize;
    }
    assert!(yes > 0 && yes < 3_000);
}

#[test]
fn dropped_arc_choice_does_not_matter() {
    let mut rng = stream(12, "solver-orientation");
    for i in 0..1_000 {
        let d = random_greedy(8, 6 + i % 30, false, &mut rng, is_p4_subgraph_free);
        let a = solve_c3plus_p4subfree_with(&d, true).unwrap();
        let b = solve_c3plus_p4subfree_with(&d, false).unwrap();
        assert_eq!(a.decision, b.decision);
    }
}

#[test]
fn listed_examples() {
    let c3p = named_digraph("C3plus").unwrap().into_digraph();
    assert!(solve_c3plus_p3free(&c3p).unwrap().decision);
    // a triangle with a pendant arc already contains a directed path on four vertices
    let pendant = Digraph::new(4, [(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
    assert!(!is_p4_subgraph_free(&pendant));
    assert!(Algorithm::C3pP4SubgraphFree.solve(&pendant, 0).is_err());
}
