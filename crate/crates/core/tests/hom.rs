mod common;

use std::ops::ControlFlow;

use common::{arb_digraph, arb_permutation, naive_hom};
use pplab_core::digraph::{make_family, named_digraph, Digraph, Family, MarkedDigraph, Named};
use pplab_core::enumerate::{digraph_classes, enumerate_digraphs, is_isomorphic, EnumFilter};
use pplab_core::hom::{
    classify_smooth, core, core_marked, find_hom, hom_equivalent, hom_exists, is_core, verify_hom,
    verify_induced_embedding, Consistency, HomSearch, SearchBudget, SmoothClass,
};
use proptest::prelude::*;

#[test]
fn agrees_with_exhaustive_maps() {
    let sources: Vec<Digraph> = (1..=4).flat_map(|n| digraph_classes(n, &EnumFilter::default()).unwrap()).collect();
    let targets: Vec<Digraph> = (1..=4).flat_map(|n| digraph_classes(n, &EnumFilter::default()).unwrap()).collect();
    let mut yes = 0;
    for d in &sources {
        for h in &targets {
            let expected = naive_hom(d, h).is_some();
            let levels: &[Consistency] = if h.n() <= 3 {
                &[Consistency::Arc, Consistency::ArcPlusSingleton]
            } else {
                &[Consistency::Arc]
            };
            for &consistency in levels {
                let budget = SearchBudget {
                    max_nodes: 0,
                    consistency,
                };
                let found = find_hom(d, h, budget).found();
                assert_eq!(found.is_some(), expected, "{:?} -> {:?}", d.arcs(), h.arcs());
                if let Some(m) = found {
                    assert!(verify_hom(d, h, &m));
                }
            }
            yes += expected as usize;
        }
    }
    assert!(yes > 0);
}

#[test]
fn families_map_as_expected() {
    let tt = |k| make_family(Family::TransitiveTournament(k)).unwrap();
    let cycle = |k| make_family(Family::DirectedCycle(k)).unwrap();
    let k3 = make_family(Family::Complete(3)).unwrap();
    assert!(hom_exists(&tt(3), &tt(4)));
    assert!(!hom_exists(&tt(4), &tt(3)));
    assert!(hom_exists(&cycle(6), &cycle(3)));
    assert!(!hom_exists(&cycle(4), &cycle(3)));
    assert!(hom_exists(&cycle(5), &k3));
    assert!(!hom_exists(&make_family(Family::Complete(4)).unwrap(), &k3));
    let c3plus = named_digraph("C3plus").unwrap().into_digraph();
    assert!(hom_exists(&cycle(3), &c3plus));
    assert!(!hom_exists(&tt(3), &cycle(3)));
}

#[test]
fn budget_reports_exhaustion() {
    let k4 = make_family(Family::Complete(4)).unwrap();
    let k3 = make_family(Family::Complete(3)).unwrap();
    let big = (0..6).fold(Digraph::empty(0), |acc, _| acc.disjoint_union(&k4));
    let out = find_hom(&big, &k3, SearchBudget::nodes(1));
    assert!(!out.is_found());
}

#[test]
fn injective_and_induced_modes() {
    let tt3 = make_family(Family::TransitiveTournament(3)).unwrap();
    let tc4 = make_family(Family::Tc(4)).unwrap();
    let m = HomSearch::new(&tt3, &tc4).induced(true).find().found().unwrap();
    assert!(verify_induced_embedding(&tt3, &tc4, &m));
    let p = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
    assert!(HomSearch::new(&p, &tt3).injective(true).find().is_found());
    assert!(!HomSearch::new(&p, &tt3).induced(true).find().is_found());
}

#[test]
fn cores_of_small_digraphs() {
    for n in 1..=5 {
        let filter = if n == 5 { EnumFilter::loopless() } else { EnumFilter::default() };
        for h in digraph_classes(n, &filter).unwrap() {
            let r = core(&h).unwrap();
            assert!(is_core(&r.core), "{:?}", h.arcs());
            assert_eq!(r.core, h.induced(&r.vertices));
            assert!(verify_hom(&h, &r.core, &r.retraction));
            assert!(hom_equivalent(&h, &r.core));
            for (i, &v) in r.vertices.iter().enumerate() {
                assert_eq!(r.retraction[v], i);
            }
        }
    }
}

/// Every endomorphism of a core is a bijection.
#[test]
fn core_endomorphisms_are_bijective() {
    for n in 1..=4 {
        for h in digraph_classes(n, &EnumFilter::default()).unwrap() {
            let c = core(&h).unwrap().core;
            HomSearch::new(&c, &c).for_each(|m| {
                let mut seen = vec![false; c.n()];
                m.iter().for_each(|&x| seen[x] = true);
                assert!(seen.iter().all(|&s| s));
                ControlFlow::Continue(())
            });
        }
    }
}

#[test]
fn core_of_marked_keeps_marks() {
    let gu = match named_digraph("GU").unwrap() {
        Named::Marked(m) => m,
        Named::Plain(_) => unreachable!(),
    };
    let c = core_marked(&gu, 10).unwrap();
    for v in 0..gu.base().n() {
        let image = c.vertices[c.retraction[v]];
        assert!(!gu.is_marked(v) || gu.is_marked(image));
    }
    assert!(verify_hom(gu.base(), c.core.base(), &c.retraction));
    // a mark on one end stops the symmetric pair folding onto a loopless vertex
    let pair = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
    assert_eq!(core_marked(&MarkedDigraph::new(pair, [0]).unwrap(), 10).unwrap().core.base().n(), 2);
}

#[test]
fn smooth_classification() {
    let cycle = |k| make_family(Family::DirectedCycle(k)).unwrap();
    assert_eq!(classify_smooth(&cycle(4), 10).unwrap(), SmoothClass::PolyTime);
    assert_eq!(
        classify_smooth(&cycle(2).disjoint_union(&cycle(3)), 10).unwrap(),
        SmoothClass::PolyTime
    );
    let c3plus = named_digraph("C3plus").unwrap().into_digraph();
    assert_eq!(classify_smooth(&c3plus, 10).unwrap(), SmoothClass::NpComplete);
    let tt3 = make_family(Family::TransitiveTournament(3)).unwrap();
    assert_eq!(classify_smooth(&tt3, 10).unwrap(), SmoothClass::NotSmooth);
}

#[test]
fn every_labeled_three_vertex_digraph_maps_to_its_core() {
    enumerate_digraphs(3, &EnumFilter::default(), false, None, |d| {
        let c = core(d).unwrap().core;
        let again = core(&c).unwrap().core;
        assert!(is_isomorphic(&c, &again));
        ControlFlow::Continue(())
    })
    .unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relabeling_the_target_preserves_answers(
        d in arb_digraph(6, false),
        (h, perm) in arb_digraph(5, true).prop_flat_map(|h| {
            let n = h.n();
            (Just(h), arb_permutation(n))
        })
    ) {
        let r = h.relabel(&perm);
        let a = hom_exists(&d, &h);
        prop_assert_eq!(a, hom_exists(&d, &r));
        prop_assert_eq!(a, naive_hom(&d, &h).is_some());
    }
}
