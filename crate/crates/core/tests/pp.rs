mod common;

use common::{arb_digraph, naive_hom};
use pplab_core::digraph::{make_family, Digraph, Family};
use pplab_core::enumerate::is_isomorphic;
use pplab_core::exponential::exponential;
use pplab_core::hom::{hom_equivalent, hom_exists};
use pplab_core::pp::{compose_pp, gadget_replacement, parse_pp, pp_power, PPDefinition};
use pplab_core::rng::{stream, StreamRng};
use proptest::prelude::*;
use rand::Rng;

fn symmetric_cycle(k: usize) -> Digraph {
    Digraph::new(k, (0..k).flat_map(|i| [(i, (i + 1) % k), ((i + 1) % k, i)])).unwrap()
}

fn random_definition(rng: &mut StreamRng) -> PPDefinition {
    let dim = rng.random_range(1..=2);
    let vars = 2 * dim + rng.random_range(0..=2);
    let free = (0..2 * dim)
        .map(|i| if rng.random_bool(0.8) { i } else { rng.random_range(0..vars) })
        .collect();
    let atoms = (0..rng.random_range(1..=4))
        .map(|_| (rng.random_range(0..vars), rng.random_range(0..vars)))
        .collect();
    PPDefinition::new(dim, vars, free, atoms).unwrap()
}

fn random_digraph(n: usize, p: f64, rng: &mut StreamRng) -> Digraph {
    let arcs: Vec<_> = (0..n * n).filter(|_| rng.random_bool(p)).map(|i| (i / n, i % n)).collect();
    Digraph::new(n, arcs).unwrap()
}

#[test]
fn figure_constructions() {
    let walk3 = PPDefinition::walk(3).unwrap();
    let k5 = make_family(Family::Complete(5)).unwrap();
    assert!(is_isomorphic(&pp_power(&walk3, &symmetric_cycle(5)).unwrap(), &k5));
    let k2 = make_family(Family::Complete(2)).unwrap();
    let c6 = make_family(Family::DirectedCycle(6)).unwrap();
    assert!(is_isomorphic(&gadget_replacement(&walk3, &k2), &c6));
    let c3 = make_family(Family::DirectedCycle(3)).unwrap();
    let e = exponential(&c3, &k2).unwrap();
    assert!(is_isomorphic(&e, &c3.disjoint_union(&c6)));
}

#[test]
fn parsed_walk_matches_builder() {
    let parsed = parse_pp("def E(x, y) := exists z1, z2 . E(x, z1) & E(z1, z2) & E(z2, y)").unwrap();
    let c5 = symmetric_cycle(5);
    assert_eq!(pp_power(&parsed, &c5).unwrap(), pp_power(&PPDefinition::walk(3).unwrap(), &c5).unwrap());
}

#[test]
fn adjointness_on_samples() {
    let mut rng = stream(31, "pp-adjoint");
    let mut yes = 0;
    for _ in 0..500 {
        let def = random_definition(&mut rng);
        let (na, nb) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let a = random_digraph(na, 0.4, &mut rng);
        let b = random_digraph(nb, 0.3, &mut rng);
        let power = pp_power(&def, &a).unwrap();
        let left = hom_exists(&b, &power);
        let right = hom_exists(&gadget_replacement(&def, &b), &a);
        assert_eq!(left, right, "{def} on {:?} and {:?}", a.arcs(), b.arcs());
        yes += left as usize;
    }
    assert!(yes > 50 && yes < 450, "{yes} of 500 map");
}

#[test]
fn monotone_in_the_template() {
    let mut rng = stream(32, "pp-monotone");
    let mut checked = 0;
    while checked < 200 {
        let def = random_definition(&mut rng);
        let a = random_digraph(rng.random_range(1..=3), 0.4, &mut rng);
        let b = random_digraph(rng.random_range(1..=4), 0.5, &mut rng);
        if naive_hom(&a, &b).is_none() {
            continue;
        }
        checked += 1;
        assert!(hom_exists(&pp_power(&def, &a).unwrap(), &pp_power(&def, &b).unwrap()));
    }
}

#[test]
fn power_of_a_loop_is_a_loop() {
    let mut rng = stream(33, "pp-loop");
    let looped = Digraph::looped_vertex();
    for _ in 0..200 {
        let def = random_definition(&mut rng);
        assert!(hom_equivalent(&pp_power(&def, &looped).unwrap(), &looped));
    }
}

#[test]
fn composition_matches_iterated_powers() {
    let walk3 = PPDefinition::walk(3).unwrap();
    let c5 = symmetric_cycle(5);
    let direct = pp_power(&compose_pp(&walk3, &walk3), &c5).unwrap();
    let iterated = pp_power(&walk3, &pp_power(&walk3, &c5).unwrap()).unwrap();
    assert!(is_isomorphic(&direct, &iterated));
    let trivial = compose_pp(&PPDefinition::trivial(), &walk3);
    assert_eq!(pp_power(&trivial, &c5).unwrap(), pp_power(&walk3, &c5).unwrap());

    let mut rng = stream(34, "pp-compose");
    for _ in 0..200 {
        let outer = random_definition(&mut rng);
        let inner = random_definition(&mut rng);
        let a = random_digraph(rng.random_range(1..=3), 0.4, &mut rng);
        let c = compose_pp(&outer, &inner);
        assert_eq!(c.dim(), outer.dim() * inner.dim());
        let direct = pp_power(&c, &a).unwrap();
        let iterated = pp_power(&outer, &pp_power(&inner, &a).unwrap()).unwrap();
        // both index tuples row-major, so the digraphs agree exactly
        assert_eq!(direct, iterated, "{outer} after {inner}");
    }
}

#[test]
fn canonical_database_of_a_definition() {
    let def = parse_pp("def E(x1, x2, y1, y2) := E(x1, y2) & E(x2, y1)").unwrap();
    let db = def.canonical_database();
    assert_eq!(db.gadget.n(), 4);
    assert_eq!(db.distinguished, vec![0, 1, 2, 3]);
    assert_eq!(def.dim(), 2);
    assert!(!def.has_existentials());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trivial_definition_is_the_identity(a in arb_digraph(6, true)) {
        prop_assert_eq!(pp_power(&PPDefinition::trivial(), &a).unwrap(), a.clone());
        prop_assert_eq!(gadget_replacement(&PPDefinition::trivial(), &a), a);
    }
}
