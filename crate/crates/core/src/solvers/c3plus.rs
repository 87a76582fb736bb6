use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{is_p4_subgraph_free, majority_consistency_solve, require, SolverOutcome};
use crate::digraph::{has_directed_triangle, named_digraph, weak_components, Digraph, MarkedDigraph, Named};
use crate::enumerate::is_isomorphic;
use crate::error::{Error, Result};
use crate::hom::{find_hom, verify_hom, HomOutcome, SearchBudget};
use crate::obstructions::find_induced_p3;
use crate::polymorphism::searched_majority_gu;

fn c3plus() -> Digraph {
    named_digraph("C3plus").expect("built-in").into_digraph()
}

fn gu() -> MarkedDigraph {
    match named_digraph("GU").expect("built-in") {
        Named::Marked(m) => m,
        Named::Plain(_) => unreachable!("GU carries marks"),
    }
}

/// `C3plus` with its symmetric pair marked.
fn c3plus_marked() -> MarkedDigraph {
    MarkedDigraph::new(c3plus(), [1, 2]).expect("in range")
}

/// A homomorphism from `(G, U)` to `C3plus` sending `U` into the symmetric
/// pair.
pub fn gu_to_c3plus() -> Vec<usize> {
    find_hom(&gu(), &c3plus_marked(), SearchBudget::UNLIMITED)
        .found()
        .expect("(G, U) maps to C3plus")
}

fn scatter(map: &mut [usize], comp: &[usize], local: &[usize]) {
    for (&v, &x) in comp.iter().zip(local) {
        map[v] = x;
    }
}

/// `D → C3plus` for inputs with no directed path on four vertices.
pub fn solve_c3plus_p4subfree(d: &Digraph) -> Result<SolverOutcome> {
    solve_c3plus_p4subfree_with(d, true)
}

/// As [`solve_c3plus_p4subfree`], choosing which arc of each symmetric pair
/// is dropped before the reduction.
pub fn solve_c3plus_p4subfree_with(d: &Digraph, keep_forward: bool) -> Result<SolverOutcome> {
    require(is_p4_subgraph_free(d), "free of directed paths on four vertices")?;
    if let Some(v) = d.vertices().find(|&v| d.has_loop_at(v)) {
        return Ok(SolverOutcome::no(format!("loop at {v}")));
    }
    let target = c3plus();
    let gu = gu();
    let majority = searched_majority_gu();
    let back = gu_to_c3plus();
    let c3 = crate::digraph::make_family(crate::digraph::Family::DirectedCycle(3))?;
    let mut map = vec![0usize; d.n()];
    for comp in weak_components(d) {
        let sub = d.induced(&comp);
        if has_directed_triangle(&sub) {
            if !(is_isomorphic(&sub, &c3) || is_isomorphic(&sub, &target)) {
                return Ok(SolverOutcome::no(format!(
                    "component {comp:?} has a directed triangle but is neither C3 nor C3plus"
                )));
            }
            let local = find_hom(&sub, &target, SearchBudget::UNLIMITED)
                .found()
                .ok_or_else(|| Error::Invalid("triangle component without a homomorphism".into()))?;
            scatter(&mut map, &comp, &local);
            continue;
        }
        let marks: Vec<usize> = sub.vertices().filter(|&v| sub.on_symmetric_pair(v)).collect();
        let instance = MarkedDigraph::new(sub.orient_symmetric_pairs(keep_forward), marks)?;
        let outcome = majority_consistency_solve(&instance, &gu, &majority)?;
        if !outcome.decision {
            return Ok(SolverOutcome::no(format!("component {comp:?} has no homomorphism to (G, U)")));
        }
        let local: Vec<usize> = outcome
            .certificate
            .expect("yes outcomes carry a map")
            .iter()
            .map(|&g| back[g])
            .collect();
        scatter(&mut map, &comp, &local);
    }
    if verify_hom(d, &target, &map) {
        Ok(SolverOutcome::yes(Some(map)))
    } else {
        Err(Error::Invalid("constructed map is not a homomorphism".into()))
    }
}

/// Figure label (1, 2 or 3) of the next vertex `v`, by the first case that
/// applies given the labels placed so far.
fn ladder(d: &Digraph, label: &[u8], v: usize) -> u8 {
    let placed_out = |l: u8| d.out_neighbors(v).iter().any(|&x| x != v && label[x] == l);
    let placed_in = |l: u8| d.in_neighbors(v).iter().any(|&x| x != v && label[x] == l);
    let symmetric = d.on_symmetric_pair(v);
    if placed_in(1) || placed_out(2) {
        3
    } else if placed_out(1) || placed_in(3) {
        2
    } else if placed_in(2) {
        if symmetric {
            3
        } else if d.out_neighbors(v).iter().any(|&x| x != v) {
            1
        } else {
            3
        }
    } else if symmetric {
        2
    } else if d.in_neighbors(v).iter().any(|&x| x != v) {
        1
    } else {
        2
    }
}

/// Runs the extension from `seed ↦ 2`, returning labels when every vertex
/// gets one consistently.
fn extend_from(d: &Digraph, target: &Digraph, seed: usize) -> Option<Vec<u8>> {
    let n = d.n();
    let mut label = vec![0u8; n];
    label[seed] = 2;
    let mut placed = 1;
    while placed < n {
        let v = (0..n).find(|&v| {
            label[v] == 0
                && d.out_neighbors(v)
                    .iter()
                    .chain(d.in_neighbors(v))
                    .any(|&x| label[x] != 0)
        })?;
        let l = ladder(d, &label, v);
        let ok = d
            .out_neighbors(v)
            .iter()
            .all(|&x| label[x] == 0 || target.has_arc(l as usize - 1, label[x] as usize - 1))
            && d
                .in_neighbors(v)
                .iter()
                .all(|&x| label[x] == 0 || target.has_arc(label[x] as usize - 1, l as usize - 1));
        if !ok {
            return None;
        }
        label[v] = l;
        placed += 1;
    }
    Some(label)
}

/// `D → C3plus` for induced-`P3`-free inputs by deterministic extension from
/// each possible vertex placed on figure label 2.
///
/// Components that contain a directed triangle are decided by the general
/// homomorphism search and counted in the outcome.
pub fn solve_c3plus_p3free(d: &Digraph) -> Result<SolverOutcome> {
    if let Some([x, y, z]) = find_induced_p3(d) {
        return Err(Error::Precondition(format!(
            "input contains an induced directed path {x} -> {y} -> {z}"
        )));
    }
    if let Some(v) = d.vertices().find(|&v| d.has_loop_at(v)) {
        return Ok(SolverOutcome::no(format!("loop at {v}")));
    }
    let target = c3plus();
    let mut map = vec![0usize; d.n()];
    let mut fallbacks = 0;
    for comp in weak_components(d) {
        let sub = d.induced(&comp);
        if has_directed_triangle(&sub) {
            fallbacks += 1;
            log::info!("component {comp:?} contains a directed triangle; using the general search");
            match find_hom(&sub, &target, SearchBudget::UNLIMITED) {
                HomOutcome::Found(local) => scatter(&mut map, &comp, &local),
                HomOutcome::NotFound => {
                    let mut out = SolverOutcome::no(format!("component {comp:?} does not map"));
                    out.fallback_components = fallbacks;
                    return Ok(out);
                }
                HomOutcome::BudgetExhausted => return Err(Error::BudgetExhausted),
            }
            continue;
        }
        match sub.vertices().find_map(|seed| extend_from(&sub, &target, seed)) {
            Some(labels) => {
                let local: Vec<usize> = labels.iter().map(|&l| l as usize - 1).collect();
                scatter(&mut map, &comp, &local);
            }
            None => {
                let mut out = SolverOutcome::no(format!("no extension succeeds on component {comp:?}"));
                out.fallback_components = fallbacks;
                return Ok(out);
            }
        }
    }
    if !verify_hom(d, &target, &map) {
        return Err(Error::Invalid("constructed map is not a homomorphism".into()));
    }
    let mut out = SolverOutcome::yes(Some(map));
    out.fallback_components = fallbacks;
    Ok(out)
}
