//! Categorical products, exponential digraphs and restricted CSP solving.

use alloc::vec;
use alloc::vec::Vec;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::hom::{find_hom, HomOutcome, SearchBudget};
use crate::pp::{checked_power, tuple_of, PPDefinition};

pub const DEFAULT_EXPONENTIAL_CAP: usize = 200_000;

/// Product on pairs `(a, b)`, stored at index `a * |B| + b`.
pub fn product(a: &Digraph, b: &Digraph) -> Digraph {
    let m = b.n();
    let mut arcs = Vec::with_capacity(a.arc_count() * b.arc_count());
    for &(a1, a2) in a.arcs() {
        for &(b1, b2) in b.arcs() {
            arcs.push((a1 * m + b1, a2 * m + b2));
        }
    }
    Digraph::from_arcs_unchecked(a.n() * m, arcs)
}

/// All functions `B → A` as vertices, function `f` stored at the row-major
/// index of `(f(0), …, f(|B|-1))`; `f → g` when every arc `(b1, b2)` of `B`
/// gives an arc `(f(b1), g(b2))` of `A`.
pub fn exponential(a: &Digraph, b: &Digraph) -> Result<Digraph> {
    exponential_with_cap(a, b, DEFAULT_EXPONENTIAL_CAP)
}

pub fn exponential_with_cap(a: &Digraph, b: &Digraph, cap: usize) -> Result<Digraph> {
    let (na, m) = (a.n(), b.n());
    let total = checked_power(na, m, cap)?;
    if total == 0 {
        return Ok(Digraph::empty(0));
    }
    let mut arcs = Vec::new();
    let mut f = vec![0usize; m];
    let mut allowed: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut pick = vec![0usize; m];
    for fi in 0..total {
        tuple_of(fi, na, &mut f);
        let mut empty = false;
        for (b2, slot) in allowed.iter_mut().enumerate() {
            slot.clear();
            let preds = b.in_neighbors(b2);
            if preds.is_empty() {
                slot.extend(0..na);
                continue;
            }
            slot.extend(
                a.out_neighbors(f[preds[0]])
                    .iter()
                    .copied()
                    .filter(|&x| preds[1..].iter().all(|&b1| a.has_arc(f[b1], x))),
            );
            if slot.is_empty() {
                empty = true;
                break;
            }
        }
        if empty {
            continue;
        }
        // odometer over the allowed value lists
        pick.iter_mut().for_each(|p| *p = 0);
        'odometer: loop {
            let gi = (0..m).fold(0usize, |acc, k| acc * na + allowed[k][pick[k]]);
            arcs.push((fi, gi));
            let mut k = m;
            loop {
                if k == 0 {
                    break 'odometer;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < allowed[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }
    Ok(Digraph::from_arcs_unchecked(total, arcs))
}

/// The dimension-`|B|` definition `⋀ E(x_i, y_j)` over the arcs `(i, j)` of
/// `B`, whose pp-power of any `A` is the exponential `A^B`.
pub fn exponential_pp_definition(b: &Digraph) -> Result<PPDefinition> {
    let d = b.n();
    if d == 0 {
        return Err(Error::SizeTooSmall { min: 1, got: 0 });
    }
    PPDefinition::new(
        d,
        2 * d,
        (0..2 * d).collect(),
        b.arcs().iter().map(|&(i, j)| (i, d + j)).collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RcspRoute {
    Direct,
    ViaExponential,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RcspOutcome {
    /// A homomorphism from the instance to the domain template.
    Yes(Vec<usize>),
    No,
    /// The instance does not map to the restriction.
    PromiseViolation,
}

/// Decides `C → A` for an instance promised to map to `B`.
///
/// The exponential route searches `C → A^B` and turns a solution `h` into
/// `c ↦ h(c)(g(c))` for a witness `g: C → B`.
pub fn rcsp_solve(a: &Digraph, b: &Digraph, c: &Digraph, route: RcspRoute) -> Result<RcspOutcome> {
    rcsp_solve_with(a, b, c, route, SearchBudget::UNLIMITED, DEFAULT_EXPONENTIAL_CAP)
}

pub fn rcsp_solve_with(
    a: &Digraph,
    b: &Digraph,
    c: &Digraph,
    route: RcspRoute,
    budget: SearchBudget,
    cap: usize,
) -> Result<RcspOutcome> {
    let g = match find_hom(c, b, budget) {
        HomOutcome::Found(g) => g,
        HomOutcome::NotFound => return Ok(RcspOutcome::PromiseViolation),
        HomOutcome::BudgetExhausted => return Err(Error::BudgetExhausted),
    };
    let outcome = match route {
        RcspRoute::Direct => find_hom(c, a, budget),
        RcspRoute::ViaExponential => {
            let exp = exponential_with_cap(a, b, cap)?;
            match find_hom(c, &exp, budget) {
                HomOutcome::Found(h) => {
                    let mut f = vec![0usize; b.n()];
                    let map = h
                        .iter()
                        .zip(&g)
                        .map(|(&hi, &gi)| {
                            tuple_of(hi, a.n(), &mut f);
                            f[gi]
                        })
                        .collect();
                    HomOutcome::Found(map)
                }
                other => other,
            }
        }
    };
    match outcome {
        HomOutcome::Found(m) => Ok(RcspOutcome::Yes(m)),
        HomOutcome::NotFound => Ok(RcspOutcome::No),
        HomOutcome::BudgetExhausted => Err(Error::BudgetExhausted),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{make_family, Family};
    use crate::hom::verify_hom;

    fn fam(f: Family) -> Digraph {
        make_family(f).unwrap()
    }

    #[test]
    fn small_products() {
        let tt2 = fam(Family::TransitiveTournament(2));
        assert_eq!(product(&tt2, &tt2).arc_count(), 1);
        let c3 = fam(Family::DirectedCycle(3));
        assert_eq!(product(&c3, &Digraph::looped_vertex()), c3);
    }

    #[test]
    fn exponential_basics() {
        let c3 = fam(Family::DirectedCycle(3));
        assert_eq!(exponential(&c3, &Digraph::looped_vertex()).unwrap(), c3);
        let tt2 = fam(Family::TransitiveTournament(2));
        let e = exponential(&tt2, &tt2).unwrap();
        // identity function (0, 1) sits at index 1
        assert!(e.has_loop_at(1));
        let k2 = fam(Family::Complete(2));
        let e = exponential(&c3, &k2).unwrap();
        assert_eq!((e.n(), e.arc_count()), (9, 9));
    }

    #[test]
    fn exponential_definition_for_k2() {
        let k2 = fam(Family::Complete(2));
        let d = exponential_pp_definition(&k2).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.atoms(), &[(0, 3), (1, 2)]);
        assert!(exponential_pp_definition(&Digraph::empty(0)).is_err());
    }

    #[test]
    fn routes_agree() {
        let k3 = fam(Family::Complete(3));
        let lp = Digraph::looped_vertex();
        for route in [RcspRoute::Direct, RcspRoute::ViaExponential] {
            match rcsp_solve(&k3, &lp, &k3, route).unwrap() {
                RcspOutcome::Yes(m) => assert!(verify_hom(&k3, &k3, &m)),
                other => panic!("{other:?}"),
            }
        }
        let tt2 = fam(Family::TransitiveTournament(2));
        let c3 = fam(Family::DirectedCycle(3));
        assert_eq!(
            rcsp_solve(&k3, &tt2, &c3, RcspRoute::Direct).unwrap(),
            RcspOutcome::PromiseViolation
        );
    }
}
