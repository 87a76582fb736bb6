use alloc::vec;
use alloc::vec::Vec;

use super::SolverOutcome;
use crate::digraph::MarkedDigraph;
use crate::error::{Error, Result};
use crate::hom::verify_hom;
use crate::polymorphism::{verify_polymorphism, FunctionTable, IdentitySpec};

/// Pairwise candidate relations over a template of at most 64 vertices:
/// `rel[(x * n + y) * m + a]` holds the values `b` allowed for `y` when `x`
/// takes `a`.
struct Store {
    n: usize,
    m: usize,
    rel: Vec<u64>,
}

impl Store {
    fn row(&self, x: usize, y: usize, a: usize) -> u64 {
        self.rel[(x * self.n + y) * self.m + a]
    }

    fn block(&self, x: usize, y: usize) -> &[u64] {
        let i = (x * self.n + y) * self.m;
        &self.rel[i..i + self.m]
    }

    fn set_block(&mut self, x: usize, y: usize, rows: &[u64]) {
        let i = (x * self.n + y) * self.m;
        self.rel[i..i + self.m].copy_from_slice(rows);
    }

    /// Replaces `R(x, y)` and keeps `R(y, x)` its transpose.
    fn store(&mut self, x: usize, y: usize, rows: &[u64]) {
        self.set_block(x, y, rows);
        if x != y {
            let mut t = vec![0u64; self.m];
            for (a, &r) in rows.iter().enumerate() {
                for (b, tb) in t.iter_mut().enumerate() {
                    if r >> b & 1 == 1 {
                        *tb |= 1 << a;
                    }
                }
            }
            self.set_block(y, x, &t);
        }
    }
}

/// Decides `instance → template` for a template with a majority
/// polymorphism by enforcing (2,3)-consistency on pairwise candidate
/// relations, then reads off a homomorphism value by value.
///
/// `majority` must be a verified majority polymorphism of the template,
/// marks included.
pub fn majority_consistency_solve(
    instance: &MarkedDigraph,
    template: &MarkedDigraph,
    majority: &FunctionTable,
) -> Result<SolverOutcome> {
    if verify_polymorphism(template, majority, &IdentitySpec::majority()).is_err() {
        return Err(Error::Precondition("the table is not a majority polymorphism of the template".into()));
    }
    let m = template.base().n();
    if m > 64 {
        return Err(Error::CapExceeded {
            needed: m as u128,
            cap: 64,
        });
    }
    let n = instance.base().n();
    let d = instance.base();
    let t = template.base();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let marked: u64 = (0..m).filter(|&a| template.is_marked(a)).fold(0, |acc, a| acc | 1 << a);
    let out_mask: Vec<u64> = (0..m)
        .map(|a| t.out_neighbors(a).iter().fold(0, |acc, &b| acc | 1u64 << b))
        .collect();
    let in_mask: Vec<u64> = (0..m)
        .map(|a| t.in_neighbors(a).iter().fold(0, |acc, &b| acc | 1u64 << b))
        .collect();
    let domain = |x: usize| -> u64 {
        let mut dom = if instance.is_marked(x) { marked } else { full };
        if d.has_loop_at(x) {
            dom &= (0..m).filter(|&a| t.has_loop_at(a)).fold(0, |acc, a| acc | 1 << a);
        }
        dom
    };
    let mut st = Store {
        n,
        m,
        rel: vec![0; n * n * m],
    };
    let mut rows = vec![0u64; m];
    for x in 0..n {
        let dx = domain(x);
        for y in x..n {
            let dy = domain(y);
            for (a, r) in rows.iter_mut().enumerate() {
                *r = 0;
                if dx >> a & 1 == 0 {
                    continue;
                }
                if x == y {
                    *r = 1 << a;
                    continue;
                }
                let mut allowed = dy;
                if d.has_arc(x, y) {
                    allowed &= out_mask[a];
                }
                if d.has_arc(y, x) {
                    allowed &= in_mask[a];
                }
                *r = allowed;
            }
            st.store(x, y, &rows);
        }
    }
    // path consistency: R(x, y) ⊆ R(x, z) ∘ R(z, y)
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for y in x..n {
                let mut cur: Vec<u64> = st.block(x, y).to_vec();
                let mut shrunk = false;
                for z in 0..n {
                    for (a, r) in cur.iter_mut().enumerate() {
                        if *r == 0 {
                            continue;
                        }
                        let mut reach = 0u64;
                        let mut mid = st.row(x, z, a);
                        while mid != 0 {
                            let c = mid.trailing_zeros() as usize;
                            mid &= mid - 1;
                            reach |= st.row(z, y, c);
                        }
                        let next = *r & reach;
                        if next != *r {
                            *r = next;
                            shrunk = true;
                        }
                    }
                }
                if shrunk {
                    if x == y && cur.iter().all(|&r| r == 0) {
                        return Ok(SolverOutcome::no(alloc::format!("vertex {x} has no consistent value")));
                    }
                    st.store(x, y, &cur);
                    changed = true;
                }
            }
        }
    }
    if (0..n).any(|x| st.block(x, x).iter().all(|&r| r == 0)) {
        return Ok(SolverOutcome::no("empty candidate list"));
    }
    let mut map: Vec<usize> = Vec::with_capacity(n);
    for y in 0..n {
        let mut cand = st.block(y, y).iter().fold(0u64, |acc, &r| acc | r);
        for (x, &a) in map.iter().enumerate() {
            cand &= st.row(x, y, a);
        }
        if cand == 0 {
            return Err(Error::Invalid("consistent candidate relations did not extend".into()));
        }
        map.push(cand.trailing_zeros() as usize);
    }
    if !verify_hom(instance, template, &map) {
        return Err(Error::Invalid("extracted map is not a homomorphism".into()));
    }
    Ok(SolverOutcome::yes(Some(map)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{named_digraph, Digraph, Named};
    use crate::polymorphism::searched_majority_gu;

    fn gu() -> MarkedDigraph {
        match named_digraph("GU").unwrap() {
            Named::Marked(m) => m,
            Named::Plain(_) => unreachable!(),
        }
    }

    #[test]
    fn trivial_instances() {
        let f = searched_majority_gu();
        let one = MarkedDigraph::all_marked(Digraph::empty(1));
        assert!(majority_consistency_solve(&one, &gu(), &f).unwrap().decision);
        let r = majority_consistency_solve(&gu(), &gu(), &f).unwrap();
        assert!(r.decision);
        assert!(verify_hom(&gu(), &gu(), r.certificate.as_ref().unwrap()));
    }

    #[test]
    fn rejects_non_majority() {
        let proj = FunctionTable::projection(7, 3, 0);
        let one = MarkedDigraph::all_marked(Digraph::empty(1));
        assert!(matches!(
            majority_consistency_solve(&one, &gu(), &proj),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn looped_instance_fails() {
        let f = searched_majority_gu();
        let lp = MarkedDigraph::new(Digraph::looped_vertex(), []).unwrap();
        assert!(!majority_consistency_solve(&lp, &gu(), &f).unwrap().decision);
    }
}
