//! Polymorphisms satisfying height-one and projection identities, found by
//! searching homomorphisms from an indicator digraph.

mod gu;
mod levels;

pub use gu::{conservative_majority_gu, searched_majority_gu};
pub use levels::{
    minimal_hard_level, slice, slice_report, HardLevelOptions, HardLevelReport, LevelOutcome,
    SliceReport,
};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::digraph::{Digraph, Structure};
use crate::error::{Error, Result};
use crate::hom::{HomOutcome, HomSearch, SearchBudget};
use crate::pp::{tuple_of, UnionFind};

/// Default bound on `|H|^n` for indicator constructions.
pub const DEFAULT_INDICATOR_CAP: usize = 2_000_000;

/// Identities over variables `0..vars` for an operation of the given arity.
///
/// `height_one` holds pairs `(σ, ρ)` read as
/// `f(x_σ(0), …, x_σ(n-1)) = f(x_ρ(0), …, x_ρ(n-1))`; `projections` holds
/// pairs `(σ, k)` read as `f(x_σ(0), …) = x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdentitySpec {
    pub arity: usize,
    pub vars: usize,
    pub height_one: Vec<(Vec<usize>, Vec<usize>)>,
    pub projections: Vec<(Vec<usize>, usize)>,
    pub idempotent: bool,
    pub conservative: bool,
}

impl IdentitySpec {
    /// `f(x1, x2, x3, x1) = f(x2, x1, x2, x3)`, without idempotence.
    pub fn siggers() -> Self {
        IdentitySpec {
            arity: 4,
            vars: 3,
            height_one: vec![(vec![0, 1, 2, 0], vec![1, 0, 1, 2])],
            projections: Vec::new(),
            idempotent: false,
            conservative: false,
        }
    }

    /// `f(x, x, y) = f(x, y, x) = f(y, x, x) = x`.
    pub fn majority() -> Self {
        IdentitySpec {
            arity: 3,
            vars: 2,
            height_one: Vec::new(),
            projections: vec![(vec![0, 0, 1], 0), (vec![0, 1, 0], 0), (vec![1, 0, 0], 0)],
            idempotent: false,
            conservative: false,
        }
    }

    pub fn conservative(mut self, yes: bool) -> Self {
        self.conservative = yes;
        self
    }

    pub fn idempotent(mut self, yes: bool) -> Self {
        self.idempotent = yes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.arity == 0 {
            return Err(Error::SizeTooSmall { min: 1, got: 0 });
        }
        let bad_map = |m: &Vec<usize>| m.len() != self.arity || m.iter().any(|&i| i >= self.vars);
        if self.height_one.iter().any(|(s, r)| bad_map(s) || bad_map(r))
            || self.projections.iter().any(|(s, k)| bad_map(s) || *k >= self.vars)
        {
            return Err(Error::Invalid(String::from(
                "identity pattern has the wrong length or an out-of-range variable",
            )));
        }
        Ok(())
    }
}

/// An explicit `n`-ary operation on `0..domain`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    pub domain: usize,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl FunctionTable {
    pub fn new(domain: usize, arity: usize, table: Vec<usize>) -> Result<Self> {
        let expected = (domain as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if table.len() as u128 != expected {
            return Err(Error::Invalid(format!(
                "table for arity {arity} over {domain} elements needs {expected} entries, got {}",
                table.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= domain) {
            return Err(Error::Invalid(format!("table value {v} is outside the domain")));
        }
        Ok(FunctionTable {
            domain,
            arity,
            table,
        })
    }

    pub fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.domain + a)
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        self.table[self.index(args)]
    }

    /// The `k`-th projection.
    pub fn projection(domain: usize, arity: usize, k: usize) -> Self {
        let total = domain.pow(arity as u32);
        let mut args = vec![0; arity];
        let table = (0..total)
            .map(|i| {
                tuple_of(i, domain, &mut args);
                args[k]
            })
            .collect();
        FunctionTable {
            domain,
            arity,
            table,
        }
    }
}

/// The quotient of `H^n` by the identities, with the value restrictions the
/// identities, idempotence, conservativity and marks impose on each class.
#[derive(Clone, Debug)]
pub struct Indicator {
    pub graph: Digraph,
    /// Class of each tuple of `H^n`, tuples indexed row-major.
    pub class_of: Vec<usize>,
    /// Allowed values per class; `None` means unrestricted.
    pub allowed: Vec<Option<BitSet>>,
}

fn checked_tuples(h: usize, n: usize, cap: usize) -> Result<usize> {
    crate::pp::checked_power(h, n, cap)
}

pub fn build_indicator<'a>(h: impl Into<Structure<'a>>, spec: &IdentitySpec, cap: usize) -> Result<Indicator> {
    spec.validate()?;
    let h = h.into();
    let (size, n) = (h.graph.n(), spec.arity);
    let total = checked_tuples(size, n, cap)?;
    checked_tuples(size, spec.vars, cap)?;
    let assignments = size.pow(spec.vars as u32);
    let index = |args: &mut dyn Iterator<Item = usize>| args.fold(0usize, |acc, a| acc * size + a);

    let mut uf = UnionFind::new(total);
    let mut a = vec![0usize; spec.vars];
    for (sigma, rho) in &spec.height_one {
        for ai in 0..assignments {
            tuple_of(ai, size, &mut a);
            let l = index(&mut sigma.iter().map(|&i| a[i]));
            let r = index(&mut rho.iter().map(|&i| a[i]));
            uf.union(l, r);
        }
    }
    let (class_of, classes) = uf.compact();

    let mut allowed: Vec<Option<BitSet>> = vec![None; classes];
    let mut restrict = |c: usize, set: &BitSet| match &mut allowed[c] {
        Some(s) => s.intersect_with(set),
        slot @ None => *slot = Some(set.clone()),
    };
    for (sigma, k) in &spec.projections {
        for ai in 0..assignments {
            tuple_of(ai, size, &mut a);
            let t = index(&mut sigma.iter().map(|&i| a[i]));
            restrict(class_of[t], &BitSet::from_iter_with_capacity(size, [a[*k]]));
        }
    }
    if spec.idempotent {
        for x in 0..size {
            let t = index(&mut core::iter::repeat_n(x, n));
            restrict(class_of[t], &BitSet::from_iter_with_capacity(size, [x]));
        }
    }
    let mut args = vec![0usize; n];
    if spec.conservative {
        for t in 0..total {
            tuple_of(t, size, &mut args);
            restrict(class_of[t], &BitSet::from_iter_with_capacity(size, args.iter().copied()));
        }
    }
    if let Some(marks) = h.marks {
        for t in 0..total {
            tuple_of(t, size, &mut args);
            if args.iter().all(|&x| marks.contains(x)) {
                restrict(class_of[t], marks);
            }
        }
    }

    let arcs = h.graph.arcs();
    let mut arc_list = Vec::new();
    if !arcs.is_empty() {
        let mut pick = vec![0usize; n];
        'odometer: loop {
            let s = index(&mut pick.iter().map(|&p| arcs[p].0));
            let t = index(&mut pick.iter().map(|&p| arcs[p].1));
            arc_list.push((class_of[s], class_of[t]));
            let mut i = n;
            loop {
                if i == 0 {
                    break 'odometer;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < arcs.len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
    Ok(Indicator {
        graph: Digraph::from_arcs_unchecked(classes, arc_list),
        class_of,
        allowed,
    })
}

/// Searches a polymorphism of `h` satisfying `spec`.
///
/// `Ok(None)` means none exists; an exhausted node budget is an error.
pub fn find_polymorphism<'a>(
    h: impl Into<Structure<'a>>,
    spec: &IdentitySpec,
    budget: SearchBudget,
) -> Result<Option<FunctionTable>> {
    find_polymorphism_with_cap(h, spec, budget, DEFAULT_INDICATOR_CAP)
}

pub fn find_polymorphism_with_cap<'a>(
    h: impl Into<Structure<'a>>,
    spec: &IdentitySpec,
    budget: SearchBudget,
    cap: usize,
) -> Result<Option<FunctionTable>> {
    let h = h.into();
    let ind = build_indicator(h, spec, cap)?;
    // Marks are already folded into the class restrictions.
    let mut search = HomSearch::new(&ind.graph, h.graph).budget(budget);
    for (c, allowed) in ind.allowed.iter().enumerate() {
        if let Some(set) = allowed {
            search = search.restrict(c, set.clone());
        }
    }
    match search.find() {
        HomOutcome::Found(map) => {
            let table = ind.class_of.iter().map(|&c| map[c]).collect();
            Ok(Some(FunctionTable {
                domain: h.graph.n(),
                arity: spec.arity,
                table,
            }))
        }
        HomOutcome::NotFound => Ok(None),
        HomOutcome::BudgetExhausted => Err(Error::BudgetExhausted),
    }
}

/// The first failed condition found by [`verify_polymorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    Arc { from: Vec<usize>, to: Vec<usize> },
    HeightOne { pattern: usize, assignment: Vec<usize> },
    Projection { pattern: usize, assignment: Vec<usize> },
    Idempotent(usize),
    Conservative(Vec<usize>),
    Mark(Vec<usize>),
}

/// Checks every condition exhaustively: all arc tuples of `H^n`, every
/// identity under every assignment, and the flags of `spec`.
pub fn verify_polymorphism<'a>(
    h: impl Into<Structure<'a>>,
    f: &FunctionTable,
    spec: &IdentitySpec,
) -> core::result::Result<(), Violation> {
    let h = h.into();
    let size = h.graph.n();
    let n = f.arity;
    if f.domain != size || n != spec.arity || f.table.len() != size.pow(n as u32) {
        return Err(Violation::Shape(format!(
            "table of arity {} over {} elements does not fit arity {} over {}",
            f.arity, f.domain, spec.arity, size
        )));
    }
    let arcs = h.graph.arcs();
    if !arcs.is_empty() {
        let mut pick = vec![0usize; n];
        let mut from = vec![0usize; n];
        let mut to = vec![0usize; n];
        'odometer: loop {
            for (i, &p) in pick.iter().enumerate() {
                from[i] = arcs[p].0;
                to[i] = arcs[p].1;
            }
            if !h.graph.has_arc(f.eval(&from), f.eval(&to)) {
                return Err(Violation::Arc { from, to });
            }
            let mut i = n;
            loop {
                if i == 0 {
                    break 'odometer;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < arcs.len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
    let assignments = size.pow(spec.vars as u32);
    let mut a = vec![0usize; spec.vars];
    let mut l = vec![0usize; n];
    let mut r = vec![0usize; n];
    for (p, (sigma, rho)) in spec.height_one.iter().enumerate() {
        for ai in 0..assignments {
            tuple_of(ai, size, &mut a);
            sigma.iter().zip(l.iter_mut()).for_each(|(&i, s)| *s = a[i]);
            rho.iter().zip(r.iter_mut()).for_each(|(&i, s)| *s = a[i]);
            if f.eval(&l) != f.eval(&r) {
                return Err(Violation::HeightOne {
                    pattern: p,
                    assignment: a.clone(),
                });
            }
        }
    }
    for (p, (sigma, k)) in spec.projections.iter().enumerate() {
        for ai in 0..assignments {
            tuple_of(ai, size, &mut a);
            sigma.iter().zip(l.iter_mut()).for_each(|(&i, s)| *s = a[i]);
            if f.eval(&l) != a[*k] {
                return Err(Violation::Projection {
                    pattern: p,
                    assignment: a.clone(),
                });
            }
        }
    }
    if spec.idempotent {
        for x in 0..size {
            if f.eval(&vec![x; n]) != x {
                return Err(Violation::Idempotent(x));
            }
        }
    }
    let mut args = vec![0usize; n];
    for t in 0..f.table.len() {
        tuple_of(t, size, &mut args);
        let v = f.table[t];
        if spec.conservative && !args.contains(&v) {
            return Err(Violation::Conservative(args));
        }
        if let Some(m) = h.marks {
            if args.iter().all(|&x| m.contains(x)) && !m.contains(v) {
                return Err(Violation::Mark(args));
            }
        }
    }
    Ok(())
}
