use alloc::vec;
use alloc::vec::Vec;

use super::{find_polymorphism_with_cap, verify_polymorphism, FunctionTable, IdentitySpec};
use crate::digraph::{make_family, Digraph, Family};
use crate::error::{Error, Result};
use crate::exponential::product;
use crate::hom::{core_with_cap, Consistency, SearchBudget};
use crate::pp::tuple_of;

/// Restriction of an operation on `H × TT_k` to level `i`, projected to `H`.
///
/// Vertex `(h, l)` of the product is `h * k + l`, as built by
/// [`product`]`(H, TT_k)`.
pub fn slice(f: &FunctionTable, h_size: usize, k: usize, i: usize) -> Result<FunctionTable> {
    if k == 0 || f.domain != h_size * k {
        return Err(Error::Precondition(alloc::format!(
            "domain of size {} is not a product of {} and {} levels",
            f.domain,
            h_size,
            k
        )));
    }
    if i >= k {
        return Err(Error::Invalid(alloc::format!("level {i} is outside 0..{k}")));
    }
    let n = f.arity;
    let total = h_size.pow(n as u32);
    let mut hs = vec![0usize; n];
    let mut lifted = vec![0usize; n];
    let table = (0..total)
        .map(|t| {
            tuple_of(t, h_size, &mut hs);
            hs.iter().zip(lifted.iter_mut()).for_each(|(&h, l)| *l = h * k + i);
            f.eval(&lifted) / k
        })
        .collect();
    Ok(FunctionTable {
        domain: h_size,
        arity: n,
        table,
    })
}

/// What the level slices of an operation on `H × TT_k` look like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceReport {
    pub slices: Vec<FunctionTable>,
    /// Pairs `i < j` of levels with identical slices.
    pub equal_pairs: Vec<(usize, usize)>,
    /// Every slice satisfies the given identities.
    pub identities_hold: bool,
    /// For `i < j`, arcs `h → h'` of `H^n` give arcs `f_i(h) → f_j(h')`.
    pub cross_level_arcs_hold: bool,
    /// Every slice that repeats at a later level is a polymorphism of `H`
    /// with the given identities.
    pub repeated_slices_are_polymorphisms: bool,
}

pub fn slice_report(h: &Digraph, k: usize, f: &FunctionTable, spec: &IdentitySpec) -> Result<SliceReport> {
    let slices = (0..k)
        .map(|i| slice(f, h.n(), k, i))
        .collect::<Result<Vec<_>>>()?;
    let identities_only = IdentitySpec {
        conservative: false,
        ..spec.clone()
    };
    // identities without arc preservation: check on the edgeless digraph
    let bare = Digraph::empty(h.n());
    let identities_hold = slices
        .iter()
        .all(|s| verify_polymorphism(&bare, s, &identities_only).is_ok());
    let mut equal_pairs = Vec::new();
    let mut cross_level_arcs_hold = true;
    let n = f.arity;
    let arcs = h.arcs();
    for i in 0..k {
        for j in i + 1..k {
            if slices[i] == slices[j] {
                equal_pairs.push((i, j));
            }
            if arcs.is_empty() {
                continue;
            }
            let mut pick = vec![0usize; n];
            let mut from = vec![0usize; n];
            let mut to = vec![0usize; n];
            'odometer: loop {
                for (c, &p) in pick.iter().enumerate() {
                    from[c] = arcs[p].0;
                    to[c] = arcs[p].1;
                }
                if !h.has_arc(slices[i].eval(&from), slices[j].eval(&to)) {
                    cross_level_arcs_hold = false;
                    break 'odometer;
                }
                let mut c = n;
                loop {
                    if c == 0 {
                        break 'odometer;
                    }
                    c -= 1;
                    pick[c] += 1;
                    if pick[c] < arcs.len() {
                        break;
                    }
                    pick[c] = 0;
                }
            }
        }
    }
    let repeated_slices_are_polymorphisms = equal_pairs
        .iter()
        .all(|&(i, _)| verify_polymorphism(h, &slices[i], &identities_only).is_ok());
    Ok(SliceReport {
        slices,
        equal_pairs,
        identities_hold,
        cross_level_arcs_hold,
        repeated_slices_are_polymorphisms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HardLevelOptions {
    /// Largest product handed to the core computation; larger products are
    /// searched as they are.
    pub core_cap: usize,
    pub indicator_cap: usize,
    pub budget: SearchBudget,
    /// After finding the first level without a Siggers operation, also search
    /// the next level.
    pub check_next: bool,
}

impl Default for HardLevelOptions {
    fn default() -> Self {
        HardLevelOptions {
            core_cap: 12,
            indicator_cap: super::DEFAULT_INDICATOR_CAP,
            budget: SearchBudget {
                max_nodes: 0,
                consistency: Consistency::ArcPlusSingleton,
            },
            check_next: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelOutcome {
    SiggersPresent,
    SiggersAbsent,
    CapExceeded,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardLevelReport {
    /// Outcome per level `N`, in increasing order.
    pub levels: Vec<(usize, LevelOutcome)>,
    /// Smallest level whose product has no Siggers operation.
    pub hard_level: Option<usize>,
    /// Vertex count of the template searched at each level.
    pub searched_sizes: Vec<usize>,
}

impl HardLevelReport {
    /// The level at which the search stopped without an answer, if any.
    pub fn incomplete_at(&self) -> Option<usize> {
        self.levels
            .iter()
            .find(|(_, o)| matches!(o, LevelOutcome::CapExceeded | LevelOutcome::BudgetExhausted))
            .map(|&(n, _)| n)
    }
}

fn level_outcome(h: &Digraph, level: usize, opts: &HardLevelOptions) -> (LevelOutcome, usize) {
    let tt = make_family(Family::TransitiveTournament(level)).expect("level is positive");
    let p = product(h, &tt);
    // Siggers operations transfer along homomorphic equivalence, so the core suffices.
    let template = match core_with_cap(&p, opts.core_cap) {
        Ok(c) => c.core,
        Err(_) => p,
    };
    let size = template.n();
    let outcome = match find_polymorphism_with_cap(
        &template,
        &IdentitySpec::siggers(),
        opts.budget,
        opts.indicator_cap,
    ) {
        Ok(Some(_)) => LevelOutcome::SiggersPresent,
        Ok(None) => LevelOutcome::SiggersAbsent,
        Err(Error::CapExceeded { .. }) => LevelOutcome::CapExceeded,
        Err(_) => LevelOutcome::BudgetExhausted,
    };
    (outcome, size)
}

/// Smallest `N ≤ n_max` with no Siggers operation on `H × TT_N`.
pub fn minimal_hard_level(h: &Digraph, n_max: usize, opts: &HardLevelOptions) -> HardLevelReport {
    let mut report = HardLevelReport {
        levels: Vec::new(),
        hard_level: None,
        searched_sizes: Vec::new(),
    };
    for level in 1..=n_max {
        let (outcome, size) = level_outcome(h, level, opts);
        report.levels.push((level, outcome));
        report.searched_sizes.push(size);
        match outcome {
            LevelOutcome::SiggersPresent => continue,
            LevelOutcome::SiggersAbsent => {
                report.hard_level = Some(level);
                if opts.check_next {
                    let (next, size) = level_outcome(h, level + 1, opts);
                    report.levels.push((level + 1, next));
                    report.searched_sizes.push(size);
                }
                break;
            }
            LevelOutcome::CapExceeded | LevelOutcome::BudgetExhausted => break,
        }
    }
    report
}
