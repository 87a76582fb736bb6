//! Polynomial-time decision procedures for restricted inputs, each producing
//! a certificate where the construction gives one.

mod c3plus;
mod majority;

pub use c3plus::{gu_to_c3plus, solve_c3plus_p3free, solve_c3plus_p4subfree, solve_c3plus_p4subfree_with};
pub use majority::majority_consistency_solve;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::digraph::{
    contains_subgraph, directed_path, has_directed_triangle, make_family, named_digraph, topological_levels,
    weak_components, Digraph, Family, SubgraphMode,
};
use crate::error::{Error, Result};
use crate::hom::{find_hom, verify_hom, HomOutcome, SearchBudget};
use crate::obstructions::{tcn_min_obstructions, Verdict};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverOutcome {
    pub decision: bool,
    pub certificate: Option<Vec<usize>>,
    pub reason: Option<String>,
    /// Components decided by the general homomorphism search instead of
    /// the special-case procedure.
    pub fallback_components: usize,
}

impl SolverOutcome {
    pub(crate) fn yes(certificate: Option<Vec<usize>>) -> Self {
        SolverOutcome {
            decision: true,
            certificate,
            ..Self::default()
        }
    }

    pub(crate) fn no(reason: impl Into<String>) -> Self {
        SolverOutcome {
            decision: false,
            reason: Some(reason.into()),
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Levels,
    K3P4SubgraphFree,
    C3ppP4SubgraphFree,
    C3pP4SubgraphFree,
    C3pP3Free,
    TcnP3Free,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Levels,
        Algorithm::K3P4SubgraphFree,
        Algorithm::C3ppP4SubgraphFree,
        Algorithm::C3pP4SubgraphFree,
        Algorithm::C3pP3Free,
        Algorithm::TcnP3Free,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Levels => "levels",
            Algorithm::K3P4SubgraphFree => "k3p4",
            Algorithm::C3ppP4SubgraphFree => "c3pp-p4",
            Algorithm::C3pP4SubgraphFree => "c3p-p4",
            Algorithm::C3pP3Free => "c3p-p3",
            Algorithm::TcnP3Free => "tcn-p3",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == name)
    }

    /// The template the algorithm decides homomorphisms into; `n` is the
    /// transitive tournament size for [`Algorithm::Levels`] and the index of
    /// `TC_n` for [`Algorithm::TcnP3Free`].
    pub fn template(&self, n: usize) -> Result<Digraph> {
        Ok(match self {
            Algorithm::Levels => make_family(Family::TransitiveTournament(n))?,
            Algorithm::K3P4SubgraphFree => make_family(Family::Complete(3))?,
            Algorithm::C3ppP4SubgraphFree => named_digraph("C3plusplus")?.into_digraph(),
            Algorithm::C3pP4SubgraphFree | Algorithm::C3pP3Free => named_digraph("C3plus")?.into_digraph(),
            Algorithm::TcnP3Free => make_family(Family::Tc(n))?,
        })
    }

    /// Whether `d` satisfies the input restriction.
    pub fn accepts_input(&self, d: &Digraph) -> bool {
        match self {
            Algorithm::Levels => true,
            Algorithm::K3P4SubgraphFree | Algorithm::C3ppP4SubgraphFree => !d.has_loop() && is_p4_subgraph_free(d),
            Algorithm::C3pP4SubgraphFree => is_p4_subgraph_free(d),
            Algorithm::C3pP3Free | Algorithm::TcnP3Free => crate::obstructions::find_induced_p3(d).is_none(),
        }
    }

    pub fn solve(&self, d: &Digraph, n: usize) -> Result<SolverOutcome> {
        match self {
            Algorithm::Levels => Ok(solve_via_levels(d, n)),
            Algorithm::K3P4SubgraphFree => solve_k3_p4subfree(d),
            Algorithm::C3ppP4SubgraphFree => solve_c3pp_p4subfree(d),
            Algorithm::C3pP4SubgraphFree => solve_c3plus_p4subfree(d),
            Algorithm::C3pP3Free => solve_c3plus_p3free(d),
            Algorithm::TcnP3Free => solve_tcn_p3free(d, n),
        }
    }
}

pub fn is_p4_subgraph_free(d: &Digraph) -> bool {
    contains_subgraph(d, &directed_path(4), SubgraphMode::Subgraph).is_none()
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(format!("input is not {what}")))
    }
}

fn check_certificate(d: &Digraph, t: &Digraph, map: Vec<usize>) -> Result<SolverOutcome> {
    if verify_hom(d, t, &map) {
        Ok(SolverOutcome::yes(Some(map)))
    } else {
        Err(Error::Invalid("constructed map is not a homomorphism".into()))
    }
}

/// `D → TT_k` by longest walks: vertex `v` goes to one less than the number
/// of vertices on a longest directed walk ending at `v`.
pub fn solve_via_levels(d: &Digraph, k: usize) -> SolverOutcome {
    match topological_levels(d) {
        None => SolverOutcome::no("directed cycle"),
        Some(levels) => match levels.iter().copied().max() {
            Some(w) if w > k => SolverOutcome::no(format!("directed walk on {w} vertices")),
            _ => SolverOutcome::yes(Some(levels.iter().map(|l| l - 1).collect())),
        },
    }
}

/// 3-colouring of a loopless digraph with no directed path on four vertices.
pub fn solve_k3_p4subfree(d: &Digraph) -> Result<SolverOutcome> {
    require(!d.has_loop(), "loopless")?;
    require(is_p4_subgraph_free(d), "free of directed paths on four vertices")?;
    let oriented = d.orient_symmetric_pairs(true);
    let mut map = vec![0usize; d.n()];
    for comp in weak_components(&oriented) {
        let sub = oriented.induced(&comp);
        if has_directed_triangle(&sub) {
            // the component is exactly the triangle
            for (i, &v) in comp.iter().enumerate() {
                map[v] = i;
            }
            continue;
        }
        let levels = topological_levels(&sub).ok_or_else(|| Error::Invalid("cycle in triangle-free component".into()))?;
        for (&v, l) in comp.iter().zip(levels) {
            map[v] = l - 1;
        }
    }
    check_certificate(d, &make_family(Family::Complete(3))?, map)
}

/// Homomorphism to `C3plusplus` for loopless inputs with no directed path on
/// four vertices; the only obstruction is a symmetric triangle.
pub fn solve_c3pp_p4subfree(d: &Digraph) -> Result<SolverOutcome> {
    require(!d.has_loop(), "loopless")?;
    require(is_p4_subgraph_free(d), "free of directed paths on four vertices")?;
    let k3 = make_family(Family::Complete(3))?;
    if let Some(m) = contains_subgraph(d, &k3, SubgraphMode::Subgraph) {
        return Ok(SolverOutcome::no(format!("symmetric triangle on {m:?}")));
    }
    let target = named_digraph("C3plusplus")?.into_digraph();
    let mut map = vec![usize::MAX; d.n()];
    for comp in weak_components(d) {
        let sub = d.induced(&comp);
        if has_directed_triangle(&sub) {
            let local = match find_hom(&sub, &target, SearchBudget::UNLIMITED) {
                HomOutcome::Found(m) => m,
                _ => return Err(Error::Invalid("three-vertex component without a homomorphism".into())),
            };
            for (&v, x) in comp.iter().zip(local) {
                map[v] = x;
            }
            continue;
        }
        let local = c3pp_component(&sub);
        for (&v, x) in comp.iter().zip(local) {
            map[v] = x;
        }
    }
    check_certificate(d, &target, map)
}

/// Strips leaves, levels the rest into `TT_3` after dropping one arc of each
/// symmetric pair, then puts the leaves back next to their neighbours.
fn c3pp_component(d: &Digraph) -> Vec<usize> {
    let n = d.n();
    let target = named_digraph("C3plusplus").expect("built-in").into_digraph();
    let neighbours: Vec<Vec<usize>> = (0..n).map(|v| d.neighbors(v)).collect();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = neighbours.iter().map(Vec::len).collect();
    let mut removed: Vec<usize> = Vec::new();
    let mut alive_count = n;
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(x) = stack.pop() {
        if !alive[x] || degree[x] != 1 || alive_count == 1 {
            continue;
        }
        alive[x] = false;
        alive_count -= 1;
        removed.push(x);
        for &y in &neighbours[x] {
            if alive[y] {
                degree[y] -= 1;
                if degree[y] == 1 {
                    stack.push(y);
                }
            }
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let kept = d.induced(&rest).orient_symmetric_pairs(true);
    let levels = topological_levels(&kept).unwrap_or_else(|| vec![1; rest.len()]);
    let mut map = vec![usize::MAX; n];
    for (&v, l) in rest.iter().zip(levels) {
        // level l is vertex l of the figure, stored as l - 1
        map[v] = l - 1;
    }
    for &x in removed.iter().rev() {
        let y = *neighbours[x].iter().find(|&&y| map[y] != usize::MAX).expect("leaf keeps a neighbour");
        let fy = map[y];
        map[x] = (0..3)
            .find(|&c| (!d.has_arc(x, y) || target.has_arc(c, fy)) && (!d.has_arc(y, x) || target.has_arc(fy, c)))
            .expect("every vertex of the target lies on a symmetric pair");
    }
    map
}

/// Decision by the finite obstruction set of `TC_n`; no certificate.
pub fn solve_tcn_p3free(d: &Digraph, n: usize) -> Result<SolverOutcome> {
    let report = tcn_min_obstructions(d, n)?;
    Ok(match report.verdict {
        Verdict::Maps => SolverOutcome::yes(None),
        Verdict::Obstructed { name, map, .. } => SolverOutcome::no(format!("{name} at {map:?}")),
    })
}
