//! Obstruction sets: the path/transitive-tournament duality, `Forb`
//! membership, the finite obstruction characterizations for the templates
//! `TC_n` on induced-`P3`-free inputs, and a harness that searches for
//! counterexamples to those characterizations.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::Rng;

use crate::digraph::{
    contains_subgraph, directed_path, longest_directed_walk, make_family, named_digraph, weak_components, Digraph,
    Family, SubgraphMode, WalkBound,
};
use crate::enumerate::{digraph_classes, enumerate_digraphs, EnumFilter, MAX_CANONICAL};
use crate::error::{Error, Result};
use crate::hom::{hom_exists, verify_induced_embedding};
use crate::rng::StreamRng;

/// `(D → TT_k, every directed walk of D has at most k vertices)`.
pub fn path_tt_duality(d: &Digraph, k: usize) -> Result<(bool, bool)> {
    let tt = make_family(Family::TransitiveTournament(k))?;
    let walk_ok = matches!(longest_directed_walk(d), WalkBound::Finite(w) if w <= k);
    Ok((hom_exists(d, &tt), walk_ok))
}

/// The directed path on `k + 1` vertices, the obstruction dual to `TT_k`.
pub fn tt_dual_path(k: usize) -> Digraph {
    directed_path(k + 1)
}

/// No member of `family` maps homomorphically to `d`.
pub fn in_forb(d: &Digraph, family: &[Digraph]) -> bool {
    family.iter().all(|f| !hom_exists(f, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Characterization {
    /// `D → TC_4` for induced-`P3`-free `D` via `TT_4`, `T4a`, `T4b` and the
    /// five-vertex tournaments.
    Tc4,
    /// `D → TC_n` for induced-`P3`-free `D` via `T4a`, `T4b`, `RT5`, `T5c`,
    /// `TT_n` and `TC_{n+1}`.
    Tcn(usize),
}

impl Characterization {
    pub fn template(&self) -> Digraph {
        let n = match *self {
            Characterization::Tc4 => 4,
            Characterization::Tcn(n) => n,
        };
        make_family(Family::Tc(n)).expect("n is at least 4")
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Characterization::Tcn(n) if n < 4 => Err(Error::SizeTooSmall { min: 4, got: n }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Maps,
    /// `map` is an injective, induced embedding of `witness` into the subject.
    Obstructed {
        name: String,
        witness: Digraph,
        map: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub subject: Digraph,
    pub verdict: Verdict,
    pub characterization: Characterization,
}

impl ObstructionReport {
    pub fn maps(&self) -> bool {
        self.verdict == Verdict::Maps
    }
}

/// An induced directed path on three vertices, as `(x, y, z)` with arcs
/// `x → y → z` and `x`, `z` non-adjacent.
pub fn find_induced_p3(d: &Digraph) -> Option<[usize; 3]> {
    for y in d.vertices() {
        if d.has_loop_at(y) {
            continue;
        }
        for &x in d.in_neighbors(y) {
            for &z in d.out_neighbors(y) {
                if x == y || z == y || x == z {
                    continue;
                }
                if d.has_loop_at(x) || d.has_loop_at(z) || d.adjacent(x, z) {
                    continue;
                }
                if d.has_arc(y, x) || d.has_arc(z, y) {
                    continue;
                }
                return Some([x, y, z]);
            }
        }
    }
    None
}

fn require_p3_free(d: &Digraph) -> Result<()> {
    match find_induced_p3(d) {
        Some([x, y, z]) => Err(Error::Precondition(format!(
            "input contains an induced directed path {x} -> {y} -> {z}"
        ))),
        None => Ok(()),
    }
}

/// Loops and symmetric pairs, reported as embeddings of the looped vertex
/// and of `K2`.
fn orientation_obstruction(d: &Digraph) -> Option<Verdict> {
    if let Some(v) = d.vertices().find(|&v| d.has_loop_at(v)) {
        return Some(Verdict::Obstructed {
            name: "loop".into(),
            witness: Digraph::looped_vertex(),
            map: vec![v],
        });
    }
    d.symmetric_pairs().first().map(|&(u, v)| Verdict::Obstructed {
        name: "symmetric pair".into(),
        witness: make_family(Family::Complete(2)).expect("positive"),
        map: vec![u, v],
    })
}

fn induced_witness(d: &Digraph, name: &str, f: Digraph) -> Option<Verdict> {
    contains_subgraph(d, &f, SubgraphMode::Induced).map(|map| Verdict::Obstructed {
        name: name.into(),
        witness: f,
        map,
    })
}

/// Vertices of a set of `k` pairwise adjacent vertices, ascending, if any.
fn find_clique(d: &Digraph, k: usize) -> Option<Vec<usize>> {
    fn grow(d: &Digraph, k: usize, chosen: &mut Vec<usize>, candidates: &[usize]) -> bool {
        if chosen.len() == k {
            return true;
        }
        if chosen.len() + candidates.len() < k {
            return false;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let rest: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| d.adjacent(v, w))
                .collect();
            chosen.push(v);
            if grow(d, k, chosen, &rest) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let all: Vec<usize> = d.vertices().collect();
    let mut chosen = Vec::new();
    grow(d, k, &mut chosen, &all).then_some(chosen)
}

fn named(name: &str) -> Digraph {
    named_digraph(name).expect("built-in name").into_digraph()
}

/// The obstruction list in reporting order.
pub fn obstruction_list(c: Characterization) -> Result<Vec<(String, Digraph)>> {
    c.validate()?;
    Ok(match c {
        Characterization::Tc4 => vec![
            ("TT4".into(), make_family(Family::TransitiveTournament(4))?),
            ("T4a".into(), named("T4a")),
            ("T4b".into(), named("T4b")),
        ],
        Characterization::Tcn(n) => vec![
            ("T4a".into(), named("T4a")),
            ("T4b".into(), named("T4b")),
            ("RT5".into(), named("RT5")),
            ("T5c".into(), named("T5c")),
            (format!("TT{n}"), make_family(Family::TransitiveTournament(n))?),
            (format!("TC{}", n + 1), make_family(Family::Tc(n + 1))?),
        ],
    })
}

/// Decides `D → TC_n` for an induced-`P3`-free `D` by looking for the
/// obstructions of the characterization, reporting the first one found.
pub fn characterize(d: &Digraph, c: Characterization) -> Result<ObstructionReport> {
    require_p3_free(d)?;
    let list = obstruction_list(c)?;
    let report = |verdict| ObstructionReport {
        subject: d.clone(),
        verdict,
        characterization: c,
    };
    if let Some(v) = orientation_obstruction(d) {
        return Ok(report(v));
    }
    for (name, f) in list {
        if let Some(v) = induced_witness(d, &name, f) {
            return Ok(report(v));
        }
    }
    if c == Characterization::Tc4 {
        if let Some(vs) = find_clique(d, 5) {
            let t = d.induced(&vs);
            return Ok(report(Verdict::Obstructed {
                name: "tournament on five vertices".into(),
                witness: t,
                map: vs,
            }));
        }
    }
    Ok(report(Verdict::Maps))
}

pub fn tc4_characterization(d: &Digraph) -> Result<ObstructionReport> {
    characterize(d, Characterization::Tc4)
}

pub fn tcn_min_obstructions(d: &Digraph, n: usize) -> Result<ObstructionReport> {
    characterize(d, Characterization::Tcn(n))
}

/// Whether an obstructed verdict carries a genuine induced embedding.
pub fn witness_is_valid(report: &ObstructionReport) -> bool {
    match &report.verdict {
        Verdict::Maps => true,
        Verdict::Obstructed { witness, map, .. } => verify_induced_embedding(witness, &report.subject, map),
    }
}

/// Tournaments on at most `max_size` vertices, one per isomorphism class,
/// with no embedding into `TC_n`; ordered by size, then canonical key.
pub fn compute_fn(n: usize, max_size: usize) -> Result<Vec<Digraph>> {
    if n < 4 {
        return Err(Error::SizeTooSmall { min: 4, got: n });
    }
    if max_size > n + 1 {
        return Err(Error::Precondition(format!(
            "tournaments on more than {} vertices are not part of the set for n = {n}",
            n + 1
        )));
    }
    if max_size > MAX_CANONICAL {
        return Err(Error::CapExceeded {
            needed: max_size as u128,
            cap: MAX_CANONICAL,
        });
    }
    let tc = make_family(Family::Tc(n))?;
    let mut out = Vec::new();
    for size in 1..=max_size {
        for t in digraph_classes(size, &EnumFilter::tournaments())? {
            if contains_subgraph(&tc, &t, SubgraphMode::Induced).is_none() {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Every directed triangle of a loopless digraph, as `(a, b, c)` with
/// `a → b → c → a` and `a` the smallest vertex.
pub fn directed_triangles(d: &Digraph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in d.vertices() {
        for &b in d.out_neighbors(a) {
            if b <= a {
                continue;
            }
            for &c in d.out_neighbors(b) {
                if c > a && c != b && d.has_arc(c, a) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn triangle_arcs(t: &[usize; 3]) -> [(usize, usize); 3] {
    [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
}

/// Two directed triangles sharing no arc.
pub fn arc_disjoint_triangle_pair(d: &Digraph) -> Option<([usize; 3], [usize; 3])> {
    let ts = directed_triangles(d);
    for (i, s) in ts.iter().enumerate() {
        let sa = triangle_arcs(s);
        for t in &ts[i + 1..] {
            if triangle_arcs(t).iter().all(|a| !sa.contains(a)) {
                return Some((*s, *t));
            }
        }
    }
    None
}

/// A tournament on at most `max_n` vertices that is induced-`{T4a, T4b}`-free
/// and has two arc-disjoint directed triangles, but no five-vertex
/// subtournament with two arc-disjoint directed triangles.
pub fn two_triangle_counterexample(max_n: usize) -> Result<Option<Digraph>> {
    let t4a = named("T4a");
    let t4b = named("T4b");
    for n in 5..=max_n {
        for t in digraph_classes(n, &EnumFilter::tournaments())? {
            if contains_subgraph(&t, &t4a, SubgraphMode::Induced).is_some()
                || contains_subgraph(&t, &t4b, SubgraphMode::Induced).is_some()
                || arc_disjoint_triangle_pair(&t).is_none()
            {
                continue;
            }
            if !five_subsets(n).any(|s| arc_disjoint_triangle_pair(&t.induced(&s)).is_some()) {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

fn five_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() == 5)
        .map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// A digraph on which a characterization and the homomorphism search
/// disagree, or whose reported witness is not an induced copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub report: ObstructionReport,
    pub hom_exists: bool,
}

/// Runs the characterization on one induced-`P3`-free input and compares it
/// with the homomorphism search.
pub fn check_characterization(d: &Digraph, c: Characterization) -> Result<Option<Disagreement>> {
    let report = characterize(d, c)?;
    let hom = hom_exists(d, &c.template());
    if report.maps() == hom && witness_is_valid(&report) {
        Ok(None)
    } else {
        Ok(Some(Disagreement { report, hom_exists: hom }))
    }
}

/// Inputs the harness draws from.
pub fn harness_filter() -> EnumFilter {
    EnumFilter {
        oriented: true,
        induced_p3_free: true,
        weakly_connected: true,
        ..EnumFilter::default()
    }
}

/// Largest size enumerated exhaustively when sampling is requested.
pub const EXHAUSTIVE_MAX: usize = 5;

/// A uniformly random labeled oriented graph on `n` vertices: each pair is
/// independently non-adjacent or joined in one of the two directions.
pub fn random_oriented(n: usize, rng: &mut StreamRng) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match rng.random_range(0..3u8) {
                1 => arcs.push((u, v)),
                2 => arcs.push((v, u)),
                _ => {}
            }
        }
    }
    Digraph::new(n, arcs).expect("vertices in range")
}

/// Whether `d` is an input the harness checks.
pub fn in_harness_class(d: &Digraph) -> bool {
    !d.has_loop()
        && d.symmetric_pairs().is_empty()
        && find_induced_p3(d).is_none()
        && weak_components(d).len() <= 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleSearch {
    pub characterization: Characterization,
    pub nmax: usize,
    /// Accepted random samples per size above [`EXHAUSTIVE_MAX`]; without
    /// it every size is enumerated exhaustively.
    pub sample: Option<u64>,
    /// Cap on characterization checks.
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coverage {
    pub size: usize,
    pub exhaustive: bool,
    pub checked: u64,
    /// Random digraphs drawn, including those outside the input class.
    pub drawn: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub counterexample: Option<Disagreement>,
    pub coverage: Vec<Coverage>,
    /// The check budget ran out before the search finished.
    pub budget_exhausted: bool,
}

impl CounterexampleReport {
    pub fn checked(&self) -> u64 {
        self.coverage.iter().map(|c| c.checked).sum()
    }
}

/// Draws per accepted sample before a size is given up as too sparse.
const MAX_DRAWS_PER_SAMPLE: u64 = 100_000;

/// Checks the characterization against the homomorphism search on
/// induced-`P3`-free, loopless, oriented, weakly connected digraphs with
/// up to `nmax` vertices, stopping at the first disagreement.
pub fn search_counterexample(search: &CounterexampleSearch, rng: &mut StreamRng) -> Result<CounterexampleReport> {
    search.characterization.validate()?;
    let filter = harness_filter();
    let mut report = CounterexampleReport {
        counterexample: None,
        coverage: Vec::new(),
        budget_exhausted: false,
    };
    let mut total = 0u64;
    for size in 1..=search.nmax {
        let exhaustive = size <= EXHAUSTIVE_MAX || search.sample.is_none();
        if exhaustive && size > MAX_CANONICAL {
            return Err(Error::Precondition(format!(
                "exhaustive enumeration stops at {MAX_CANONICAL} vertices; sample larger sizes"
            )));
        }
        let mut cov = Coverage {
            size,
            exhaustive,
            ..Coverage::default()
        };
        let mut outcome: Result<()> = Ok(());
        let mut refused = false;
        let mut check = |d: &Digraph, cov: &mut Coverage| -> ControlFlow<()> {
            if search.budget.is_some_and(|b| total >= b) {
                refused = true;
                return ControlFlow::Break(());
            }
            total += 1;
            cov.checked += 1;
            match check_characterization(d, search.characterization) {
                Ok(None) => ControlFlow::Continue(()),
                Ok(Some(bad)) => {
                    report.counterexample = Some(bad);
                    ControlFlow::Break(())
                }
                Err(e) => {
                    outcome = Err(e);
                    ControlFlow::Break(())
                }
            }
        };
        if exhaustive {
            enumerate_digraphs(size, &filter, true, None, |d| check(d, &mut cov))?;
        } else {
            let want = search.sample.unwrap_or(0);
            let max_draws = want.saturating_mul(MAX_DRAWS_PER_SAMPLE);
            while cov.checked < want && cov.drawn < max_draws {
                cov.drawn += 1;
                let d = random_oriented(size, rng);
                if in_harness_class(&d) && check(&d, &mut cov).is_break() {
                    break;
                }
            }
        }
        outcome?;
        report.coverage.push(cov);
        if report.counterexample.is_some() {
            break;
        }
        if refused {
            report.budget_exhausted = true;
            break;
        }
    }
    Ok(report)
}
