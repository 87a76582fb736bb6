//! Reductions from positive 1-IN-3-SAT to `CSP(C3plus)`, `CSP(TC_n)` and
//! `CSP(C3plusplus)`, with a brute-force satisfiability oracle and audits of
//! the structural properties of the produced digraphs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::digraph::{contains_subgraph, directed_path, make_path, Digraph, OrientationWord, SubgraphMode};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

/// Largest variable count accepted by [`brute_force_1in3`].
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

/// A positive 1-IN-3-SAT formula: each clause asks for exactly one of its
/// three variables to be true.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneInThreeInstance {
    vars: usize,
    clauses: Vec<[usize; 3]>,
}

impl OneInThreeInstance {
    /// Checks that ids are in range, distinct within each clause, and that
    /// every variable occurs.
    pub fn new(vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Invalid("an instance needs at least one clause".into()));
        }
        let mut seen = vec![false; vars];
        for (i, c) in clauses.iter().enumerate() {
            for &v in c {
                if v >= vars {
                    return Err(Error::Invalid(format!("clause {i} uses variable {v} but there are {vars}")));
                }
                seen[v] = true;
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::Invalid(format!("clause {i} repeats a variable: {c:?}")));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::Invalid(format!("variable {v} occurs in no clause")));
        }
        Ok(OneInThreeInstance { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// For each variable, its occurrences as `(clause, position)` in clause
    /// order.
    pub fn occurrences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occ = vec![Vec::new(); self.vars];
        for (i, c) in self.clauses.iter().enumerate() {
            for (j, &v) in c.iter().enumerate() {
                occ[v].push((i, j));
            }
        }
        occ
    }

    /// Whether `assignment` makes exactly one variable of every clause true.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|&&v| assignment[v]).count() == 1)
    }

    /// `clauses` random clauses over at most `max_vars` variables; unused
    /// variables are dropped and the rest renumbered in order of first use.
    pub fn random(max_vars: usize, clauses: usize, rng: &mut StreamRng) -> Result<Self> {
        if max_vars < 3 || clauses == 0 {
            return Err(Error::Invalid("random instances need at least 3 variables and 1 clause".into()));
        }
        let mut raw = Vec::with_capacity(clauses);
        for _ in 0..clauses {
            let a = rng.random_range(0..max_vars);
            let mut b = rng.random_range(0..max_vars - 1);
            if b >= a {
                b += 1;
            }
            let mut c = rng.random_range(0..max_vars - 2);
            for lo in if a < b { [a, b] } else { [b, a] } {
                if c >= lo {
                    c += 1;
                }
            }
            raw.push([a, b, c]);
        }
        let mut id = vec![usize::MAX; max_vars];
        let mut next = 0;
        for c in raw.iter_mut() {
            for v in c.iter_mut() {
                if id[*v] == usize::MAX {
                    id[*v] = next;
                    next += 1;
                }
                *v = id[*v];
            }
        }
        OneInThreeInstance::new(next, raw)
    }
}

/// A satisfying assignment found by trying all `2^V` assignments.
pub fn brute_force_assignment(inst: &OneInThreeInstance) -> Result<Option<Vec<bool>>> {
    if inst.vars > BRUTE_FORCE_MAX_VARS {
        return Err(Error::CapExceeded {
            needed: inst.vars as u128,
            cap: BRUTE_FORCE_MAX_VARS,
        });
    }
    let masks: Vec<u32> = inst
        .clauses
        .iter()
        .map(|c| c.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    for bits in 0u32..(1u32 << inst.vars) {
        if masks.iter().all(|&m| (bits & m).count_ones() == 1) {
            return Ok(Some((0..inst.vars).map(|v| bits >> v & 1 == 1).collect()));
        }
    }
    Ok(None)
}

pub fn brute_force_1in3(inst: &OneInThreeInstance) -> Result<bool> {
    brute_force_assignment(inst).map(|a| a.is_some())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VariableMode {
    /// One oriented cycle per variable with a sink per occurrence.
    #[default]
    Cycle,
    /// All occurrences of a variable are one vertex.
    Identify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReductionOptions {
    pub mode: VariableMode,
    /// Linking gadgets placed in series between each clause vertex and its
    /// sink on the variable cycle.
    pub spacing: usize,
}

impl ReductionOptions {
    pub fn new(mode: VariableMode, spacing: usize) -> Result<Self> {
        let opts = ReductionOptions { mode, spacing };
        opts.validate()?;
        Ok(opts)
    }

    fn validate(&self) -> Result<()> {
        if self.mode == VariableMode::Identify && self.spacing > 0 {
            return Err(Error::Invalid("spacing applies to cycle mode only".into()));
        }
        Ok(())
    }
}

/// Which template a reduction targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetTarget {
    C3plus,
    Tcn(usize),
    C3plusplus,
}

impl GadgetTarget {
    /// Whether clause and linking gadgets use symmetric pairs in place of
    /// single arcs.
    fn symmetric(self) -> bool {
        matches!(self, GadgetTarget::C3plusplus)
    }
}

/// Output of a reduction together with the vertices it was built around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub digraph: Digraph,
    pub target: GadgetTarget,
    /// The vertices `x, y, z` of each clause gadget.
    pub clause_tops: Vec<[usize; 3]>,
    /// The sinks of each variable's cycle (the shared vertex in identify
    /// mode).
    pub variable_sinks: Vec<Vec<usize>>,
}

struct Builder {
    n: usize,
    arcs: Vec<(usize, usize)>,
    symmetric: bool,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn arc(&mut self, u: usize, v: usize) {
        self.arcs.push((u, v));
    }

    fn link(&mut self, u: usize, v: usize) {
        self.arcs.push((u, v));
        if self.symmetric {
            self.arcs.push((v, u));
        }
    }
}

/// Vertices `9i..9i+9` are clause `i`: tops `x, y, z`, middles, then the
/// bottom triangle `x', y', z'`. Cycle vertices follow, variable by variable,
/// then spacer chains.
fn reduce(inst: &OneInThreeInstance, target: GadgetTarget, opts: ReductionOptions) -> Result<Reduction> {
    opts.validate()?;
    let mut b = Builder {
        n: 0,
        arcs: Vec::new(),
        symmetric: target.symmetric(),
    };
    let mut clause_tops = Vec::with_capacity(inst.clauses.len());
    for _ in &inst.clauses {
        let base = b.n;
        b.n += 9;
        for j in 0..3 {
            b.link(base + 3 + j, base + j);
            b.link(base + 3 + j, base + 6 + j);
            b.arc(base + 6 + j, base + 6 + (j + 1) % 3);
        }
        clause_tops.push([base, base + 1, base + 2]);
    }
    let occ = inst.occurrences();
    let top = |&(i, j): &(usize, usize)| clause_tops[i][j];
    if opts.mode == VariableMode::Identify {
        let mut rep: Vec<usize> = (0..b.n).collect();
        for list in &occ {
            let first = top(&list[0]);
            for o in &list[1..] {
                rep[top(o)] = first;
            }
        }
        let mut id = vec![usize::MAX; b.n];
        let mut next = 0;
        for v in 0..b.n {
            if rep[v] == v {
                id[v] = next;
                next += 1;
            }
        }
        let new_id = |v: usize| id[rep[v]];
        let digraph = Digraph::new(next, b.arcs.iter().map(|&(u, v)| (new_id(u), new_id(v))))?;
        return Ok(Reduction {
            digraph,
            target,
            clause_tops: clause_tops.iter().map(|t| t.map(new_id)).collect(),
            variable_sinks: occ.iter().map(|list| vec![new_id(top(&list[0]))]).collect(),
        });
    }
    let mut variable_sinks = Vec::with_capacity(inst.vars);
    for list in &occ {
        let sinks: Vec<usize> = if opts.spacing == 0 {
            list.iter().map(top).collect()
        } else {
            list.iter().map(|_| b.fresh()).collect()
        };
        match sinks.len() {
            1 => {
                let r = b.fresh();
                b.link(r, sinks[0]);
            }
            k => {
                // a 2-cycle still gets two linking vertices
                for j in 0..k {
                    let r = b.fresh();
                    b.link(r, sinks[j]);
                    b.link(r, sinks[(j + 1) % k]);
                }
            }
        }
        variable_sinks.push(sinks);
    }
    if opts.spacing > 0 {
        for (list, sinks) in occ.iter().zip(&variable_sinks) {
            for (o, &sink) in list.iter().zip(sinks) {
                let mut prev = top(o);
                for k in 1..=opts.spacing {
                    let r = b.fresh();
                    let next = if k == opts.spacing { sink } else { b.fresh() };
                    b.link(r, prev);
                    b.link(r, next);
                    prev = next;
                }
            }
        }
    }
    Ok(Reduction {
        digraph: Digraph::new(b.n, b.arcs)?,
        target,
        clause_tops,
        variable_sinks,
    })
}

pub fn reduce_to_c3plus(inst: &OneInThreeInstance, opts: ReductionOptions) -> Result<Reduction> {
    reduce(inst, GadgetTarget::C3plus, opts)
}

/// Same skeleton as [`reduce_to_c3plus`]; in a homomorphism to `TC_n` the
/// true variables are those whose vertices map to the source of `TC_n`.
pub fn reduce_to_tcn(inst: &OneInThreeInstance, n: usize, opts: ReductionOptions) -> Result<Reduction> {
    if n < 4 {
        return Err(Error::SizeTooSmall { min: 4, got: n });
    }
    reduce(inst, GadgetTarget::Tcn(n), opts)
}

/// Clause and linking arcs become symmetric pairs; only the bottom triangle
/// stays oriented.
pub fn reduce_to_c3pp(inst: &OneInThreeInstance, opts: ReductionOptions) -> Result<Reduction> {
    reduce(inst, GadgetTarget::C3plusplus, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AuditProfile {
    C3plusP4Free,
    TcnP4Free,
    C3ppP3Free,
}

impl AuditProfile {
    pub fn name(self) -> &'static str {
        match self {
            AuditProfile::C3plusP4Free => "c3plus_p4free",
            AuditProfile::TcnP4Free => "tcn_p4free",
            AuditProfile::C3ppP3Free => "c3pp_p3free",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [AuditProfile::C3plusP4Free, AuditProfile::TcnP4Free, AuditProfile::C3ppP3Free]
            .into_iter()
            .find(|p| p.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCheck {
    pub property: String,
    pub passed: bool,
    /// Vertices of an offending copy, or the offending vertex.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub profile: AuditProfile,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn path(word: &str) -> Digraph {
    make_path(&word.parse::<OrientationWord>().expect("fixed word"))
}

/// `K_{1,3}` with centre `0` sending arcs to the first `out` leaves and
/// receiving from the rest.
pub fn claw(out: usize) -> Digraph {
    let arcs = (1..=3).map(|leaf| if leaf <= out { (0, leaf) } else { (leaf, 0) });
    Digraph::new(4, arcs).expect("in range")
}

fn absence(d: &Digraph, name: &str, f: &Digraph, mode: SubgraphMode) -> AuditCheck {
    let found = contains_subgraph(d, f, mode);
    let kind = match mode {
        SubgraphMode::Subgraph => "subgraph",
        SubgraphMode::Induced => "induced",
    };
    AuditCheck {
        property: format!("no {name} ({kind})"),
        passed: found.is_none(),
        witness: found,
    }
}

/// Checks the properties each reduction is meant to guarantee in cycle mode.
///
/// The claw checks cover the centre-source and out-degree-two orientations;
/// reversing every arc of the output handles the other two.
pub fn structural_audit(d: &Digraph, profile: AuditProfile) -> AuditReport {
    use SubgraphMode::{Induced, Subgraph};
    let checks = match profile {
        AuditProfile::C3plusP4Free | AuditProfile::TcnP4Free => {
            let heavy = d.vertices().find(|&v| d.total_degree(v) > 3);
            vec![
                absence(d, "directed P5", &directed_path(5), Subgraph),
                absence(d, "P5 <<>>", &path("<<>>"), Subgraph),
                absence(d, "P5 >><<", &path(">><<"), Subgraph),
                absence(d, "directed P4", &directed_path(4), Induced),
                AuditCheck {
                    property: "total degree at most 3".into(),
                    passed: heavy.is_none(),
                    witness: heavy.map(|v| vec![v]),
                },
                absence(d, "claw with centre out-degree 3", &claw(3), Subgraph),
                absence(d, "claw with centre out-degree 2", &claw(2), Subgraph),
            ]
        }
        AuditProfile::C3ppP3Free => vec![
            absence(d, "directed P3", &directed_path(3), Induced),
            absence(d, "P3 <>", &path("<>"), Induced),
            absence(d, "P3 ><", &path("><"), Induced),
        ],
    };
    AuditReport { profile, checks }
}
