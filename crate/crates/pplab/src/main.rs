use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pplab::formats::{self, load_digraph, load_pp, parse_cnf, parse_table, write_digraph, DigraphFile, OutputFormat};
use pplab::sweep;
use pplab_core::digraph::{MarkedDigraph, Structure};
use pplab_core::enumerate::{digraph_classes, EnumFilter};
use pplab_core::exponential::{exponential_with_cap, product, rcsp_solve_with, RcspOutcome, RcspRoute};
use pplab_core::gadgets::{
    reduce_to_c3plus, reduce_to_c3pp, reduce_to_tcn, structural_audit, AuditProfile, ReductionOptions, VariableMode,
};
use pplab_core::hom::{
    core_marked, core_with_cap, verify_hom, verify_induced_embedding, Consistency, HomOutcome, HomSearch, SearchBudget,
};
use pplab_core::obstructions::{
    characterize, compute_fn, search_counterexample, Characterization, CounterexampleSearch, Verdict,
};
use pplab_core::polymorphism::{
    find_polymorphism, minimal_hard_level, verify_polymorphism, HardLevelOptions, IdentitySpec,
};
use pplab_core::pp::{gadget_replacement, pp_power_with_cap, DEFAULT_POWER_CAP};
use pplab_core::rng::stream;
use pplab_core::solvers::Algorithm;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 20_240_601;

const YES: u8 = 0;
const NO: u8 = 1;
const ERROR: u8 = 2;
const PROMISE: u8 = 3;

/// Homomorphism problems on finite digraphs.
///
/// Digraph arguments are files in the text or JSON format, or `@name` for a
/// built-in digraph (`@C3plus`, `@GU`, `@TT4`, `@TC5`, `@C6`, `@K3`, `@P4`).
#[derive(Parser)]
#[command(name = "pplab", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Search node budget; 0 means unlimited.
    #[arg(long, global = true, default_value_t = 0)]
    budget: u64,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether D maps to H.
    Hom {
        d: String,
        h: String,
        /// Look for an induced embedding instead of a homomorphism.
        #[arg(long)]
        induced_check: bool,
        /// Add singleton arc consistency at the root.
        #[arg(long)]
        singleton: bool,
    },
    /// Write the core of H.
    Core {
        h: String,
        #[arg(long, default_value_t = pplab_core::hom::DEFAULT_CORE_CAP)]
        cap: usize,
    },
    /// The pp-power of A under a definition.
    PpPower {
        def: PathBuf,
        a: String,
        #[arg(long, default_value_t = DEFAULT_POWER_CAP)]
        cap: usize,
    },
    /// Replace every arc of B by the canonical database of a definition.
    GadgetReplace { def: PathBuf, b: String },
    /// The exponential digraph A^B.
    Exp {
        a: String,
        b: String,
        #[arg(long, default_value_t = pplab_core::exponential::DEFAULT_EXPONENTIAL_CAP)]
        cap: usize,
    },
    /// The categorical product A × B.
    Product { a: String, b: String },
    /// Decide C → A for an instance promised to map to B.
    Rcsp {
        a: String,
        b: String,
        c: String,
        #[arg(long, value_enum, default_value_t = Route::Direct)]
        route: Route,
    },
    /// Polymorphism search and verification.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Obstruction characterizations for the templates TC_n.
    #[command(subcommand)]
    Obstructions(ObstructionCommand),
    /// Run a special-case solver.
    Solve {
        #[arg(long)]
        algo: String,
        /// Size of TT_n for `levels`, index of TC_n for `tcn-p3`.
        #[arg(long, default_value_t = 4)]
        n: usize,
        d: String,
    },
    /// Reduce a positive 1-in-3 instance to a digraph CSP.
    Reduce {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Cycle)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        spacing: usize,
        cnf: PathBuf,
    },
    /// Structural checks on a reduction output.
    Audit {
        #[arg(long)]
        profile: String,
        d: String,
    },
    /// Count or list digraphs up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        filter: FilterArgs,
        /// Print every class instead of the count.
        #[arg(long)]
        list: bool,
    },
    /// Seeded solver-versus-search sweeps on random inputs.
    Sweep {
        #[arg(long)]
        algo: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Vertices per random input.
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long, default_value_t = 1_000)]
        count: u64,
    },
}

#[derive(Subcommand)]
enum PolyCommand {
    /// Search a polymorphism satisfying the chosen identities.
    Find {
        h: String,
        #[arg(long, value_enum, default_value_t = Identity::Siggers)]
        identity: Identity,
        #[arg(long)]
        conservative: bool,
        #[arg(long)]
        idempotent: bool,
    },
    /// Check a table exhaustively.
    Verify {
        h: String,
        table: PathBuf,
        #[arg(long, value_enum)]
        identity: Option<Identity>,
        #[arg(long)]
        conservative: bool,
    },
    /// Smallest N with no Siggers operation on H × TT_N.
    HardLevel {
        h: String,
        #[arg(long)]
        max: usize,
        /// Also search the level after the first hard one.
        #[arg(long)]
        check_next: bool,
    },
}

#[derive(Subcommand)]
enum ObstructionCommand {
    /// Decide D → TC_n by the obstruction list.
    Tcn {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Use the TC_4 list with TT_4 and the five-vertex tournaments.
        #[arg(long)]
        tc4: bool,
        d: String,
    },
    /// Compare a characterization with the homomorphism search.
    Search {
        #[arg(long, value_enum, default_value_t = Checker::Tcn)]
        checker: Checker,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        max: usize,
        /// Random inputs per size above the exhaustive range.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Tournaments on at most `max` vertices that do not embed into TC_n.
    Fn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long)]
    loopless: bool,
    #[arg(long)]
    oriented: bool,
    #[arg(long)]
    tournament: bool,
    #[arg(long)]
    p3_free: bool,
    #[arg(long)]
    p4_free: bool,
    #[arg(long)]
    connected: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Direct,
    Exp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Siggers,
    Majority,
}

#[derive(Clone, Copy, ValueEnum)]
enum Checker {
    Tc4,
    Tcn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    C3plus,
    Tcn,
    C3pp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cycle,
    Identify,
}

/// A loaded digraph together with its marked view when it has marks.
struct Loaded {
    file: DigraphFile,
    marked: Option<MarkedDigraph>,
}

impl Loaded {
    fn new(arg: &str) -> anyhow::Result<Self> {
        let file = load_digraph(arg).with_context(|| format!("reading {arg}"))?;
        let marked = file.marked()?;
        Ok(Loaded { file, marked })
    }

    fn structure(&self) -> Structure<'_> {
        match &self.marked {
            Some(m) => m.into(),
            None => (&self.file.digraph).into(),
        }
    }
}

fn load(arg: &str) -> anyhow::Result<pplab_core::Digraph> {
    Ok(Loaded::new(arg)?.file.digraph)
}

struct Ctx {
    seed: u64,
    budget: SearchBudget,
    format: OutputFormat,
}

impl Ctx {
    /// Prints a report: JSON as one line, otherwise `key: value` lines.
    fn report(&self, value: Value) {
        if self.format == OutputFormat::Json {
            println!("{value}");
            return;
        }
        if let Value::Object(map) = value {
            for (k, v) in map {
                match v {
                    Value::String(s) => println!("{k}: {s}"),
                    other => println!("{k}: {other}"),
                }
            }
        }
    }

    fn digraph(&self, d: &pplab_core::Digraph, marks: &[usize]) {
        print!("{}", write_digraph(d, marks, self.format));
    }
}

fn budget_error() -> anyhow::Error {
    anyhow::anyhow!("search budget exhausted")
}

fn hom_cmd(ctx: &Ctx, d: &str, h: &str, induced: bool, singleton: bool) -> anyhow::Result<u8> {
    let (d, h) = (Loaded::new(d)?, Loaded::new(h)?);
    let mut budget = ctx.budget;
    if singleton {
        budget.consistency = Consistency::ArcPlusSingleton;
    }
    let search = HomSearch::new(d.structure(), h.structure())
        .budget(budget)
        .injective(induced)
        .induced(induced);
    match search.find() {
        HomOutcome::Found(map) => {
            let ok = if induced {
                verify_induced_embedding(&d.file.digraph, &h.file.digraph, &map)
            } else {
                verify_hom(d.structure(), h.structure(), &map)
            };
            if !ok {
                bail!("internal error: the returned map does not verify");
            }
            ctx.report(json!({"result": "yes", "map": map}));
            Ok(YES)
        }
        HomOutcome::NotFound => {
            ctx.report(json!({"result": "no"}));
            Ok(NO)
        }
        HomOutcome::BudgetExhausted => {
            ctx.report(json!({"result": "budget"}));
            Ok(ERROR)
        }
    }
}

fn core_cmd(ctx: &Ctx, h: &str, cap: usize) -> anyhow::Result<u8> {
    let h = Loaded::new(h)?;
    match &h.marked {
        Some(m) => {
            let c = core_marked(m, cap)?;
            ctx.digraph(c.core.base(), &c.core.marks().iter().collect::<Vec<_>>());
        }
        None => ctx.digraph(&core_with_cap(&h.file.digraph, cap)?.core, &[]),
    }
    Ok(YES)
}

fn rcsp_cmd(ctx: &Ctx, a: &str, b: &str, c: &str, route: Route) -> anyhow::Result<u8> {
    let route = match route {
        Route::Direct => RcspRoute::Direct,
        Route::Exp => RcspRoute::ViaExponential,
    };
    let cap = pplab_core::exponential::DEFAULT_EXPONENTIAL_CAP;
    match rcsp_solve_with(&load(a)?, &load(b)?, &load(c)?, route, ctx.budget, cap) {
        Ok(RcspOutcome::Yes(map)) => {
            ctx.report(json!({"result": "yes", "map": map}));
            Ok(YES)
        }
        Ok(RcspOutcome::No) => {
            ctx.report(json!({"result": "no"}));
            Ok(NO)
        }
        Ok(RcspOutcome::PromiseViolation) => {
            ctx.report(json!({"result": "promise-violation"}));
            Ok(PROMISE)
        }
        Err(pplab_core::Error::BudgetExhausted) => Err(budget_error()),
        Err(e) => Err(e.into()),
    }
}

fn identity_spec(identity: Identity, conservative: bool, idempotent: bool) -> IdentitySpec {
    let spec = match identity {
        Identity::Siggers => IdentitySpec::siggers(),
        Identity::Majority => IdentitySpec::majority(),
    };
    spec.conservative(conservative).idempotent(idempotent)
}

fn poly_cmd(ctx: &Ctx, cmd: PolyCommand) -> anyhow::Result<u8> {
    match cmd {
        PolyCommand::Find {
            h,
            identity,
            conservative,
            idempotent,
        } => {
            let h = Loaded::new(&h)?;
            let spec = identity_spec(identity, conservative, idempotent);
            match find_polymorphism(h.structure(), &spec, ctx.budget) {
                Ok(Some(f)) => {
                    if ctx.format == OutputFormat::Json {
                        ctx.report(json!({"found": true, "arity": f.arity, "domain": f.domain, "table": f.table}));
                    } else {
                        print!("{}", formats::write_table(&f));
                    }
                    Ok(YES)
                }
                Ok(None) => {
                    ctx.report(json!({"found": false}));
                    Ok(NO)
                }
                Err(pplab_core::Error::BudgetExhausted) => Err(budget_error()),
                Err(e) => Err(e.into()),
            }
        }
        PolyCommand::Verify {
            h,
            table,
            identity,
            conservative,
        } => {
            let h = Loaded::new(&h)?;
            let f = parse_table(&formats::read_to_string(&table)?)?;
            // no identity: arc preservation and marks only
            let spec = match identity {
                Some(i) => identity_spec(i, conservative, false),
                None => IdentitySpec {
                    arity: f.arity,
                    vars: 0,
                    height_one: Vec::new(),
                    projections: Vec::new(),
                    idempotent: false,
                    conservative,
                },
            };
            match verify_polymorphism(h.structure(), &f, &spec) {
                Ok(()) => {
                    ctx.report(json!({"valid": true}));
                    Ok(YES)
                }
                Err(v) => {
                    ctx.report(json!({"valid": false, "violation": format!("{v:?}")}));
                    Ok(NO)
                }
            }
        }
        PolyCommand::HardLevel { h, max, check_next } => {
            let h = load(&h)?;
            let mut opts = HardLevelOptions {
                check_next,
                ..HardLevelOptions::default()
            };
            if ctx.budget.max_nodes > 0 {
                opts.budget.max_nodes = ctx.budget.max_nodes;
            }
            let r = minimal_hard_level(&h, max, &opts);
            let levels: Vec<Value> = r
                .levels
                .iter()
                .zip(&r.searched_sizes)
                .map(|(&(n, o), &size)| json!({"level": n, "outcome": format!("{o:?}"), "template_size": size}))
                .collect();
            ctx.report(json!({"hard_level": r.hard_level, "levels": levels, "incomplete_at": r.incomplete_at()}));
            Ok(if r.incomplete_at().is_some() {
                ERROR
            } else if r.hard_level.is_some() {
                YES
            } else {
                NO
            })
        }
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Maps => json!({"maps": true}),
        Verdict::Obstructed { name, witness, map } => json!({
            "maps": false,
            "obstruction": name,
            "witness": formats::to_json_value(witness, &[]),
            "map": map,
        }),
    }
}

fn obstruction_cmd(ctx: &Ctx, cmd: ObstructionCommand) -> anyhow::Result<u8> {
    match cmd {
        ObstructionCommand::Tcn { n, tc4, d } => {
            let c = if tc4 { Characterization::Tc4 } else { Characterization::Tcn(n) };
            match characterize(&load(&d)?, c) {
                Ok(r) => {
                    ctx.report(verdict_json(&r.verdict));
                    Ok(if r.maps() { YES } else { NO })
                }
                Err(e @ pplab_core::Error::Precondition(_)) => {
                    eprintln!("{e}");
                    Ok(PROMISE)
                }
                Err(e) => Err(e.into()),
            }
        }
        ObstructionCommand::Search {
            checker,
            n,
            max,
            sample,
        } => {
            let c = match checker {
                Checker::Tc4 => Characterization::Tc4,
                Checker::Tcn => Characterization::Tcn(n),
            };
            let search = CounterexampleSearch {
                characterization: c,
                nmax: max,
                sample,
                budget: (ctx.budget.max_nodes > 0).then_some(ctx.budget.max_nodes),
            };
            let r = search_counterexample(&search, &mut stream(ctx.seed, "obstructions-search"))?;
            let counterexamples: Vec<Value> = r
                .counterexample
                .iter()
                .map(|bad| {
                    json!({
                        "digraph": formats::to_json_value(&bad.report.subject, &[]),
                        "characterization": verdict_json(&bad.report.verdict),
                        "hom_exists": bad.hom_exists,
                    })
                })
                .collect();
            let coverage: Vec<Value> = r
                .coverage
                .iter()
                .map(|c| json!({"size": c.size, "exhaustive": c.exhaustive, "checked": c.checked, "drawn": c.drawn}))
                .collect();
            ctx.report(json!({
                "counterexamples": counterexamples,
                "coverage": coverage,
                "budget_exhausted": r.budget_exhausted,
            }));
            Ok(if !counterexamples.is_empty() {
                NO
            } else if r.budget_exhausted {
                ERROR
            } else {
                YES
            })
        }
        ObstructionCommand::Fn { n, max } => {
            let list = compute_fn(n, max)?;
            if ctx.format == OutputFormat::Json {
                let all: Vec<Value> = list.iter().map(|t| formats::to_json_value(t, &[])).collect();
                ctx.report(json!({"count": list.len(), "tournaments": all}));
            } else {
                for t in &list {
                    ctx.digraph(t, &[]);
                }
            }
            Ok(YES)
        }
    }
}

fn solve_cmd(ctx: &Ctx, algo: &str, n: usize, d: &str) -> anyhow::Result<u8> {
    let Some(algorithm) = Algorithm::from_name(algo) else {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        bail!("unknown algorithm `{algo}`; expected one of {}", names.join(", "));
    };
    let d = load(d)?;
    match algorithm.solve(&d, n) {
        Ok(out) => {
            ctx.report(json!({
                "algorithm": algorithm.name(),
                "decision": out.decision,
                "certificate": out.certificate,
                "reason": out.reason,
                "fallback_components": out.fallback_components,
            }));
            Ok(if out.decision { YES } else { NO })
        }
        Err(e @ pplab_core::Error::Precondition(_)) => {
            eprintln!("{e}");
            Ok(PROMISE)
        }
        Err(e) => Err(e.into()),
    }
}

fn reduce_cmd(ctx: &Ctx, target: Target, n: usize, mode: Mode, spacing: usize, cnf: &PathBuf) -> anyhow::Result<u8> {
    let inst = parse_cnf(&formats::read_to_string(cnf)?)?;
    let mode = match mode {
        Mode::Cycle => VariableMode::Cycle,
        Mode::Identify => VariableMode::Identify,
    };
    let opts = ReductionOptions::new(mode, spacing)?;
    let r = match target {
        Target::C3plus => reduce_to_c3plus(&inst, opts)?,
        Target::Tcn => reduce_to_tcn(&inst, n, opts)?,
        Target::C3pp => reduce_to_c3pp(&inst, opts)?,
    };
    ctx.digraph(&r.digraph, &[]);
    Ok(YES)
}

fn audit_cmd(ctx: &Ctx, profile: &str, d: &str) -> anyhow::Result<u8> {
    let Some(p) = AuditProfile::from_name(profile) else {
        bail!("unknown audit profile `{profile}`");
    };
    let r = structural_audit(&load(d)?, p);
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"property": c.property, "passed": c.passed, "witness": c.witness}))
        .collect();
    ctx.report(json!({"profile": p.name(), "passed": r.passed(), "checks": checks}));
    Ok(if r.passed() { YES } else { NO })
}

fn enumerate_cmd(ctx: &Ctx, n: usize, f: &FilterArgs, list: bool) -> anyhow::Result<u8> {
    let filter = EnumFilter {
        loopless: f.loopless,
        oriented: f.oriented,
        tournament: f.tournament,
        induced_p3_free: f.p3_free,
        p4_subgraph_free: f.p4_free,
        weakly_connected: f.connected,
    };
    let classes = digraph_classes(n, &filter)?;
    if list {
        for d in &classes {
            ctx.digraph(d, &[]);
        }
    } else {
        ctx.report(json!({"n": n, "classes": classes.len()}));
    }
    Ok(YES)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let ctx = Ctx {
        seed: cli.seed,
        budget: SearchBudget::nodes(cli.budget),
        format: cli.format,
    };
    match cli.command {
        Command::Hom {
            d,
            h,
            induced_check,
            singleton,
        } => hom_cmd(&ctx, &d, &h, induced_check, singleton),
        Command::Core { h, cap } => core_cmd(&ctx, &h, cap),
        Command::PpPower { def, a, cap } => {
            ctx.digraph(&pp_power_with_cap(&load_pp(&def)?, &load(&a)?, cap)?, &[]);
            Ok(YES)
        }
        Command::GadgetReplace { def, b } => {
            ctx.digraph(&gadget_replacement(&load_pp(&def)?, &load(&b)?), &[]);
            Ok(YES)
        }
        Command::Exp { a, b, cap } => {
            ctx.digraph(&exponential_with_cap(&load(&a)?, &load(&b)?, cap)?, &[]);
            Ok(YES)
        }
        Command::Product { a, b } => {
            ctx.digraph(&product(&load(&a)?, &load(&b)?), &[]);
            Ok(YES)
        }
        Command::Rcsp { a, b, c, route } => rcsp_cmd(&ctx, &a, &b, &c, route),
        Command::Poly(cmd) => poly_cmd(&ctx, cmd),
        Command::Obstructions(cmd) => obstruction_cmd(&ctx, cmd),
        Command::Solve { algo, n, d } => solve_cmd(&ctx, &algo, n, &d),
        Command::Reduce {
            target,
            n,
            mode,
            spacing,
            cnf,
        } => reduce_cmd(&ctx, target, n, mode, spacing, &cnf),
        Command::Audit { profile, d } => audit_cmd(&ctx, &profile, &d),
        Command::Enumerate { n, filter, list } => enumerate_cmd(&ctx, n, &filter, list),
        Command::Sweep { algo, n, size, count } => {
            let Some(algorithm) = Algorithm::from_name(&algo) else {
                bail!("unknown algorithm `{algo}`");
            };
            algorithm.template(n)?;
            let r = sweep::solver_random(algorithm, n, size, count, ctx.seed);
            ctx.report(serde_json::to_value(&r)?);
            Ok(if r.passed() { YES } else { NO })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let jobs = cli.jobs;
    match sweep::with_jobs(jobs, move || run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}
