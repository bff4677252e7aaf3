//! Command-line front end for counterfactual planning queries.
//!
//! Every command produces one [`Report`]; `--format` selects a human
//! rendering or the structured JSON document. Exit codes: 0 for a positive
//! answer, 1 for a negative one, 2 for errors and oracle budget cutoffs.

pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cfplan::cfsearch::{
    check_universal, csep, edits_between, find_plan, Budget, ChangeKind, CounterfactualQuery,
    CounterfactualResult, Quantifier,
};
use cfplan::encode::{parse_spec, Plausibility};
use cfplan::gen::{instance, GenParams};
use cfplan::io::{parse_plan, parse_plausibility, parse_problem, parse_trace, write_problem, ProblemFile};
use cfplan::ltlf::{evaluate, solver_calls, Alphabet, Ltlf};
use cfplan::model::{all_assignments, BoolFormula, Plan, PlanningProblem, Trace};
use cfplan::oracle::{brute_counterexample, brute_csep, brute_exists, brute_forall, OracleOutcome};
use clap::{Args, Parser, Subcommand};

pub use config::{BackendChoice, OutputFormat, RunConfig};
pub use report::{ErrorReport, Report, Timings, Verdict};

/// Largest fluent count for which edited formulas are listed as model sets.
const MODEL_LISTING_FLUENTS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "cfplan", version, about = "Counterfactual scenarios for grounded planning problems")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendChoice>,
    /// Trace bound used instead of the reachability bound.
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    /// Largest cost tried by --minimize.
    #[arg(long, global = true)]
    pub max_edits: Option<usize>,
    /// Candidate edit sets per size for universal precondition changes.
    #[arg(long, global = true)]
    pub max_edit_sets: Option<usize>,
    /// Oracle work budget.
    #[arg(long, global = true)]
    pub oracle_nodes: Option<usize>,
    /// Largest fluent count the oracle accepts.
    #[arg(long, global = true)]
    pub oracle_fluents: Option<usize>,
    /// Report elapsed wall-clock time (makes output non-reproducible).
    #[arg(long, global = true)]
    pub wall_clock: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a problem file and optionally validate a plan against it.
    Validate {
        problem: PathBuf,
        plan: Option<PathBuf>,
    },
    /// Does some plan (or every plan) satisfy the formula?
    Check(CheckArgs),
    /// Find a least-cost change to the problem making the formula hold.
    Explain(ExplainArgs),
    /// The check and explain commands answered by brute-force enumeration.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Generate a random problem and formula.
    Gen(GenArgs),
    /// Evaluate a formula on a trace file.
    EvalTrace {
        problem: PathBuf,
        /// Formula text, or @file.
        formula: String,
        trace: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Like `check`, by enumerating plans.
    Check(CheckArgs),
    /// Like `explain`, by breadth-first search over edits.
    Explain(ExplainArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Formula text, or @file.
    pub formula: String,
    /// exists or forall.
    #[arg(long, default_value = "exists")]
    pub quantifier: Quantifier,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Formula text, or @file.
    pub formula: String,
    /// What may change: init, goal or act.
    #[arg(long)]
    pub change: ChangeKind,
    /// exists or forall.
    #[arg(long, default_value = "exists")]
    pub quantifier: Quantifier,
    /// Largest acceptable edit cost.
    #[arg(long, conflicts_with = "minimize", required_unless_present = "minimize")]
    pub budget: Option<usize>,
    /// Least cost up to --max-edits.
    #[arg(long)]
    pub minimize: bool,
    /// Plausibility constraint file; repeatable, constraints are conjoined.
    #[arg(long = "plausibility")]
    pub plausibility: Vec<PathBuf>,
    /// Also write the modified problem to this file.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub fluents: usize,
    #[arg(long)]
    pub actions: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Nesting depth bound of the formula.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Write problem.json and formula.ltlf here instead of reporting them.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Failure of a command, reported with verdict `error`.
#[derive(Debug)]
enum Failure {
    Core(cfplan::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<cfplan::Error> for Failure {
    fn from(e: cfplan::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<cfplan::syntax::ParseError> for Failure {
    fn from(e: cfplan::syntax::ParseError) -> Self {
        Failure::Core(e.into())
    }
}

impl Failure {
    fn report(&self) -> ErrorReport {
        let (kind, message, position) = match self {
            Failure::Core(cfplan::Error::Parse(p)) => ("parse", p.message.clone(), Some(p.pos)),
            Failure::Core(e @ cfplan::Error::Structural(_)) => ("structural", e.to_string(), None),
            Failure::Core(e @ cfplan::Error::Resource { what, .. }) => {
                let mut m = e.to_string();
                if *what == "trace bound" {
                    m.push_str("; --bound sets a smaller bound, complete only for shorter plans");
                }
                ("resource", m, None)
            }
            Failure::Core(e @ cfplan::Error::Contract(_)) => ("contract", e.to_string(), None),
            Failure::Io(path, e) => ("io", format!("{}: {e}", path.display()), None),
            Failure::Usage(m) => ("usage", m.clone(), None),
        };
        ErrorReport {
            kind: kind.into(),
            message,
            position,
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Result of [`run`]: the report, its rendering and the exit code.
#[derive(Clone, Debug)]
pub struct Output {
    pub report: Report,
    pub text: String,
    pub format: OutputFormat,
    pub exit_code: u8,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Check(_) => "check",
        Command::Explain(_) => "explain",
        Command::Oracle(OracleCommand::Check(_)) => "oracle check",
        Command::Oracle(OracleCommand::Explain(_)) => "oracle explain",
        Command::Gen(_) => "gen",
        Command::EvalTrace { .. } => "eval-trace",
    }
}

fn load_config(g: &GlobalArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &g.config {
        Some(path) => serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => RunConfig::default(),
    };
    if let Some(f) = g.format {
        cfg.output_format = f;
    }
    if let Some(b) = g.backend {
        cfg.backend = b;
    }
    if g.bound.is_some() {
        cfg.bound_override = g.bound;
    }
    if let Some(k) = g.max_edits {
        cfg.minimize_cap = k;
    }
    if let Some(k) = g.max_edit_sets {
        cfg.max_edit_sets = k;
    }
    if let Some(n) = g.oracle_nodes {
        cfg.guards.max_bfs_nodes = n;
    }
    if let Some(n) = g.oracle_fluents {
        cfg.guards.max_fluents = n;
    }
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Output {
    let name = command_name(&cli.command);
    let start = Instant::now();
    let calls = solver_calls();
    let cfg = load_config(&cli.global);
    let format = match &cfg {
        Ok(c) => c.output_format,
        Err(_) => cli.global.format.unwrap_or(OutputFormat::Human),
    };
    let mut report = match cfg.and_then(|c| dispatch(&cli.command, &c)) {
        Ok(r) => r,
        Err(e) => {
            let mut r = Report::new(name, Verdict::Error);
            r.error = Some(e.report());
            r
        }
    };
    report.timings.solver_calls = solver_calls() - calls;
    if cli.global.wall_clock {
        report.timings.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = match format {
        OutputFormat::Human => report.human(),
        OutputFormat::Structured => report.structured(),
    };
    Output {
        exit_code: report.verdict.exit_code(),
        report,
        text,
        format,
    }
}

/// Parses `args` (including the program name) and runs the command. Usage
/// errors are returned as clap errors.
pub fn run_args<I, T>(args: I) -> Result<Output, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Ok(run(&Cli::try_parse_from(args)?))
}

fn dispatch(c: &Command, cfg: &RunConfig) -> Outcome {
    match c {
        Command::Validate { problem, plan } => validate(problem, plan.as_deref()),
        Command::Check(a) if cfg.uses_oracle() => oracle_check(a, cfg, "check"),
        Command::Check(a) => check(a, cfg),
        Command::Explain(a) if cfg.uses_oracle() => oracle_explain(a, cfg, "explain"),
        Command::Explain(a) => explain(a, cfg),
        Command::Oracle(OracleCommand::Check(a)) => oracle_check(a, cfg, "oracle check"),
        Command::Oracle(OracleCommand::Explain(a)) => oracle_explain(a, cfg, "oracle explain"),
        Command::Gen(a) => gen(a, cfg),
        Command::EvalTrace {
            problem,
            formula,
            trace,
        } => eval_trace(problem, formula, trace),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_problem(path: &Path) -> Result<PlanningProblem, Failure> {
    Ok(parse_problem(&read(path)?)?)
}

/// Formula text, read from a file when written `@path`.
fn formula_text(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(read(Path::new(path))?.trim_end().to_string()),
        None => Ok(arg.to_string()),
    }
}

fn load_spec(arg: &str, p: &PlanningProblem) -> Result<Ltlf, Failure> {
    Ok(parse_spec(&formula_text(arg)?, p)?)
}

fn render_spec(f: &Ltlf, p: &PlanningProblem) -> String {
    f.render(&Alphabet::new(p.fluents().iter().cloned()))
}

fn states(p: &PlanningProblem, t: &Trace) -> Vec<Vec<String>> {
    t.states().iter().map(|s| p.describe_state(s)).collect()
}

fn validate(problem: &Path, plan: Option<&Path>) -> Outcome {
    let p = load_problem(problem)?;
    let Some(plan) = plan else {
        return Ok(Report::new("validate", Verdict::WellFormed).with_message(format!(
            "{} fluents, {} actions",
            p.num_fluents(),
            p.actions().len()
        )));
    };
    let plan = parse_plan(&read(plan)?, &p)?;
    Ok(match p.validate_plan(&plan) {
        Ok(t) => {
            let mut r = Report::new("validate", Verdict::Valid);
            r.trace = Some(states(&p, &t));
            r.witness = Some(plan.0);
            r
        }
        Err(e) => Report::new("validate", Verdict::Invalid).with_message(e.to_string()),
    })
}

fn yes_with(command: &str, p: &PlanningProblem, plan: Plan) -> Report {
    let mut r = Report::new(command, Verdict::Yes);
    if let Ok(t) = p.validate_plan(&plan) {
        r.trace = Some(states(p, &t));
    }
    r.witness = Some(plan.0);
    r
}

fn check(a: &CheckArgs, cfg: &RunConfig) -> Outcome {
    let p = load_problem(&a.problem)?;
    let psi = load_spec(&a.formula, &p)?;
    let limits = cfg.limits();
    Ok(match a.quantifier {
        Quantifier::Exists => match find_plan(&p, &psi, &limits)? {
            Some((plan, _)) => yes_with("check", &p, plan),
            None => Report::new("check", Verdict::No)
                .with_message("no loop-free valid plan satisfies the formula"),
        },
        Quantifier::ForAll => match check_universal(&p, &psi, &limits)? {
            Ok(plan) => yes_with("check", &p, plan),
            Err(Some(bad)) => {
                let mut r = Report::new("check", Verdict::No)
                    .with_message("a loop-free valid plan violates the formula");
                r.counterexample = Some(bad.0);
                r
            }
            Err(None) => Report::new("check", Verdict::No).with_message("the problem has no valid plan"),
        },
    })
}

fn oracle_check(a: &CheckArgs, cfg: &RunConfig, command: &str) -> Outcome {
    let p = load_problem(&a.problem)?;
    let psi = load_spec(&a.formula, &p)?;
    let g = &cfg.guards;
    Ok(match a.quantifier {
        Quantifier::Exists => match brute_exists(&p, &psi, g)? {
            Some(plan) => yes_with(command, &p, plan),
            None => Report::new(command, Verdict::No)
                .with_message("no loop-free valid plan satisfies the formula"),
        },
        Quantifier::ForAll => {
            if brute_forall(&p, &psi, g)? {
                let plan = brute_exists(&p, &Ltlf::True, g)?.expect("universal answers have a plan");
                yes_with(command, &p, plan)
            } else {
                match brute_counterexample(&p, &psi, g)? {
                    Some(bad) => {
                        let mut r = Report::new(command, Verdict::No)
                            .with_message("a loop-free valid plan violates the formula");
                        r.counterexample = Some(bad.0);
                        r
                    }
                    None => Report::new(command, Verdict::No).with_message("the problem has no valid plan"),
                }
            }
        }
    })
}

fn merge_plausibility(files: &[PathBuf], p: &PlanningProblem) -> Result<Plausibility, Failure> {
    fn conj(a: Option<BoolFormula>, b: Option<BoolFormula>) -> Option<BoolFormula> {
        match (a, b) {
            (Some(x), Some(y)) => Some(BoolFormula::And(vec![x, y])),
            (x, y) => x.or(y),
        }
    }
    let mut out = Plausibility::default();
    for f in files {
        let c = parse_plausibility(&read(f)?, p)?;
        out.init = conj(out.init.take(), c.init);
        out.goal = conj(out.goal.take(), c.goal);
        for (a, cond) in c.act {
            let prev = out.act.remove(&a);
            out.act.insert(a, conj(prev, Some(cond)).expect("present"));
        }
    }
    Ok(out)
}

fn budget(a: &ExplainArgs) -> Budget {
    match a.budget {
        Some(k) => Budget::Max(k),
        None => Budget::Minimize,
    }
}

/// Listing of every goal or precondition that differs between the two
/// problems, as model sets, when the fluent count is small.
fn model_listing(before: &PlanningProblem, after: &PlanningProblem) -> Option<BTreeMap<String, Vec<Vec<String>>>> {
    let n = after.num_fluents();
    if n > MODEL_LISTING_FLUENTS {
        return None;
    }
    let models = |f: &BoolFormula| {
        all_assignments(n)
            .filter(|s| f.holds(s))
            .map(|s| after.describe_state(&s))
            .collect::<Vec<_>>()
    };
    let mut out = BTreeMap::new();
    if before.goal() != after.goal() {
        out.insert("goal".to_string(), models(after.goal()));
    }
    for (x, y) in before.actions().iter().zip(after.actions()) {
        if x.pre != y.pre {
            out.insert(format!("pre({})", y.name), models(&y.pre));
        }
    }
    (!out.is_empty()).then_some(out)
}

fn found_report(
    command: &str,
    before: &PlanningProblem,
    after: &PlanningProblem,
    cost: usize,
    diff: Vec<cfplan::cfsearch::Edit>,
    witness: Plan,
    emit: Option<&Path>,
) -> Outcome {
    let text = write_problem(after);
    if let Some(path) = emit {
        std::fs::write(path, &text).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    }
    let mut r = Report::new(command, Verdict::Found);
    r.cost = Some(cost);
    r.diff = Some(diff);
    if let Ok(t) = after.validate_plan(&witness) {
        r.trace = Some(states(after, &t));
    }
    r.witness = Some(witness.0);
    r.models = model_listing(before, after);
    r.problem = Some(ProblemFile::from_problem(after));
    Ok(r)
}

fn none_report(command: &str, a: &ExplainArgs, cfg: &RunConfig) -> Report {
    let k = a.budget.unwrap_or(cfg.minimize_cap);
    Report::new(command, Verdict::None).with_message(format!("no counterfactual of cost at most {k}"))
}

fn explain(a: &ExplainArgs, cfg: &RunConfig) -> Outcome {
    let p = load_problem(&a.problem)?;
    let q = CounterfactualQuery {
        spec: load_spec(&a.formula, &p)?,
        plausibility: merge_plausibility(&a.plausibility, &p)?,
        problem: p.clone(),
        change: a.change,
        quantifier: a.quantifier,
        budget: budget(a),
    };
    match csep(&q, &cfg.limits())? {
        CounterfactualResult::Found(f) => {
            found_report("explain", &p, &f.problem, f.cost, f.edits, f.witness, a.emit.as_deref())
        }
        CounterfactualResult::None => Ok(none_report("explain", a, cfg)),
    }
}

fn oracle_explain(a: &ExplainArgs, cfg: &RunConfig, command: &str) -> Outcome {
    let p = load_problem(&a.problem)?;
    let psi = load_spec(&a.formula, &p)?;
    let plausibility = merge_plausibility(&a.plausibility, &p)?;
    let k = a.budget.unwrap_or(cfg.minimize_cap);
    match brute_csep(&p, &psi, a.change, a.quantifier, &plausibility, k, &cfg.guards)? {
        OracleOutcome::Found {
            problem,
            cost,
            witness,
        } => {
            let diff = edits_between(&p, &problem, cfg.guards.max_fluents)?;
            found_report(command, &p, &problem, cost, diff, witness, a.emit.as_deref())
        }
        OracleOutcome::None => Ok(none_report(command, a, cfg)),
        OracleOutcome::Unknown => Ok(Report::new(command, Verdict::Unknown).with_message(format!(
            "oracle work budget of {} exhausted before an answer",
            cfg.guards.max_bfs_nodes
        ))),
    }
}

fn gen(a: &GenArgs, cfg: &RunConfig) -> Outcome {
    if a.fluents == 0 || a.actions == 0 {
        return Err(Failure::Usage("--fluents and --actions must be positive".into()));
    }
    if a.fluents > cfg.guards.max_fluents {
        return Err(Failure::Core(cfplan::Error::Resource {
            what: "generated fluents",
            limit: cfg.guards.max_fluents,
            actual: a.fluents,
        }));
    }
    let seed = a.seed.unwrap_or(cfg.seed);
    let inst = instance(
        seed,
        GenParams {
            fluents: a.fluents,
            actions: a.actions,
            spec_depth: a.depth,
        },
    );
    let formula = render_spec(&inst.spec, &inst.problem);
    let mut r = Report::new("gen", Verdict::Generated);
    match &a.out_dir {
        Some(dir) => {
            let write = |name: &str, text: String| {
                let path = dir.join(name);
                std::fs::write(&path, text).map_err(|e| Failure::Io(path, e))
            };
            std::fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.clone(), e))?;
            write("problem.json", write_problem(&inst.problem))?;
            write("formula.ltlf", format!("{formula}\n"))?;
            r.message = Some(format!("wrote problem.json and formula.ltlf to {}", dir.display()));
        }
        None => r.problem = Some(ProblemFile::from_problem(&inst.problem)),
    }
    r.formula = Some(formula);
    Ok(r)
}

fn eval_trace(problem: &Path, formula: &str, trace: &Path) -> Outcome {
    let p = load_problem(problem)?;
    let psi = load_spec(formula, &p)?;
    let t = parse_trace(&read(trace)?, &p)?;
    let verdict = if evaluate(&t, &psi)? { Verdict::Yes } else { Verdict::No };
    let mut r = Report::new("eval-trace", verdict);
    r.formula = Some(render_spec(&psi, &p));
    r.trace = Some(states(&p, &t));
    Ok(r)
}
