//! Command-line front end: run one algorithm, or several side by side, and
//! write the convergence trace as CSV.
//!
//! Exit codes: 0 success, 2 bad flags, 3 problem-file errors, 4 runtime
//! (solver or I/O) errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::harness::{
    run_solver, BudgetPolicy, HarnessError, MetricKind, RunResult, DEFAULT_DELTA,
};
use crate::linalg::{Pair, Vector};
use crate::operators::Exponent;
use crate::problem::{builtin_boxes, builtin_toy, load_problem, ProblemInstance};
use crate::solvers::{self, Algorithm, AnchorMode, DualStart, SolverConfig, StepSchedule};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("problem error: {0}")]
    Problem(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Problem(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Toy,
    Boxes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricChoice {
    Known,
    Ddelta,
}

#[derive(Debug, Parser)]
#[command(
    name = "bestpair",
    about = "Best approximation pairs for two intersections of convex sets",
    group(clap::ArgGroup::new("source").required(true).args(["problem", "builtin"])),
)]
pub struct Args {
    /// JSON problem file.
    #[arg(long, value_name = "PATH")]
    pub problem: Option<PathBuf>,
    /// Built-in problem.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Dimension (and constraint count) of the boxes problem.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// acj, dr, dpg, fdpg, pda, accpda or ssd.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Extra run for a side-by-side comparison, as
    /// `ALGO[@key=value;key=value…]` (keys: label, alpha, p, lambda, epsilon,
    /// Ldual, rho0, rhomax, L, eta, seed, pair, anchor, dual-start).
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub compare: Vec<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "Ldual")]
    pub l_dual: Option<f64>,
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long)]
    pub rhomax: Option<f64>,
    #[arg(long = "L")]
    pub l_penalty: Option<f64>,
    /// `const:R` or `sqrt` (1/sqrt(k+1)) or `sqrt:R`.
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// ACJ anchor sequence: fixed or dynamic.
    #[arg(long)]
    pub anchor: Option<String>,
    /// DPG/FDPG initial duals: zero or primal.
    #[arg(long = "dual-start")]
    pub dual_start: Option<String>,
    /// Total unit operations.
    #[arg(long)]
    pub budget: u64,
    #[arg(long = "sample-every", default_value_t = 1)]
    pub sample_every: u64,
    #[arg(long, value_enum, default_value_t = MetricChoice::Known)]
    pub metric: MetricChoice,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// `n` coordinates (x₀ = y₀) or `2n` coordinates (x₀ then y₀).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Constraint pairs merged into paired-halfspace projections, `i:j,…`
    /// (1-based).
    #[arg(long)]
    pub pair: Option<String>,
    /// Append the iterate coordinates to each row.
    #[arg(long = "with-iterates")]
    pub with_iterates: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSource {
    File(PathBuf),
    Toy,
    Boxes(usize),
}

impl ProblemSource {
    pub fn load(&self) -> Result<ProblemInstance, CliError> {
        match self {
            ProblemSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Problem(format!("{}: {e}", path.display())))?;
                load_problem(&text)
                    .map_err(|e| CliError::Problem(format!("{}: {e}", path.display())))
            }
            ProblemSource::Toy => Ok(builtin_toy()),
            ProblemSource::Boxes(n) => {
                builtin_boxes(*n).map_err(|e| CliError::Usage(e.to_string()))
            }
        }
    }
}

/// One fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub label: String,
    pub problem: ProblemSource,
    pub config: SolverConfig,
    /// 0-based constraint pairs to merge.
    pub pairs: Vec<(usize, usize)>,
    pub budget: BudgetPolicy,
    pub metric: MetricKind,
    /// Raw start coordinates; `None` is the zero pair.
    pub start: Option<Vec<f64>>,
}

impl RunSpec {
    fn start_pair(&self, n: usize) -> Result<Pair, CliError> {
        match &self.start {
            None => Ok(Pair::zeros(n)),
            Some(c) if c.len() == n => Ok(Pair::diagonal(Vector::from(c.clone()))),
            Some(c) if c.len() == 2 * n => Ok(Pair::new(
                Vector::from(c[..n].to_vec()),
                Vector::from(c[n..].to_vec()),
            )),
            Some(c) => Err(CliError::Usage(format!(
                "--start has {} coordinates; expected {n} or {}",
                c.len(),
                2 * n
            ))),
        }
    }

    /// Applies the pairing (if any) to `base`.
    fn instance(&self, base: &ProblemInstance) -> Result<ProblemInstance, CliError> {
        if self.pairs.is_empty() {
            Ok(base.clone())
        } else {
            base.paired(&self.pairs)
                .map_err(|e| CliError::Usage(e.to_string()))
        }
    }

    fn execute(&self, base: &ProblemInstance) -> Result<RunResult, CliError> {
        let problem = self.instance(base)?;
        let start = self.start_pair(problem.dimension())?;
        let mut solver = solvers::build(&problem, &self.config, &start)
            .map_err(|e| CliError::Usage(format!("{}: {e}", self.label)))?;
        run_solver(solver.as_mut(), &problem, self.budget, self.metric, true).map_err(|e| match e {
            HarnessError::Solver(e) => CliError::Runtime(e.to_string()),
            other => CliError::Usage(format!("{}: {other}", self.label)),
        })
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{key}: cannot parse {value:?} as a number")))
}

fn parse_eta(value: &str) -> Result<StepSchedule, CliError> {
    let value = value.trim();
    if value == "sqrt" {
        return Ok(StepSchedule::InvSqrt(1.0));
    }
    if let Some(c) = value.strip_prefix("sqrt:") {
        return Ok(StepSchedule::InvSqrt(parse_f64("eta", c)?));
    }
    if let Some(c) = value.strip_prefix("const:") {
        return Ok(StepSchedule::Constant(parse_f64("eta", c)?));
    }
    Err(CliError::Usage(format!(
        "eta: expected const:R, sqrt or sqrt:R, got {value:?}"
    )))
}

/// Parses `i:j,k:l` (1-based) into 0-based index pairs.
pub fn parse_pairs(value: &str) -> Result<Vec<(usize, usize)>, CliError> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("pair: expected i:j, got {item:?}")))?;
            let idx = |s: &str| -> Result<usize, CliError> {
                match s.trim().parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(CliError::Usage(format!("pair: bad index {s:?}"))),
                }
            };
            Ok((idx(a)?, idx(b)?))
        })
        .collect()
}

fn parse_coords(value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|c| parse_f64("start", c)).collect()
}

/// Applies one `key=value` parameter to a run.
fn apply_param(
    config: &mut SolverConfig,
    label: &mut String,
    pairs: &mut Vec<(usize, usize)>,
    key: &str,
    value: &str,
) -> Result<(), CliError> {
    match key {
        "label" => *label = value.to_string(),
        "alpha" => config.alpha = parse_f64(key, value)?,
        "p" => {
            let p = value
                .trim()
                .parse::<u32>()
                .map_err(|_| CliError::Usage(format!("p: bad value {value:?}")))?;
            config.p = Exponent::try_from(p).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        "lambda" => config.lambda = parse_f64(key, value)?,
        "epsilon" => config.epsilon = parse_f64(key, value)?,
        "Ldual" => config.l_dual = Some(parse_f64(key, value)?),
        "rho0" => config.rho0 = parse_f64(key, value)?,
        "rhomax" => config.rho_max = parse_f64(key, value)?,
        "L" => config.l_penalty = parse_f64(key, value)?,
        "eta" => config.step = parse_eta(value)?,
        "seed" => {
            config.seed = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("seed: bad value {value:?}")))?
        }
        "anchor" => {
            config.anchor = match value.trim() {
                "fixed" => AnchorMode::Fixed,
                "dynamic" => AnchorMode::Dynamic,
                other => return Err(CliError::Usage(format!("anchor: unknown mode {other:?}"))),
            }
        }
        "dual-start" => {
            config.dual_start = match value.trim() {
                "zero" => DualStart::Zero,
                "primal" => DualStart::Primal,
                other => {
                    return Err(CliError::Usage(format!(
                        "dual-start: unknown mode {other:?}"
                    )))
                }
            }
        }
        "pair" => *pairs = parse_pairs(value)?,
        other => return Err(CliError::Usage(format!("unknown parameter {other:?}"))),
    }
    Ok(())
}

impl Args {
    fn shared_params(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k, v));
            }
        };
        push("alpha", self.alpha.map(|v| v.to_string()));
        push("p", self.p.map(|v| v.to_string()));
        push("lambda", self.lambda.map(|v| v.to_string()));
        push("epsilon", self.epsilon.map(|v| v.to_string()));
        push("Ldual", self.l_dual.map(|v| v.to_string()));
        push("rho0", self.rho0.map(|v| v.to_string()));
        push("rhomax", self.rhomax.map(|v| v.to_string()));
        push("L", self.l_penalty.map(|v| v.to_string()));
        push("eta", self.eta.clone());
        push("seed", self.seed.map(|v| v.to_string()));
        push("anchor", self.anchor.clone());
        push("dual-start", self.dual_start.clone());
        push("pair", self.pair.clone());
        out
    }

    /// Resolves the flags into one run spec per requested algorithm.
    pub fn run_specs(&self) -> Result<Vec<RunSpec>, CliError> {
        let problem = match (&self.problem, self.builtin) {
            (Some(path), None) => ProblemSource::File(path.clone()),
            (None, Some(Builtin::Toy)) => ProblemSource::Toy,
            (None, Some(Builtin::Boxes)) => ProblemSource::Boxes(self.n),
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --problem, --builtin".into(),
                ))
            }
        };
        let budget = BudgetPolicy::new(self.budget, self.sample_every)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let metric = match self.metric {
            MetricChoice::Known => MetricKind::Known,
            MetricChoice::Ddelta => MetricKind::DDelta(self.delta),
        };
        let start = self.start.as_deref().map(parse_coords).transpose()?;
        let shared = self.shared_params();

        let mut requests: Vec<(String, Vec<(String, String)>)> = Vec::new();
        if let Some(a) = &self.algorithm {
            requests.push((a.clone(), Vec::new()));
        }
        for spec in &self.compare {
            let (algo, rest) = spec.split_once('@').unwrap_or((spec.as_str(), ""));
            let params = rest
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|kv| {
                    kv.split_once('=')
                        .map(|(k, v)| (k.trim().to_string(), v.to_string()))
                        .ok_or_else(|| {
                            CliError::Usage(format!("compare: expected key=value, got {kv:?}"))
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            requests.push((algo.to_string(), params));
        }
        if requests.is_empty() {
            return Err(CliError::Usage(
                "give --algorithm or at least one --compare".into(),
            ));
        }

        requests
            .into_iter()
            .map(|(algo, params)| {
                let algorithm: Algorithm = algo
                    .trim()
                    .parse()
                    .map_err(|e: solvers::ConfigError| CliError::Usage(e.to_string()))?;
                let mut config = SolverConfig::new(algorithm);
                let mut label = algorithm.name().to_string();
                let mut pairs = Vec::new();
                for (k, v) in shared
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .chain(params)
                {
                    apply_param(&mut config, &mut label, &mut pairs, &k, &v)?;
                }
                Ok(RunSpec {
                    label,
                    problem: problem.clone(),
                    config,
                    pairs,
                    budget,
                    metric,
                    start: start.clone(),
                })
            })
            .collect()
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `unit,metric[,x1…,y1…]` with a header row.
pub fn trace_csv(result: &RunResult, with_iterates: bool) -> String {
    let mut out = String::from("unit,metric");
    if with_iterates {
        let n = result.final_primal.dim();
        for i in 1..=n {
            write!(out, ",x{i}").unwrap();
        }
        for i in 1..=n {
            write!(out, ",y{i}").unwrap();
        }
    }
    out.push('\n');
    for r in &result.records {
        write!(out, "{},{}", r.unit_index, fmt_num(r.metric_value)).unwrap();
        if with_iterates {
            if let Some(z) = &r.iterate {
                for v in z.x.iter().chain(z.y.iter()) {
                    write!(out, ",{}", fmt_num(*v)).unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Runs every spec (concurrently) and returns their results in spec order.
pub fn run_all(specs: &[RunSpec]) -> Result<Vec<RunResult>, CliError> {
    let first = specs
        .first()
        .ok_or_else(|| CliError::Usage("nothing to run".into()))?;
    if let Some(bad) = specs
        .iter()
        .find(|s| s.problem != first.problem || s.budget != first.budget)
    {
        return Err(CliError::Usage(format!(
            "run {:?} does not share the problem and budget of {:?}",
            bad.label, first.label
        )));
    }
    let base = first.problem.load()?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|spec| {
                let base = &base;
                scope.spawn(move || spec.execute(base))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    })
}

/// One unit column plus one metric column per spec. Runs that stop early
/// (ACJ can leave budget unspent) leave their trailing cells empty. A single
/// spec gives the plain `unit,metric` trace.
pub fn emit_compare(specs: &[RunSpec]) -> Result<String, CliError> {
    let results = run_all(specs)?;
    Ok(compare_csv(specs, &results))
}

fn compare_csv(specs: &[RunSpec], results: &[RunResult]) -> String {
    if let [only] = results {
        return trace_csv(only, false);
    }
    let mut out = String::from("unit");
    for s in specs {
        write!(out, ",{}", s.label).unwrap();
    }
    out.push('\n');
    let rows = results.iter().map(|r| r.records.len()).max().unwrap_or(0);
    let every = specs[0].budget.sample_every();
    for row in 0..rows {
        write!(out, "{}", (row as u64 + 1) * every).unwrap();
        for r in results {
            out.push(',');
            if let Some(rec) = r.records.get(row) {
                out.push_str(&fmt_num(rec.metric_value));
            }
        }
        out.push('\n');
    }
    out
}

fn execute(args: &Args) -> Result<String, CliError> {
    let specs = args.run_specs()?;
    if args.with_iterates && specs.len() > 1 {
        return Err(CliError::Usage("--with-iterates needs a single run".into()));
    }
    let results = run_all(&specs)?;
    for (spec, r) in specs.iter().zip(&results) {
        eprintln!(
            "{}: {} iterations, {} units consumed, {} unspent, metric {:.6e} -> {:.6e}",
            spec.label,
            r.iterations,
            r.consumed_units,
            r.remainder_units,
            r.initial_metric,
            r.final_metric
        );
    }
    Ok(if args.with_iterates {
        trace_csv(&results[0], true)
    } else {
        compare_csv(&specs, &results)
    })
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&args).and_then(|csv| {
        match &args.out {
            Some(path) => std::fs::write(path, csv),
            None => stdout.write_all(csv.as_bytes()),
        }
        .map_err(|e| CliError::Runtime(e.to_string()))
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bestpair: {e}");
            e.exit_code()
        }
    }
}
