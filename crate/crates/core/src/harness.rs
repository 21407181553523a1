//! Budgeted runs and the progress metrics.
//!
//! Every algorithm is charged in unit operations (see [`crate::solvers`]).
//! An iteration costing `u` units occupies `u` consecutive unit slots, and
//! all of them carry the metric of the iteration's final output: nothing
//! finer-grained is observable. A trace samples those slots every
//! `sample_every` units.

use thiserror::Error;

use crate::linalg::Pair;
use crate::problem::ProblemInstance;
use crate::solvers::{self, Algorithm, ConfigError, Solver, SolverConfig, SolverError};

/// Default feasibility weight `δ` of the D_δ metric.
pub const DEFAULT_DELTA: f64 = 0.1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("the known-solution metric needs a problem with a known solution")]
    MissingKnownSolution,
    #[error("budget of {total} units cannot pay for the first iteration ({first} units)")]
    BudgetTooSmall { total: u64, first: u64 },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("delta must be positive and finite, got {0}")]
    InvalidDelta(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetPolicy {
    total_units: u64,
    sample_every: u64,
}

impl BudgetPolicy {
    pub fn new(total_units: u64, sample_every: u64) -> Result<Self, HarnessError> {
        if total_units == 0 || sample_every == 0 {
            return Err(HarnessError::InvalidBudget(
                "total units and sample interval must be positive".into(),
            ));
        }
        if sample_every > total_units {
            return Err(HarnessError::InvalidBudget(format!(
                "sample interval {sample_every} exceeds total {total_units}"
            )));
        }
        Ok(Self {
            total_units,
            sample_every,
        })
    }

    /// Records every unit slot.
    pub fn every_unit(total_units: u64) -> Result<Self, HarnessError> {
        Self::new(total_units, 1)
    }

    pub fn total_units(&self) -> u64 {
        self.total_units
    }

    pub fn sample_every(&self) -> u64 {
        self.sample_every
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricKind {
    /// Distance to the known solution.
    Known,
    /// `D_δ` with the given `δ`.
    DDelta(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    /// 1-based unit slot.
    pub unit_index: u64,
    pub metric_value: f64,
    pub iterate: Option<Pair>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub records: Vec<TraceRecord>,
    pub iterations: u64,
    pub consumed_units: u64,
    /// Budget left unspent because the next iteration did not fit.
    pub remainder_units: u64,
    pub initial_metric: f64,
    pub final_metric: f64,
    pub final_primal: Pair,
}

/// `‖z − solution‖` on `X`.
pub fn metric_known(z: &Pair, solution: &Pair) -> f64 {
    z.dist(solution)
}

/// `D_δ(x, y) = ‖x − y‖ + (1/δ) Σ_i d_{C_i}(x, y)`.
pub fn metric_ddelta(z: &Pair, problem: &ProblemInstance, delta: f64) -> f64 {
    let infeasibility: f64 = problem.constraints().iter().map(|c| c.distance(z)).sum();
    z.gap().norm() + infeasibility / delta
}

struct Metric<'a> {
    kind: MetricKind,
    problem: &'a ProblemInstance,
}

impl<'a> Metric<'a> {
    fn new(kind: MetricKind, problem: &'a ProblemInstance) -> Result<Self, HarnessError> {
        match kind {
            MetricKind::Known if problem.known_solution().is_none() => {
                Err(HarnessError::MissingKnownSolution)
            }
            MetricKind::DDelta(d) if !(d > 0.0 && d.is_finite()) => {
                Err(HarnessError::InvalidDelta(d))
            }
            _ => Ok(Self { kind, problem }),
        }
    }

    fn eval(&self, z: &Pair) -> f64 {
        match self.kind {
            MetricKind::Known => metric_known(z, self.problem.known_solution().unwrap()),
            MetricKind::DDelta(d) => metric_ddelta(z, self.problem, d),
        }
    }
}

/// Builds the solver for `config` and runs it from `start` until the next
/// iteration would exceed the budget.
pub fn run(
    problem: &ProblemInstance,
    config: &SolverConfig,
    budget: BudgetPolicy,
    metric: MetricKind,
    start: &Pair,
) -> Result<RunResult, HarnessError> {
    let mut solver = solvers::build(problem, config, start)?;
    run_solver(solver.as_mut(), problem, budget, metric, false)
}

/// Drives an existing solver. With `record_iterates`, each trace record also
/// carries the primal pair it was measured on.
pub fn run_solver(
    solver: &mut dyn Solver,
    problem: &ProblemInstance,
    budget: BudgetPolicy,
    metric: MetricKind,
    record_iterates: bool,
) -> Result<RunResult, HarnessError> {
    let metric = Metric::new(metric, problem)?;
    let total = budget.total_units;
    let every = budget.sample_every;
    let first = solver.next_cost();
    if first > total {
        return Err(HarnessError::BudgetTooSmall { total, first });
    }
    let initial_metric = metric.eval(solver.primal());
    let mut records = Vec::with_capacity((total / every) as usize);
    let mut consumed = 0u64;
    loop {
        let cost = solver.next_cost();
        if consumed + cost > total {
            break;
        }
        let used = solver.step()?;
        debug_assert_eq!(used, cost);
        let end = consumed + used;
        // Sampled slots in (consumed, end].
        let mut slot = (consumed / every + 1) * every;
        if slot <= end {
            let value = metric.eval(solver.primal());
            while slot <= end {
                records.push(TraceRecord {
                    unit_index: slot,
                    metric_value: value,
                    iterate: record_iterates.then(|| solver.primal().clone()),
                });
                slot += every;
            }
        }
        consumed = end;
        if used == 0 {
            break;
        }
    }
    Ok(RunResult {
        algorithm: solver.algorithm(),
        records,
        iterations: solver.iterations(),
        consumed_units: consumed,
        remainder_units: total - consumed,
        initial_metric,
        final_metric: metric.eval(solver.primal()),
        final_primal: solver.primal().clone(),
    })
}
