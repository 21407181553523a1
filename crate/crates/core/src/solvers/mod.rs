//! The iteration schemes. Every solver is a deterministic stepper: one call
//! to [`Solver::step`] performs one outer iteration, reports how many unit
//! operations it consumed and updates the primal pair.
//!
//! Unit operations follow one convention across all methods: a projection
//! onto a single `A_i` or `B_i` costs one unit (a paired-halfspace
//! projection costs two), and so does one prox, argmax or subgradient
//! evaluation of the coupling objective.

mod acj;
mod config;
mod dr;
mod dual;
mod pda;
mod ssd;

use thiserror::Error;

pub use acj::{acj_sweep_length, hlwb_sweep, Acj};
pub use config::{Algorithm, AnchorMode, ConfigError, DualStart, SolverConfig, StepSchedule};
pub use dr::Dr;
pub use dual::{DualGradient, DualVariant};
pub use pda::{extrapolation_coefficient, penalty_schedule, Pda};
pub use ssd::{sample_index, Ssd};

use crate::linalg::Pair;
use crate::problem::ProblemInstance;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("{algorithm} produced a non-finite iterate at iteration {iteration}")]
    NonFinite {
        algorithm: Algorithm,
        iteration: u64,
    },
}

/// A running instance of one algorithm on one problem.
pub trait Solver: Send {
    fn algorithm(&self) -> Algorithm;

    /// Unit operations the next call to [`Solver::step`] will consume.
    fn next_cost(&self) -> u64;

    /// Performs one iteration and returns the unit operations it used.
    fn step(&mut self) -> Result<u64, SolverError>;

    /// Current primal estimate `(a, b)`, with `a` approximating a point of
    /// `A` and `b` a point of `B`.
    fn primal(&self) -> &Pair;

    /// Number of completed iterations.
    fn iterations(&self) -> u64;
}

/// Instantiates the solver described by `config` on `problem`, started at
/// `start`.
pub fn build<'p>(
    problem: &'p ProblemInstance,
    config: &SolverConfig,
    start: &Pair,
) -> Result<Box<dyn Solver + 'p>, ConfigError> {
    config.validate(problem.len())?;
    if start.dim() != problem.dimension() || !start.is_finite() {
        return Err(ConfigError::BadStart {
            expected: problem.dimension(),
            found: start.dim(),
        });
    }
    Ok(match config.algorithm {
        Algorithm::Acj => Box::new(Acj::new(problem, start, config.anchor)),
        Algorithm::Dr => Box::new(Dr::new(
            problem,
            config.alpha,
            config.p,
            config.lambda,
            start,
        )),
        Algorithm::Dpg | Algorithm::Fdpg => {
            let variant = if config.algorithm == Algorithm::Dpg {
                DualVariant::Plain
            } else {
                DualVariant::Accelerated
            };
            Box::new(DualGradient::new(
                problem,
                config.objective()?,
                config.l_dual(problem.len()),
                variant,
                config.dual_start,
                start,
            ))
        }
        Algorithm::Pda | Algorithm::AccPda => Box::new(Pda::new(
            problem,
            config.alpha,
            config.rho0,
            config.rho_max,
            config.algorithm == Algorithm::AccPda,
            start,
        )),
        Algorithm::Ssd => Box::new(Ssd::new(
            problem,
            config.alpha,
            config.l_penalty,
            config.step,
            config.seed,
            start,
        )),
    })
}

/// `(1/m) Σ_i P_{C_i} z`.
pub(crate) fn averaged_projection(problem: &ProblemInstance, z: &Pair) -> Pair {
    let mut acc = Pair::zeros(problem.dimension());
    for c in problem.constraints() {
        acc.axpy(1.0, &c.project(z));
    }
    acc.scaled(1.0 / problem.len() as f64)
}

fn check_finite(p: &Pair, algorithm: Algorithm, iteration: u64) -> Result<(), SolverError> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(SolverError::NonFinite {
            algorithm,
            iteration,
        })
    }
}
