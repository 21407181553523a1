//! Stochastic subgradient descent on `α‖x − y‖ + L Σ d_{C_i}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Pair;
use crate::operators::{subgrad_distance, subgrad_norm_diff};
use crate::problem::ProblemInstance;

use super::{check_finite, Algorithm, Solver, SolverError, StepSchedule};

/// Index `i_k ∈ {0, …, m}` drawn uniformly; `0` selects the coupling term.
///
/// Each step owns its own ChaCha stream keyed by `(seed, k)`, so the draw
/// depends on nothing but those two numbers.
pub fn sample_index(seed: u64, k: u64, m: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng.random_range(0..=m)
}

pub struct Ssd<'p> {
    problem: &'p ProblemInstance,
    alpha: f64,
    lipschitz: f64,
    schedule: StepSchedule,
    seed: u64,
    z: Pair,
    k: u64,
}

impl<'p> Ssd<'p> {
    pub fn new(
        problem: &'p ProblemInstance,
        alpha: f64,
        lipschitz: f64,
        schedule: StepSchedule,
        seed: u64,
        start: &Pair,
    ) -> Self {
        Self {
            problem,
            alpha,
            lipschitz,
            schedule,
            seed,
            z: start.clone(),
            k: 0,
        }
    }
}

impl Solver for Ssd<'_> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Ssd
    }

    fn next_cost(&self) -> u64 {
        1
    }

    fn step(&mut self) -> Result<u64, SolverError> {
        let i = sample_index(self.seed, self.k, self.problem.len());
        let g = if i == 0 {
            subgrad_norm_diff(self.alpha, &self.z)
        } else {
            subgrad_distance(self.lipschitz, self.problem.constraint(i - 1), &self.z)
        };
        self.z.axpy(-self.schedule.at(self.k), &g);
        self.k += 1;
        check_finite(&self.z, Algorithm::Ssd, self.k)?;
        Ok(1)
    }

    fn primal(&self) -> &Pair {
        &self.z
    }

    fn iterations(&self) -> u64 {
        self.k
    }
}
