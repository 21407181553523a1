//! Proximal distance algorithm and its Nesterov-accelerated variant.

use crate::linalg::Pair;
use crate::operators::prox_norm_diff;
use crate::problem::ProblemInstance;

use super::{averaged_projection, check_finite, Algorithm, Solver, SolverError};

/// `ρ_k = min{1.2^k ρ_0, ρ_max}`.
pub fn penalty_schedule(rho0: f64, rho_max: f64, k: u64) -> f64 {
    (rho0 * 1.2f64.powf(k as f64)).min(rho_max)
}

/// `(k − 1)/(k + 2)` for the 1-based step `k`.
pub fn extrapolation_coefficient(k: u64) -> f64 {
    debug_assert!(k >= 1);
    (k as f64 - 1.0) / (k as f64 + 2.0)
}

pub struct Pda<'p> {
    problem: &'p ProblemInstance,
    alpha: f64,
    rho0: f64,
    rho_max: f64,
    accelerated: bool,
    z: Pair,
    z_prev: Pair,
    k: u64,
}

impl<'p> Pda<'p> {
    pub fn new(
        problem: &'p ProblemInstance,
        alpha: f64,
        rho0: f64,
        rho_max: f64,
        accelerated: bool,
        start: &Pair,
    ) -> Self {
        Self {
            problem,
            alpha,
            rho0,
            rho_max,
            accelerated,
            z: start.clone(),
            z_prev: start.clone(),
            k: 0,
        }
    }
}

impl Solver for Pda<'_> {
    fn algorithm(&self) -> Algorithm {
        if self.accelerated {
            Algorithm::AccPda
        } else {
            Algorithm::Pda
        }
    }

    fn next_cost(&self) -> u64 {
        self.problem.sweep_cost() + 1
    }

    fn step(&mut self) -> Result<u64, SolverError> {
        let base = if self.accelerated {
            let c = extrapolation_coefficient(self.k + 1);
            self.z.lin_comb(1.0 + c, -c, &self.z_prev)
        } else {
            self.z.clone()
        };
        let rho = penalty_schedule(self.rho0, self.rho_max, self.k);
        let next = prox_norm_diff(self.alpha / rho, &averaged_projection(self.problem, &base));
        self.z_prev = std::mem::replace(&mut self.z, next);
        self.k += 1;
        check_finite(&self.z, self.algorithm(), self.k)?;
        Ok(self.next_cost())
    }

    fn primal(&self) -> &Pair {
        &self.z
    }

    fn iterations(&self) -> u64 {
        self.k
    }
}
