//! Douglas–Rachford in the product space `X^{m+1}`: block 0 carries the
//! coupling objective, blocks `1..=m` the indicators of the `C_i`.

use crate::linalg::Pair;
use crate::operators::{prox_norm_diff, prox_sqnorm_diff, Exponent};
use crate::problem::ProblemInstance;

use super::{check_finite, Algorithm, Solver, SolverError};

pub struct Dr<'p> {
    problem: &'p ProblemInstance,
    alpha: f64,
    p: Exponent,
    lambda: f64,
    blocks: Vec<Pair>,
    mean: Pair,
    k: u64,
}

impl<'p> Dr<'p> {
    /// Every block starts at `start`.
    pub fn new(
        problem: &'p ProblemInstance,
        alpha: f64,
        p: Exponent,
        lambda: f64,
        start: &Pair,
    ) -> Self {
        let blocks = vec![start.clone(); problem.len() + 1];
        Self::with_blocks(problem, alpha, p, lambda, blocks)
    }

    /// Starts from explicit blocks `(z_0, z_1, …, z_m)`.
    pub fn with_blocks(
        problem: &'p ProblemInstance,
        alpha: f64,
        p: Exponent,
        lambda: f64,
        blocks: Vec<Pair>,
    ) -> Self {
        assert_eq!(blocks.len(), problem.len() + 1, "DR needs m + 1 blocks");
        let mean = block_mean(&blocks);
        Self {
            problem,
            alpha,
            p,
            lambda,
            blocks,
            mean,
            k: 0,
        }
    }

    pub fn blocks(&self) -> &[Pair] {
        &self.blocks
    }

    fn prox(&self, i: usize, z: &Pair) -> Pair {
        if i == 0 {
            match self.p {
                Exponent::One => prox_norm_diff(self.alpha, z),
                // α‖x − y‖² = (2α)·½‖x − y‖²
                Exponent::Two => prox_sqnorm_diff(2.0 * self.alpha, z),
            }
        } else {
            self.problem.constraint(i - 1).project(z)
        }
    }
}

fn block_mean(blocks: &[Pair]) -> Pair {
    let mut acc = Pair::zeros(blocks[0].dim());
    for b in blocks {
        acc.axpy(1.0, b);
    }
    acc.scaled(1.0 / blocks.len() as f64)
}

impl Solver for Dr<'_> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Dr
    }

    fn next_cost(&self) -> u64 {
        self.problem.sweep_cost() + 1
    }

    fn step(&mut self) -> Result<u64, SolverError> {
        for i in 0..self.blocks.len() {
            let reflected = self.mean.lin_comb(2.0, -1.0, &self.blocks[i]);
            let shadow = self.prox(i, &reflected);
            let step = &shadow - &self.mean;
            self.blocks[i].axpy(self.lambda, &step);
        }
        self.mean = block_mean(&self.blocks);
        self.k += 1;
        check_finite(&self.mean, Algorithm::Dr, self.k)?;
        Ok(self.next_cost())
    }

    fn primal(&self) -> &Pair {
        &self.mean
    }

    fn iterations(&self) -> u64 {
        self.k
    }
}
