//! Dual proximal gradient (DPG) and its FISTA-accelerated variant (FDPG),
//! in primal representation, for the strongly convex objective
//! `α½‖x − y‖² + ε½(‖x‖² + ‖y‖²)` restricted to `⋂ C_i`.

use crate::linalg::Pair;
use crate::operators::{argmax_dual, ObjectiveParams};
use crate::problem::ProblemInstance;

use super::{check_finite, Algorithm, DualStart, Solver, SolverError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualVariant {
    Plain,
    Accelerated,
    /// FDPG with the extrapolation coefficient forced to zero.
    ZeroMomentum,
}

pub struct DualGradient<'p> {
    problem: &'p ProblemInstance,
    params: ObjectiveParams,
    l: f64,
    variant: DualVariant,
    z: Vec<Pair>,
    w: Vec<Pair>,
    t: f64,
    primal: Pair,
    k: u64,
}

impl<'p> DualGradient<'p> {
    pub fn new(
        problem: &'p ProblemInstance,
        params: ObjectiveParams,
        l: f64,
        variant: DualVariant,
        dual_start: DualStart,
        start: &Pair,
    ) -> Self {
        let m = problem.len();
        let block = match dual_start {
            DualStart::Zero => Pair::zeros(problem.dimension()),
            DualStart::Primal => {
                // ∇f_0 at the start, split evenly: the argmax then returns it.
                let (a, e) = (params.alpha(), params.epsilon());
                let grad = Pair {
                    x: start.x.lin_comb(a + e, -a, &start.y),
                    y: start.y.lin_comb(a + e, -a, &start.x),
                };
                grad.scaled(1.0 / m as f64)
            }
        };
        Self::with_duals(problem, params, l, variant, vec![block; m])
    }

    pub fn with_duals(
        problem: &'p ProblemInstance,
        params: ObjectiveParams,
        l: f64,
        variant: DualVariant,
        z: Vec<Pair>,
    ) -> Self {
        assert_eq!(z.len(), problem.len(), "one dual block per constraint");
        let primal = argmax_dual(&params, &sum(&z)).expect("epsilon validated positive");
        Self {
            problem,
            params,
            l,
            variant,
            w: z.clone(),
            z,
            t: 1.0,
            primal,
            k: 0,
        }
    }

    pub fn duals(&self) -> &[Pair] {
        &self.z
    }

    /// Current momentum parameter `t_k`.
    pub fn momentum(&self) -> f64 {
        self.t
    }

    fn argmax(&self, s: &Pair) -> Pair {
        argmax_dual(&self.params, s).expect("epsilon validated positive")
    }

    /// `z_i − x/L + P_{C_i}(x − L z_i)/L` for every block.
    fn dual_step(&self, blocks: &[Pair], x: &Pair) -> Vec<Pair> {
        let inv_l = 1.0 / self.l;
        blocks
            .iter()
            .zip(self.problem.constraints())
            .map(|(zi, c)| {
                let probe = x.lin_comb(1.0, -self.l, zi);
                let mut next = zi.lin_comb(1.0, -inv_l, x);
                next.axpy(inv_l, &c.project(&probe));
                next
            })
            .collect()
    }
}

fn sum(blocks: &[Pair]) -> Pair {
    let mut acc = Pair::zeros(blocks[0].dim());
    for b in blocks {
        acc.axpy(1.0, b);
    }
    acc
}

impl Solver for DualGradient<'_> {
    fn algorithm(&self) -> Algorithm {
        match self.variant {
            DualVariant::Plain => Algorithm::Dpg,
            _ => Algorithm::Fdpg,
        }
    }

    fn next_cost(&self) -> u64 {
        self.problem.sweep_cost() + 1
    }

    fn step(&mut self) -> Result<u64, SolverError> {
        match self.variant {
            DualVariant::Plain => {
                let x = self.argmax(&sum(&self.z));
                self.z = self.dual_step(&self.z, &x);
                self.primal = x;
            }
            DualVariant::Accelerated | DualVariant::ZeroMomentum => {
                let u = self.argmax(&sum(&self.w));
                let z_next = self.dual_step(&self.w, &u);
                let t_next = 0.5 * (1.0 + (1.0 + 4.0 * self.t * self.t).sqrt());
                let coef = if self.variant == DualVariant::Accelerated {
                    (self.t - 1.0) / t_next
                } else {
                    0.0
                };
                self.w = z_next
                    .iter()
                    .zip(&self.z)
                    .map(|(zn, zo)| zn.lin_comb(1.0 + coef, -coef, zo))
                    .collect();
                self.z = z_next;
                self.t = t_next;
                self.primal = self.argmax(&sum(&self.z));
            }
        }
        self.k += 1;
        check_finite(&self.primal, self.algorithm(), self.k)?;
        Ok(self.next_cost())
    }

    fn primal(&self) -> &Pair {
        &self.primal
    }

    fn iterations(&self) -> u64 {
        self.k
    }
}
