//! Alternating HLWB sweeps (Aharoni–Censor–Jiang).
//!
//! The inner operator `Q_n(w, w')` starts at `w'` and runs `n` anchored steps
//! `w_{i+1} = λ_{i+1} w + (1 − λ_{i+1}) P_{i+1}(w_i)` with `λ_j = 1/(j + 1)`,
//! cycling through the sets of one side. The λ-index restarts at 1 on every
//! sweep. Outer step `k` runs a sweep of length `⌊1.1^k⌋`: even `k` refreshes
//! `y` with a sweep over the `A_i` anchored at `x_k`, odd `k` refreshes `x`
//! with a sweep over the `B_i` anchored at `y_k`. So `y` tracks `A` and `x`
//! tracks `B`; the reported primal is `(y_k, x_k)`.

use crate::linalg::{Pair, Vector};
use crate::problem::{ConvexSetSpec, ProblemInstance};

use super::{check_finite, Algorithm, AnchorMode, Solver, SolverError};

/// `n_k = ⌊1.1^k⌋`.
pub fn acj_sweep_length(k: u64) -> u64 {
    1.1f64.powf(k as f64).floor() as u64
}

/// Runs `n` HLWB steps through `sets` (cyclically), anchored at `anchor` and
/// started at `start`. Returns the final point and the unit operations used.
pub fn hlwb_sweep(
    sets: &[&ConvexSetSpec],
    anchor: &Vector,
    start: &Vector,
    n: u64,
) -> (Vector, u64) {
    let m = sets.len();
    let mut w = start.clone();
    let mut ops = 0;
    for i in 0..n {
        let set = sets[(i as usize) % m];
        let lambda = 1.0 / (i + 2) as f64;
        let projected = set.project(&w);
        w = anchor.lin_comb(lambda, 1.0 - lambda, &projected);
        ops += set.unit_cost();
    }
    (w, ops)
}

fn sweep_cost(sets: &[&ConvexSetSpec], n: u64) -> u64 {
    let m = sets.len() as u64;
    let per_cycle: u64 = sets.iter().map(|s| s.unit_cost()).sum();
    let partial: u64 = sets[..(n % m) as usize].iter().map(|s| s.unit_cost()).sum();
    (n / m) * per_cycle + partial
}

pub struct Acj<'p> {
    a_sets: Vec<&'p ConvexSetSpec>,
    b_sets: Vec<&'p ConvexSetSpec>,
    anchor_mode: AnchorMode,
    x0: Vector,
    y0: Vector,
    x: Vector,
    y: Vector,
    x_prev: Vector,
    y_prev: Vector,
    k: u64,
    primal: Pair,
}

impl<'p> Acj<'p> {
    pub fn new(problem: &'p ProblemInstance, start: &Pair, anchor_mode: AnchorMode) -> Self {
        let a_sets = problem.constraints().iter().map(|c| &c.a_side).collect();
        let b_sets = problem.constraints().iter().map(|c| &c.b_side).collect();
        Self {
            a_sets,
            b_sets,
            anchor_mode,
            x0: start.x.clone(),
            y0: start.y.clone(),
            x: start.x.clone(),
            y: start.y.clone(),
            x_prev: start.x.clone(),
            y_prev: start.y.clone(),
            k: 0,
            primal: start.swapped(),
        }
    }

    /// The raw iterate `(x_k, y_k)`.
    pub fn iterate(&self) -> Pair {
        Pair::new(self.x.clone(), self.y.clone())
    }

    fn start_points(&self) -> (&Vector, &Vector) {
        match self.anchor_mode {
            AnchorMode::Dynamic if self.k > 0 => (&self.y_prev, &self.x_prev),
            _ => (&self.y0, &self.x0),
        }
    }
}

impl Solver for Acj<'_> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Acj
    }

    fn next_cost(&self) -> u64 {
        let n = acj_sweep_length(self.k);
        if self.k % 2 == 1 {
            sweep_cost(&self.b_sets, n)
        } else {
            sweep_cost(&self.a_sets, n)
        }
    }

    fn step(&mut self) -> Result<u64, SolverError> {
        let n = acj_sweep_length(self.k);
        let (x_start, y_start) = self.start_points();
        let ops = if self.k % 2 == 1 {
            let (next, ops) = hlwb_sweep(&self.b_sets, &self.y, y_start, n);
            self.x_prev = std::mem::replace(&mut self.x, next);
            self.y_prev = self.y.clone();
            ops
        } else {
            let (next, ops) = hlwb_sweep(&self.a_sets, &self.x, x_start, n);
            self.y_prev = std::mem::replace(&mut self.y, next);
            self.x_prev = self.x.clone();
            ops
        };
        self.k += 1;
        self.primal = Pair::new(self.y.clone(), self.x.clone());
        check_finite(&self.primal, Algorithm::Acj, self.k)?;
        Ok(ops)
    }

    fn primal(&self) -> &Pair {
        &self.primal
    }

    fn iterations(&self) -> u64 {
        self.k
    }
}
