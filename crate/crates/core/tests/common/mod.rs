//! Independent numerical oracles shared by the integration tests. None of
//! these reuse the closed forms under test: proximal points come from damped
//! Newton or linear solves, projections from dual root finding or Dykstra.

#![allow(dead_code)]

use bestpair::{Pair, Vector};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coordinates uniform in `[-scale, scale]`.
pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector {
    Vector::from(
        (0..n)
            .map(|_| rng.random_range(-scale..=scale))
            .collect::<Vec<_>>(),
    )
}

/// Random pair at a random magnitude, so both small and large gaps occur.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> Pair {
    let scale = [0.05, 1.0, 10.0][rng.random_range(0..3)];
    Pair::new(random_vector(rng, n, scale), random_vector(rng, n, scale))
}

pub fn stack(z: &Pair) -> DVector<f64> {
    DVector::from_iterator(2 * z.dim(), z.x.iter().chain(z.y.iter()).copied())
}

pub fn unstack(v: &DVector<f64>) -> Pair {
    let n = v.len() / 2;
    Pair::new(
        Vector::from(v.rows(0, n).iter().copied().collect::<Vec<_>>()),
        Vector::from(v.rows(n, n).iter().copied().collect::<Vec<_>>()),
    )
}

/// `K` with `wᵀKw = ‖x − y‖²` on stacked `(x, y)`.
fn coupling_matrix(n: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        k[(i, i)] = 1.0;
        k[(n + i, n + i)] = 1.0;
        k[(i, n + i)] = -1.0;
        k[(n + i, i)] = -1.0;
    }
    k
}

/// Minimizer of `α‖x − y‖ + ½‖w − z‖²` by damped Newton on the smoothed
/// objective `α sqrt(‖x − y‖² + μ²) + ½‖w − z‖²`, with μ driven down by
/// continuation.
pub fn oracle_prox_norm_diff(alpha: f64, z: &Pair) -> Pair {
    let n = z.dim();
    let target = stack(z);
    let k = coupling_matrix(n);
    let objective = |w: &DVector<f64>, mu: f64| {
        let d = &k * w;
        let gap_sq = w.dot(&d);
        alpha * (gap_sq + mu * mu).sqrt() + 0.5 * (w - &target).norm_squared()
    };
    let mut w = target.clone();
    let mut mu = 1.0;
    while mu > 1e-13 {
        for _ in 0..100 {
            let kw = &k * &w;
            let r = (w.dot(&kw) + mu * mu).sqrt();
            let grad = &kw * (alpha / r) + (&w - &target);
            if grad.norm() < 1e-15 {
                break;
            }
            let hess = &k * (alpha / r) - (&kw * kw.transpose()) * (alpha / (r * r * r))
                + DMatrix::identity(2 * n, 2 * n);
            // Rounding can spoil definiteness once r is tiny; fall back to a
            // scaled gradient step there.
            let step = match hess.cholesky() {
                Some(ch) => ch.solve(&grad),
                None => &grad / (1.0 + 2.0 * alpha / r),
            };
            let f0 = objective(&w, mu);
            let mut t = 1.0;
            while t > 1e-12 && objective(&(&w - &step * t), mu) > f0 - 0.25 * t * grad.dot(&step) {
                t *= 0.5;
            }
            w -= &step * t;
            if (&step * t).norm() < 1e-16 {
                break;
            }
        }
        mu *= 0.1;
    }
    unstack(&w)
}

/// Minimizer of `α½‖x − y‖² + ½‖w − z‖²` from `(I + αK) w = z`.
pub fn oracle_prox_sqnorm_diff(alpha: f64, z: &Pair) -> Pair {
    let n = z.dim();
    let m = DMatrix::identity(2 * n, 2 * n) + coupling_matrix(n) * alpha;
    unstack(&m.lu().solve(&stack(z)).expect("nonsingular"))
}

/// `∇f₀(w)` for `f₀ = α½‖x − y‖² + ε½‖w‖²`.
pub fn grad_f0(alpha: f64, eps: f64, w: &Pair) -> Pair {
    unstack(&((coupling_matrix(w.dim()) * alpha) * stack(w) + stack(w) * eps))
}

/// Maximizer of `⟨s, w⟩ − f₀(w)` from `(αK + εI) w = s`.
pub fn oracle_argmax_dual(alpha: f64, eps: f64, s: &Pair) -> Pair {
    let n = s.dim();
    let m = coupling_matrix(n) * alpha + DMatrix::identity(2 * n, 2 * n) * eps;
    unstack(&m.lu().solve(&stack(s)).expect("nonsingular"))
}

/// Root of a nonincreasing function on `[0, ∞)` by bracketing and bisection.
fn decreasing_root(f: impl Fn(f64) -> f64) -> f64 {
    if f(0.0) <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Projection onto `{w : ⟨a, w⟩ ≤ b}` through the one-dimensional dual:
/// `w(μ) = z − μa`, and the multiplier solves `⟨a, w(μ)⟩ = b`.
pub fn oracle_halfspace(a: &Vector, b: f64, z: &Vector) -> Vector {
    let w = |mu: f64| z.lin_comb(1.0, -mu, a);
    let mu = decreasing_root(|mu| a.dot(&w(mu)) - b);
    w(mu)
}

/// Projection onto the ball through its dual: `w(μ) = (z + μc)/(1 + μ)`.
pub fn oracle_ball(center: &Vector, radius: f64, z: &Vector) -> Vector {
    let w = |mu: f64| z.lin_comb(1.0 / (1.0 + mu), mu / (1.0 + mu), center);
    let mu = decreasing_root(|mu| w(mu).dist(center) - radius);
    w(mu)
}

/// Per-coordinate minimization of `½(w − z)²` over `[lo, hi]` by bisection on
/// the derivative.
pub fn oracle_box(lower: &[f64], upper: &[f64], z: &Vector) -> Vector {
    let coords = z
        .iter()
        .zip(lower.iter().zip(upper))
        .map(|(&v, (&lo, &hi))| {
            if lo - v >= 0.0 {
                return lo;
            }
            if hi - v <= 0.0 {
                return hi;
            }
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid - v > 0.0 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect::<Vec<_>>();
    Vector::from(coords)
}

/// Dykstra's alternating projections onto two halfspaces.
pub fn dykstra(h: [(&Vector, f64); 2], z: &Vector) -> Vector {
    let proj = |a: &Vector, b: f64, w: &Vector| {
        let e = a.dot(w) - b;
        if e <= 0.0 {
            w.clone()
        } else {
            w.lin_comb(1.0, -e / a.norm_sq(), a)
        }
    };
    let n = z.dim();
    let mut x = z.clone();
    let mut p = Vector::zeros(n);
    let mut q = Vector::zeros(n);
    for _ in 0..2_000_000 {
        let y = proj(h[0].0, h[0].1, &(&x + &p));
        p = &(&x + &p) - &y;
        let next = proj(h[1].0, h[1].1, &(&y + &q));
        q = &(&y + &q) - &next;
        let moved = next.dist(&x);
        x = next;
        if moved < 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}
