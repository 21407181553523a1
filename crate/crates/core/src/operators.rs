//! Closed-form projections, proximal maps, subgradient selections and the
//! dual argmax used by the splitting methods.

use thiserror::Error;

use crate::linalg::{Pair, Vector};
use crate::problem::{
    Ball, BoxSet, ConvexSetSpec, Halfspace, NormalGeometry, PairedHalfspaces, ProductConstraint,
};

/// Membership slack for the paired-halfspace case analysis, relative to `‖normal‖`.
const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum OperatorError {
    #[error("dimension mismatch: set has dimension {expected}, point has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("epsilon must be positive for the dual argmax, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("exponent p must be 1 or 2, got {0}")]
    InvalidExponent(u32),
}

/// Exponent of the coupling objective `α‖x − y‖^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    One,
    Two,
}

impl TryFrom<u32> for Exponent {
    type Error = OperatorError;
    fn try_from(p: u32) -> Result<Self, OperatorError> {
        match p {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            other => Err(OperatorError::InvalidExponent(other)),
        }
    }
}

/// Weight `α`, exponent `p` and strong-convexity weight `ε` of the coupling
/// objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveParams {
    alpha: f64,
    p: Exponent,
    epsilon: f64,
}

impl ObjectiveParams {
    pub fn new(alpha: f64, p: Exponent, epsilon: f64) -> Result<Self, OperatorError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(OperatorError::InvalidAlpha(alpha));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(OperatorError::NonPositiveEpsilon(epsilon));
        }
        Ok(Self { alpha, p, epsilon })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

fn check_dim(expected: usize, w: &Vector) -> Result<(), OperatorError> {
    if expected != w.dim() {
        return Err(OperatorError::DimensionMismatch {
            expected,
            found: w.dim(),
        });
    }
    Ok(())
}

impl Halfspace {
    pub fn project(&self, w: &Vector) -> Vector {
        let excess = self.excess(w);
        if excess <= 0.0 {
            return w.clone();
        }
        w.lin_comb(1.0, -excess / self.normal_sq(), self.normal())
    }

    fn contains_loose(&self, w: &Vector) -> bool {
        self.excess(w) <= MEMBERSHIP_TOL * self.normal_sq().sqrt()
    }
}

impl BoxSet {
    pub fn project(&self, w: &Vector) -> Vector {
        let coords = w
            .iter()
            .zip(self.lower().iter().zip(self.upper()))
            .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
            .collect::<Vec<_>>();
        Vector::from(coords)
    }
}

impl Ball {
    pub fn project(&self, w: &Vector) -> Vector {
        let offset = w - self.center();
        let dist = offset.norm();
        if dist <= self.radius() {
            return w.clone();
        }
        self.center().lin_comb(1.0, self.radius() / dist, &offset)
    }
}

impl PairedHalfspaces {
    pub fn project(&self, w: &Vector) -> Vector {
        let (h1, h2) = (self.first(), self.second());
        match self.geometry() {
            NormalGeometry::Parallel { ratio } => {
                let a = h1.normal();
                let s = a.dot(w);
                let (lo, hi) = if ratio > 0.0 {
                    (f64::NEG_INFINITY, h1.offset().min(h2.offset() / ratio))
                } else {
                    (h2.offset() / ratio, h1.offset())
                };
                let target = s.clamp(lo, hi);
                if target == s {
                    return w.clone();
                }
                w.lin_comb(1.0, (target - s) / h1.normal_sq(), a)
            }
            NormalGeometry::Independent { det } => {
                if h1.contains_loose(w) && h2.contains_loose(w) {
                    return w.clone();
                }
                let p1 = h1.project(w);
                if h2.contains_loose(&p1) {
                    return p1;
                }
                let p2 = h2.project(w);
                if h1.contains_loose(&p2) {
                    return p2;
                }
                // Both constraints active: project onto the affine intersection
                // of the two boundary hyperplanes through the Gram system.
                let (a1, a2) = (h1.normal(), h2.normal());
                let g11 = h1.normal_sq();
                let g22 = h2.normal_sq();
                let g12 = a1.dot(a2);
                let r1 = h1.excess(w);
                let r2 = h2.excess(w);
                let mu1 = (g22 * r1 - g12 * r2) / det;
                let mu2 = (g11 * r2 - g12 * r1) / det;
                let mut out = w.lin_comb(1.0, -mu1, a1);
                out.axpy(-mu2, a2);
                out
            }
        }
    }
}

impl ConvexSetSpec {
    /// Projection without a dimension check.
    pub fn project(&self, w: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), w.dim());
        match self {
            ConvexSetSpec::Halfspace(h) => h.project(w),
            ConvexSetSpec::Box(b) => b.project(w),
            ConvexSetSpec::Ball(b) => b.project(w),
            ConvexSetSpec::PairedHalfspaces(p) => p.project(w),
        }
    }

    /// `d_S(w) = ‖w − P_S w‖`.
    pub fn distance(&self, w: &Vector) -> f64 {
        w.dist(&self.project(w))
    }
}

impl ProductConstraint {
    /// `(x, y) ↦ (P_A x, P_B y)`.
    pub fn project(&self, z: &Pair) -> Pair {
        Pair {
            x: self.a_side.project(&z.x),
            y: self.b_side.project(&z.y),
        }
    }

    /// `d_C(x, y) = sqrt(d_A(x)² + d_B(y)²)`.
    pub fn distance(&self, z: &Pair) -> f64 {
        let da = self.a_side.distance(&z.x);
        let db = self.b_side.distance(&z.y);
        da.hypot(db)
    }
}

/// Nearest point of `set` to `w`.
pub fn project(set: &ConvexSetSpec, w: &Vector) -> Result<Vector, OperatorError> {
    check_dim(set.dim(), w)?;
    Ok(set.project(w))
}

pub fn project_product(c: &ProductConstraint, z: &Pair) -> Result<Pair, OperatorError> {
    check_dim(c.dim(), &z.x)?;
    check_dim(c.dim(), &z.y)?;
    Ok(c.project(z))
}

pub fn distance(set: &ConvexSetSpec, w: &Vector) -> Result<f64, OperatorError> {
    check_dim(set.dim(), w)?;
    Ok(set.distance(w))
}

/// Prox of `α‖x − y‖`:
/// `(x, y) − (1 / max{2, ‖x − y‖/α}) · (x − y, y − x)`.
pub fn prox_norm_diff(alpha: f64, z: &Pair) -> Pair {
    debug_assert!(alpha > 0.0);
    let d = z.gap();
    let t = 1.0 / f64::max(2.0, d.norm() / alpha);
    Pair {
        x: z.x.lin_comb(1.0, -t, &d),
        y: z.y.lin_comb(1.0, t, &d),
    }
}

/// Prox of `α½‖x − y‖²`:
/// `((1 + α)x + αy, αx + (1 + α)y) / (2α + 1)`.
pub fn prox_sqnorm_diff(alpha: f64, z: &Pair) -> Pair {
    debug_assert!(alpha > 0.0);
    let s = 1.0 / (2.0 * alpha + 1.0);
    Pair {
        x: z.x.lin_comb((1.0 + alpha) * s, alpha * s, &z.y),
        y: z.y.lin_comb((1.0 + alpha) * s, alpha * s, &z.x),
    }
}

/// Unique maximizer of `⟨(u, v), w⟩ − α½‖w_x − w_y‖² − ε½‖w‖²`.
pub fn argmax_dual(params: &ObjectiveParams, s: &Pair) -> Result<Pair, OperatorError> {
    let (alpha, eps) = (params.alpha, params.epsilon);
    if eps <= 0.0 {
        return Err(OperatorError::NonPositiveEpsilon(eps));
    }
    let c = 1.0 / ((2.0 * alpha + eps) * eps);
    Ok(Pair {
        x: s.x.lin_comb((alpha + eps) * c, alpha * c, &s.y),
        y: s.y.lin_comb((alpha + eps) * c, alpha * c, &s.x),
    })
}

/// `w/‖w‖`, or zero at the origin.
pub fn sign_vec(w: &Vector) -> Vector {
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Vector::zeros(w.dim());
    }
    let u = w.scaled(1.0 / scale);
    let n = u.norm();
    u.scaled(1.0 / n)
}

/// Same selection on `X`, normalizing by the pair norm.
pub fn sign_pair(z: &Pair) -> Pair {
    let scale =
        z.x.iter()
            .chain(z.y.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Pair::zeros(z.dim());
    }
    let z = z.scaled(1.0 / scale);
    let n = z.norm();
    z.scaled(1.0 / n)
}

/// `α(sign(x − y), −sign(x − y)) ∈ ∂(α‖x − y‖)`.
pub fn subgrad_norm_diff(alpha: f64, z: &Pair) -> Pair {
    let s = sign_vec(&z.gap()).scaled(alpha);
    let neg = -&s;
    Pair { x: s, y: neg }
}

/// `L·sign(z − P_C z) ∈ ∂(L·d_C)(z)`.
pub fn subgrad_distance(lipschitz: f64, c: &ProductConstraint, z: &Pair) -> Pair {
    let residual = z - &c.project(z);
    sign_pair(&residual).scaled(lipschitz)
}
