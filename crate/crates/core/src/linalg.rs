//! Dense vectors in the base space `Y = R^n` and pairs in `X = Y × Y`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A dense point of `R^n`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

/// A point `(x, y)` of the product space `X = Y × Y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub x: Vector,
    pub y: Vector,
}

impl Vector {
    /// Wraps `coords`, rejecting empty input and non-finite entries.
    pub fn try_new(coords: Vec<f64>) -> Option<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return None;
        }
        Some(Self(coords))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    /// The `i`-th standard basis vector scaled by `value`.
    pub fn unit(n: usize, i: usize, value: f64) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = value;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Vector) {
        debug_assert_eq!(self.dim(), other.dim());
        for (s, o) in self.0.iter_mut().zip(&other.0) {
            *s += a * o;
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: f64, b: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(s, o)| a * s + b * o)
                .collect(),
        )
    }

    pub fn scaled(&self, a: f64) -> Vector {
        Vector(self.0.iter().map(|s| a * s).collect())
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<Vec<f64>> for Vector {
    fn from(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(coords: [f64; N]) -> Self {
        Self(coords.to_vec())
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.lin_comb(1.0, 1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.lin_comb(1.0, -1.0, rhs)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scaled(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scaled(-1.0)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Pair {
    /// Panics if the two components differ in dimension.
    pub fn new(x: Vector, y: Vector) -> Self {
        assert_eq!(x.dim(), y.dim(), "pair components must share a dimension");
        Self { x, y }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(Vector::zeros(n), Vector::zeros(n))
    }

    /// `(w, w)`.
    pub fn diagonal(w: Vector) -> Self {
        Self { x: w.clone(), y: w }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn dot(&self, other: &Pair) -> f64 {
        self.x.dot(&other.x) + self.y.dot(&other.y)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x.norm_sq() + self.y.norm_sq()
    }

    /// The induced norm `sqrt(‖x‖² + ‖y‖²)` on `X`.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Pair) -> f64 {
        ((&self.x - &other.x).norm_sq() + (&self.y - &other.y).norm_sq()).sqrt()
    }

    /// `x − y`.
    pub fn gap(&self) -> Vector {
        &self.x - &self.y
    }

    pub fn axpy(&mut self, a: f64, other: &Pair) {
        self.x.axpy(a, &other.x);
        self.y.axpy(a, &other.y);
    }

    pub fn lin_comb(&self, a: f64, b: f64, other: &Pair) -> Pair {
        Pair {
            x: self.x.lin_comb(a, b, &other.x),
            y: self.y.lin_comb(a, b, &other.y),
        }
    }

    pub fn scaled(&self, a: f64) -> Pair {
        Pair {
            x: self.x.scaled(a),
            y: self.y.scaled(a),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// `(y, x)`.
    pub fn swapped(&self) -> Pair {
        Pair {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }
}

impl Add for &Pair {
    type Output = Pair;
    fn add(self, rhs: &Pair) -> Pair {
        self.lin_comb(1.0, 1.0, rhs)
    }
}

impl Sub for &Pair {
    type Output = Pair;
    fn sub(self, rhs: &Pair) -> Pair {
        self.lin_comb(1.0, -1.0, rhs)
    }
}

impl Mul<&Pair> for f64 {
    type Output = Pair;
    fn mul(self, rhs: &Pair) -> Pair {
        rhs.scaled(self)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Induced norm on `X`.
pub fn pair_norm(p: &Pair) -> f64 {
    p.norm()
}
