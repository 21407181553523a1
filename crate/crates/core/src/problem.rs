//! Constraint sets, product constraints and problem instances, plus the JSON
//! problem-file format and the two built-in test problems.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Pair, Vector};

/// Tolerance used when checking that a supplied known solution is feasible.
pub const KNOWN_SOLUTION_TOL: f64 = 1e-9;

/// Relative tolerance for deciding that two halfspace normals are parallel.
const PARALLEL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("malformed problem document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("problem has no constraints on either side")]
    NoConstraints,
    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("{0}: non-finite coordinate")]
    NonFinite(String),
    #[error("halfspace normal has zero norm")]
    ZeroNormal,
    #[error("box has lower bound above upper bound in coordinate {0}")]
    InvertedBox(usize),
    #[error("box bound in coordinate {0} is NaN or an infinity on the wrong side")]
    InvalidBoxBound(usize),
    #[error("ball radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("the two paired halfspaces have empty intersection")]
    EmptyPairedIntersection,
    #[error("known solution violates {side}-constraint {index} (distance {distance:e})")]
    InfeasibleKnownSolution {
        side: char,
        index: usize,
        distance: f64,
    },
    #[error("cannot pair constraint {0}: both sides must be plain halfspaces")]
    NotPairable(usize),
    #[error("invalid constraint pairing: {0}")]
    BadPairing(String),
}

/// `{w : ⟨normal, w⟩ ≤ offset}` with a nonzero normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    normal: Vector,
    offset: f64,
    normal_sq: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self, ProblemError> {
        if !normal.is_finite() || !offset.is_finite() {
            return Err(ProblemError::NonFinite("halfspace".into()));
        }
        let normal_sq = normal.norm_sq();
        if normal_sq == 0.0 {
            return Err(ProblemError::ZeroNormal);
        }
        Ok(Self {
            normal,
            offset,
            normal_sq,
        })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `‖normal‖²`, cached.
    pub fn normal_sq(&self) -> f64 {
        self.normal_sq
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `⟨normal, w⟩ − offset`; positive means violated.
    pub fn excess(&self, w: &Vector) -> f64 {
        self.normal.dot(w) - self.offset
    }
}

/// Componentwise bounds; infinite entries mean the coordinate is unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxSet {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ProblemError> {
        if lower.len() != upper.len() {
            return Err(ProblemError::DimensionMismatch {
                context: "box bounds".into(),
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(ProblemError::InvalidBoxBound(i));
            }
            if lo > hi {
                return Err(ProblemError::InvertedBox(i));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The whole space `R^n`.
    pub fn unbounded(n: usize) -> Self {
        Self {
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_unbounded(&self) -> bool {
        self.lower.iter().all(|l| *l == f64::NEG_INFINITY)
            && self.upper.iter().all(|u| *u == f64::INFINITY)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    center: Vector,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self, ProblemError> {
        if !center.is_finite() {
            return Err(ProblemError::NonFinite("ball center".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ProblemError::InvalidRadius(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// How the normals of two halfspaces relate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum NormalGeometry {
    /// Linearly independent; `det` is the Gram determinant.
    Independent { det: f64 },
    /// `second.normal = ratio · first.normal`.
    Parallel { ratio: f64 },
}

/// Intersection of two halfspaces, projected onto in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedHalfspaces {
    first: Halfspace,
    second: Halfspace,
    geometry: NormalGeometry,
}

impl PairedHalfspaces {
    pub fn new(first: Halfspace, second: Halfspace) -> Result<Self, ProblemError> {
        if first.dim() != second.dim() {
            return Err(ProblemError::DimensionMismatch {
                context: "paired halfspaces".into(),
                expected: first.dim(),
                found: second.dim(),
            });
        }
        let g11 = first.normal_sq;
        let g22 = second.normal_sq;
        let g12 = first.normal.dot(&second.normal);
        let det = g11 * g22 - g12 * g12;
        let geometry = if det <= PARALLEL_TOL * g11 * g22 {
            NormalGeometry::Parallel { ratio: g12 / g11 }
        } else {
            NormalGeometry::Independent { det }
        };
        match geometry {
            NormalGeometry::Independent { det } => {
                // Both boundaries meet: solve the 2×2 system for a common point.
                let c1 = (first.offset * g22 - second.offset * g12) / det;
                let c2 = (second.offset * g11 - first.offset * g12) / det;
                if !(c1.is_finite() && c2.is_finite()) {
                    return Err(ProblemError::EmptyPairedIntersection);
                }
            }
            NormalGeometry::Parallel { ratio } => {
                // ratio < 0: slab ⟨a1,w⟩ ∈ [offset2/ratio, offset1].
                if ratio < 0.0 && second.offset / ratio > first.offset {
                    return Err(ProblemError::EmptyPairedIntersection);
                }
            }
        }
        Ok(Self {
            first,
            second,
            geometry,
        })
    }

    pub fn first(&self) -> &Halfspace {
        &self.first
    }

    pub fn second(&self) -> &Halfspace {
        &self.second
    }

    pub(crate) fn geometry(&self) -> NormalGeometry {
        self.geometry
    }
}

/// One simple closed convex set with a closed-form projector.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSetSpec {
    Halfspace(Halfspace),
    Box(BoxSet),
    Ball(Ball),
    PairedHalfspaces(PairedHalfspaces),
}

impl ConvexSetSpec {
    pub fn halfspace(normal: impl Into<Vector>, offset: f64) -> Result<Self, ProblemError> {
        Halfspace::new(normal.into(), offset).map(Self::Halfspace)
    }

    pub fn unbounded(n: usize) -> Self {
        Self::Box(BoxSet::unbounded(n))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Halfspace(h) => h.dim(),
            Self::Box(b) => b.lower.len(),
            Self::Ball(b) => b.center.dim(),
            Self::PairedHalfspaces(p) => p.first.dim(),
        }
    }

    /// Unit operations charged for one projection onto this set. A paired
    /// projection is worth two ordinary ones.
    pub fn unit_cost(&self) -> u64 {
        match self {
            Self::PairedHalfspaces(_) => 2,
            _ => 1,
        }
    }
}

/// `C_i = A_i × B_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductConstraint {
    pub a_side: ConvexSetSpec,
    pub b_side: ConvexSetSpec,
}

impl ProductConstraint {
    pub fn new(a_side: ConvexSetSpec, b_side: ConvexSetSpec) -> Result<Self, ProblemError> {
        if a_side.dim() != b_side.dim() {
            return Err(ProblemError::DimensionMismatch {
                context: "product constraint".into(),
                expected: a_side.dim(),
                found: b_side.dim(),
            });
        }
        Ok(Self { a_side, b_side })
    }

    pub fn dim(&self) -> usize {
        self.a_side.dim()
    }

    pub fn unit_cost(&self) -> u64 {
        self.a_side.unit_cost() + self.b_side.unit_cost()
    }
}

/// Two intersections `A = ⋂ A_i`, `B = ⋂ B_i` over a common index set.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    dimension: usize,
    constraints: Vec<ProductConstraint>,
    known_solution: Option<Pair>,
}

impl ProblemInstance {
    /// Builds an instance from the two constraint lists. The shorter list is
    /// padded with whole-space boxes.
    pub fn new(
        dimension: usize,
        a_sets: Vec<ConvexSetSpec>,
        b_sets: Vec<ConvexSetSpec>,
        known_solution: Option<Pair>,
    ) -> Result<Self, ProblemError> {
        if dimension == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        let m = a_sets.len().max(b_sets.len());
        if m == 0 {
            return Err(ProblemError::NoConstraints);
        }
        let pad = |mut sets: Vec<ConvexSetSpec>| {
            sets.resize_with(m, || ConvexSetSpec::unbounded(dimension));
            sets
        };
        let constraints = pad(a_sets)
            .into_iter()
            .zip(pad(b_sets))
            .map(|(a, b)| {
                check_dim(&a, dimension)?;
                check_dim(&b, dimension)?;
                ProductConstraint::new(a, b)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_constraints(dimension, constraints, known_solution)
    }

    pub fn from_constraints(
        dimension: usize,
        constraints: Vec<ProductConstraint>,
        known_solution: Option<Pair>,
    ) -> Result<Self, ProblemError> {
        if dimension == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        if constraints.is_empty() {
            return Err(ProblemError::NoConstraints);
        }
        for c in &constraints {
            check_dim(&c.a_side, dimension)?;
            check_dim(&c.b_side, dimension)?;
        }
        if let Some(sol) = &known_solution {
            for (v, side) in [(&sol.x, "known_solution.x"), (&sol.y, "known_solution.y")] {
                if v.dim() != dimension {
                    return Err(ProblemError::DimensionMismatch {
                        context: side.into(),
                        expected: dimension,
                        found: v.dim(),
                    });
                }
                if !v.is_finite() {
                    return Err(ProblemError::NonFinite(side.into()));
                }
            }
            for (i, c) in constraints.iter().enumerate() {
                let da = c.a_side.distance(&sol.x);
                if da > KNOWN_SOLUTION_TOL {
                    return Err(ProblemError::InfeasibleKnownSolution {
                        side: 'A',
                        index: i + 1,
                        distance: da,
                    });
                }
                let db = c.b_side.distance(&sol.y);
                if db > KNOWN_SOLUTION_TOL {
                    return Err(ProblemError::InfeasibleKnownSolution {
                        side: 'B',
                        index: i + 1,
                        distance: db,
                    });
                }
            }
        }
        Ok(Self {
            dimension,
            constraints,
            known_solution,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of product constraints `m`.
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn constraints(&self) -> &[ProductConstraint] {
        &self.constraints
    }

    pub fn constraint(&self, i: usize) -> &ProductConstraint {
        &self.constraints[i]
    }

    pub fn known_solution(&self) -> Option<&Pair> {
        self.known_solution.as_ref()
    }

    /// `A_n` under the cyclic convention `A_n = A_{1 + rem(n − 1, m)}`, for a
    /// 1-based position `n ≥ 1`.
    pub fn cyclic(&self, n: usize) -> &ProductConstraint {
        &self.constraints[cyclic_index(n, self.constraints.len())]
    }

    /// Unit cost of projecting onto every `A_i` and `B_i` once.
    pub fn sweep_cost(&self) -> u64 {
        self.constraints
            .iter()
            .map(ProductConstraint::unit_cost)
            .sum()
    }

    /// Merges constraints `i` and `j` (0-based) into one product of paired
    /// halfspaces `(A_i ∩ A_j) × (B_i ∩ B_j)` for every listed pair. Unlisted
    /// constraints are kept; the merged constraint takes the place of `i`.
    pub fn paired(&self, pairs: &[(usize, usize)]) -> Result<Self, ProblemError> {
        let m = self.constraints.len();
        let mut partner: Vec<Option<usize>> = vec![None; m];
        let mut used = vec![false; m];
        for &(i, j) in pairs {
            if i >= m || j >= m {
                return Err(ProblemError::BadPairing(format!(
                    "index out of range in {}:{} (m = {m})",
                    i + 1,
                    j + 1
                )));
            }
            if i == j || used[i] || used[j] {
                return Err(ProblemError::BadPairing(format!(
                    "constraint used twice in {}:{}",
                    i + 1,
                    j + 1
                )));
            }
            used[i] = true;
            used[j] = true;
            partner[i] = Some(j);
            partner[j] = Some(usize::MAX);
        }
        let as_half = |s: &ConvexSetSpec, idx: usize| match s {
            ConvexSetSpec::Halfspace(h) => Ok(h.clone()),
            _ => Err(ProblemError::NotPairable(idx + 1)),
        };
        let mut out = Vec::with_capacity(m);
        for (i, c) in self.constraints.iter().enumerate() {
            match partner[i] {
                None => out.push(c.clone()),
                Some(usize::MAX) => {}
                Some(j) => {
                    let d = &self.constraints[j];
                    let a = PairedHalfspaces::new(as_half(&c.a_side, i)?, as_half(&d.a_side, j)?)?;
                    let b = PairedHalfspaces::new(as_half(&c.b_side, i)?, as_half(&d.b_side, j)?)?;
                    out.push(ProductConstraint::new(
                        ConvexSetSpec::PairedHalfspaces(a),
                        ConvexSetSpec::PairedHalfspaces(b),
                    )?);
                }
            }
        }
        Self::from_constraints(self.dimension, out, self.known_solution.clone())
    }
}

/// 0-based index of the 1-based cyclic position `n` among `m` sets.
pub fn cyclic_index(n: usize, m: usize) -> usize {
    debug_assert!(n >= 1 && m >= 1);
    (n - 1) % m
}

fn check_dim(set: &ConvexSetSpec, dimension: usize) -> Result<(), ProblemError> {
    if set.dim() != dimension {
        return Err(ProblemError::DimensionMismatch {
            context: "constraint set".into(),
            expected: dimension,
            found: set.dim(),
        });
    }
    Ok(())
}

/// The polygon example in the plane: four halfspaces on each side, unique
/// best approximation pair `((−6, −5), (4, 5))`.
pub fn builtin_toy() -> ProblemInstance {
    let rows_a: [([f64; 2], f64); 4] = [
        ([4.0, 3.0], 17.0),
        ([1.0, 0.0], -4.0),
        ([1.0, 1.0], -11.0),
        ([0.0, 1.0], -5.0),
    ];
    let rows_b: [([f64; 2], f64); 4] = [
        ([5.0, -4.0], 30.0),
        ([1.0, -2.0], 0.0),
        ([-1.0, -4.0], -24.0),
        ([-2.0, -1.0], -13.0),
    ];
    let build = |rows: &[([f64; 2], f64)]| {
        rows.iter()
            .map(|(a, b)| ConvexSetSpec::halfspace(*a, *b).expect("nonzero normal"))
            .collect::<Vec<_>>()
    };
    let solution = Pair::new(Vector::from([-6.0, -5.0]), Vector::from([4.0, 5.0]));
    ProblemInstance::new(2, build(&rows_a), build(&rows_b), Some(solution))
        .expect("toy problem is consistent")
}

/// `A = {x ≥ 5}` and `B = {x ≤ −5}` in `R^n`, one coordinate halfspace per
/// constraint (`m = n`).
pub fn builtin_boxes(n: usize) -> Result<ProblemInstance, ProblemError> {
    if n == 0 {
        return Err(ProblemError::ZeroDimension);
    }
    let constraints = (0..n)
        .map(|i| {
            let a = Halfspace::new(Vector::unit(n, i, -1.0), -5.0)?;
            let b = Halfspace::new(Vector::unit(n, i, 1.0), -5.0)?;
            ProductConstraint::new(ConvexSetSpec::Halfspace(a), ConvexSetSpec::Halfspace(b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let solution = Pair::new(Vector::filled(n, 5.0), Vector::filled(n, -5.0));
    ProblemInstance::from_constraints(n, constraints, Some(solution))
}

// ---------------------------------------------------------------------------
// Problem files

#[derive(Debug, Serialize, Deserialize)]
struct ProblemDoc {
    dimension: usize,
    #[serde(rename = "A")]
    a: Vec<SetDoc>,
    #[serde(rename = "B")]
    b: Vec<SetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    known_solution: Option<PairDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PairDoc {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HalfspaceDoc {
    normal: Vec<f64>,
    offset: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum SetDoc {
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
    Box {
        lower: Vec<Option<f64>>,
        upper: Vec<Option<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    PairedHalfspaces {
        first: HalfspaceDoc,
        second: HalfspaceDoc,
    },
}

fn finite_vector(coords: Vec<f64>, what: &str) -> Result<Vector, ProblemError> {
    Vector::try_new(coords).ok_or_else(|| ProblemError::NonFinite(what.into()))
}

impl SetDoc {
    fn into_spec(self) -> Result<ConvexSetSpec, ProblemError> {
        Ok(match self {
            SetDoc::Halfspace { normal, offset } => ConvexSetSpec::Halfspace(Halfspace::new(
                finite_vector(normal, "halfspace normal")?,
                offset,
            )?),
            SetDoc::Box { lower, upper } => ConvexSetSpec::Box(BoxSet::new(
                lower
                    .into_iter()
                    .map(|l| l.unwrap_or(f64::NEG_INFINITY))
                    .collect(),
                upper
                    .into_iter()
                    .map(|u| u.unwrap_or(f64::INFINITY))
                    .collect(),
            )?),
            SetDoc::Ball { center, radius } => {
                ConvexSetSpec::Ball(Ball::new(finite_vector(center, "ball center")?, radius)?)
            }
            SetDoc::PairedHalfspaces { first, second } => {
                ConvexSetSpec::PairedHalfspaces(PairedHalfspaces::new(
                    Halfspace::new(
                        finite_vector(first.normal, "halfspace normal")?,
                        first.offset,
                    )?,
                    Halfspace::new(
                        finite_vector(second.normal, "halfspace normal")?,
                        second.offset,
                    )?,
                )?)
            }
        })
    }

    fn from_spec(spec: &ConvexSetSpec) -> Self {
        let half = |h: &Halfspace| HalfspaceDoc {
            normal: h.normal.as_slice().to_vec(),
            offset: h.offset,
        };
        match spec {
            ConvexSetSpec::Halfspace(h) => SetDoc::Halfspace {
                normal: h.normal.as_slice().to_vec(),
                offset: h.offset,
            },
            ConvexSetSpec::Box(b) => SetDoc::Box {
                lower: b
                    .lower
                    .iter()
                    .map(|l| l.is_finite().then_some(*l))
                    .collect(),
                upper: b
                    .upper
                    .iter()
                    .map(|u| u.is_finite().then_some(*u))
                    .collect(),
            },
            ConvexSetSpec::Ball(b) => SetDoc::Ball {
                center: b.center.as_slice().to_vec(),
                radius: b.radius,
            },
            ConvexSetSpec::PairedHalfspaces(p) => SetDoc::PairedHalfspaces {
                first: half(&p.first),
                second: half(&p.second),
            },
        }
    }
}

/// Parses and validates a JSON problem document.
pub fn load_problem(document: &str) -> Result<ProblemInstance, ProblemError> {
    let doc: ProblemDoc = serde_json::from_str(document)?;
    let a = doc
        .a
        .into_iter()
        .map(SetDoc::into_spec)
        .collect::<Result<Vec<_>, _>>()?;
    let b = doc
        .b
        .into_iter()
        .map(SetDoc::into_spec)
        .collect::<Result<Vec<_>, _>>()?;
    let known = doc
        .known_solution
        .map(|p| -> Result<Pair, ProblemError> {
            let x = finite_vector(p.x, "known_solution.x")?;
            let y = finite_vector(p.y, "known_solution.y")?;
            if x.dim() != y.dim() {
                return Err(ProblemError::DimensionMismatch {
                    context: "known_solution".into(),
                    expected: x.dim(),
                    found: y.dim(),
                });
            }
            Ok(Pair::new(x, y))
        })
        .transpose()?;
    ProblemInstance::new(doc.dimension, a, b, known)
}

/// Writes `problem` in the format accepted by [`load_problem`].
pub fn serialize_problem(problem: &ProblemInstance) -> String {
    let doc = ProblemDoc {
        dimension: problem.dimension,
        a: problem
            .constraints
            .iter()
            .map(|c| SetDoc::from_spec(&c.a_side))
            .collect(),
        b: problem
            .constraints
            .iter()
            .map(|c| SetDoc::from_spec(&c.b_side))
            .collect(),
        known_solution: problem.known_solution.as_ref().map(|p| PairDoc {
            x: p.x.as_slice().to_vec(),
            y: p.y.as_slice().to_vec(),
        }),
    };
    serde_json::to_string_pretty(&doc).expect("problem documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY_DOC: &str = r#"{
        "dimension": 2,
        "A": [
            {"type": "halfspace", "normal": [4, 3], "offset": 17},
            {"type": "halfspace", "normal": [1, 0], "offset": -4},
            {"type": "halfspace", "normal": [1, 1], "offset": -11},
            {"type": "halfspace", "normal": [0, 1], "offset": -5}
        ],
        "B": [
            {"type": "halfspace", "normal": [5, -4], "offset": 30},
            {"type": "halfspace", "normal": [1, -2], "offset": 0},
            {"type": "halfspace", "normal": [-1, -4], "offset": -24},
            {"type": "halfspace", "normal": [-2, -1], "offset": -13}
        ],
        "known_solution": {"x": [-6, -5], "y": [4, 5]}
    }"#;

    #[test]
    fn toy_document_matches_builtin() {
        let p = load_problem(TOY_DOC).unwrap();
        assert_eq!(p.dimension(), 2);
        assert_eq!(p.len(), 4);
        assert_eq!(
            p.known_solution().unwrap(),
            &Pair::new(Vector::from([-6.0, -5.0]), Vector::from([4.0, 5.0]))
        );
        assert_eq!(p, builtin_toy());
    }

    #[test]
    fn toy_solution_activity() {
        let p = builtin_toy();
        let sol = p.known_solution().unwrap();
        let excess_a: Vec<f64> = p
            .constraints()
            .iter()
            .map(|c| match &c.a_side {
                ConvexSetSpec::Halfspace(h) => h.excess(&sol.x),
                _ => unreachable!(),
            })
            .collect();
        let excess_b: Vec<f64> = p
            .constraints()
            .iter()
            .map(|c| match &c.b_side {
                ConvexSetSpec::Halfspace(h) => h.excess(&sol.y),
                _ => unreachable!(),
            })
            .collect();
        // 4(−6) + 3(−5) = −39 vs 17; −6 vs −4; −11 vs −11; −5 vs −5.
        assert_eq!(excess_a, vec![-56.0, -2.0, 0.0, 0.0]);
        // 20 − 20 = 0 vs 30; 4 − 10 vs 0; −24 vs −24; −13 vs −13.
        assert_eq!(excess_b, vec![-30.0, -6.0, 0.0, 0.0]);
    }

    #[test]
    fn unequal_lists_are_padded() {
        let doc = r#"{
            "dimension": 2,
            "A": [
                {"type": "halfspace", "normal": [1, 0], "offset": 0},
                {"type": "halfspace", "normal": [0, 1], "offset": 0},
                {"type": "halfspace", "normal": [1, 1], "offset": 0}
            ],
            "B": [ {"type": "halfspace", "normal": [-1, 0], "offset": -1} ]
        }"#;
        let p = load_problem(doc).unwrap();
        assert_eq!(p.len(), 3);
        for c in &p.constraints()[1..] {
            assert!(matches!(&c.b_side, ConvexSetSpec::Box(b) if b.is_unbounded()));
        }
    }

    #[test]
    fn zero_normal_rejected() {
        let doc = r#"{"dimension": 2,
            "A": [{"type": "halfspace", "normal": [0, 0], "offset": 1}],
            "B": [{"type": "halfspace", "normal": [1, 0], "offset": 1}]}"#;
        assert!(matches!(load_problem(doc), Err(ProblemError::ZeroNormal)));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let doc = r#"{"dimension": 2,
            "A": [{"type": "halfspace", "normal": [1, 0, 0], "offset": 1}],
            "B": [{"type": "halfspace", "normal": [1, 0], "offset": 1}]}"#;
        assert!(matches!(
            load_problem(doc),
            Err(ProblemError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn infeasible_known_solution_rejected() {
        let doc = r#"{"dimension": 1,
            "A": [{"type": "halfspace", "normal": [1], "offset": 0}],
            "B": [{"type": "halfspace", "normal": [-1], "offset": -1}],
            "known_solution": {"x": [0.5], "y": [1]}}"#;
        assert!(matches!(
            load_problem(doc),
            Err(ProblemError::InfeasibleKnownSolution {
                side: 'A',
                index: 1,
                ..
            })
        ));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(
            load_problem("{\"dimension\": 2"),
            Err(ProblemError::Parse(_))
        ));
        assert!(matches!(
            load_problem(r#"{"dimension": 1, "A": [{"type": "cone"}], "B": []}"#),
            Err(ProblemError::Parse(_))
        ));
    }

    #[test]
    fn box_and_ball_documents() {
        let doc = r#"{"dimension": 2,
            "A": [{"type": "box", "lower": [null, 0], "upper": [1, null]}],
            "B": [{"type": "ball", "center": [5, 5], "radius": 1}]}"#;
        let p = load_problem(doc).unwrap();
        match &p.constraint(0).a_side {
            ConvexSetSpec::Box(b) => {
                assert_eq!(b.lower(), &[f64::NEG_INFINITY, 0.0]);
                assert_eq!(b.upper(), &[1.0, f64::INFINITY]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad = r#"{"dimension": 1,
            "A": [{"type": "box", "lower": [2], "upper": [1]}], "B": []}"#;
        assert!(matches!(
            load_problem(bad),
            Err(ProblemError::InvertedBox(0))
        ));
        let bad = r#"{"dimension": 1,
            "A": [{"type": "ball", "center": [0], "radius": 0}], "B": []}"#;
        assert!(matches!(
            load_problem(bad),
            Err(ProblemError::InvalidRadius(_))
        ));
    }

    #[test]
    fn round_trip_builtins() {
        for p in [
            builtin_toy(),
            builtin_boxes(3).unwrap(),
            builtin_toy().paired(&[(0, 1), (2, 3)]).unwrap(),
        ] {
            let text = serialize_problem(&p);
            assert_eq!(load_problem(&text).unwrap(), p);
        }
    }

    #[test]
    fn boxes_builtin() {
        let p = builtin_boxes(1).unwrap();
        assert_eq!(p.len(), 1);
        let sol = p.known_solution().unwrap();
        assert_eq!(sol.x, Vector::from([5.0]));
        assert_eq!(sol.y, Vector::from([-5.0]));

        let p = builtin_boxes(2).unwrap();
        let sol = p.known_solution().unwrap();
        assert!((sol.x.dist(&sol.y) - 10.0 * 2f64.sqrt()).abs() < 1e-12);

        let p = builtin_boxes(1000).unwrap();
        assert_eq!(p.len(), 1000);
        let sol = p.known_solution().unwrap();
        assert!(sol.x.iter().all(|v| *v == 5.0) && sol.y.iter().all(|v| *v == -5.0));
        assert!((sol.x.dist(&sol.y) - 10.0 * 1000f64.sqrt()).abs() < 1e-9);

        assert!(matches!(builtin_boxes(0), Err(ProblemError::ZeroDimension)));
    }

    #[test]
    fn cyclic_convention() {
        assert_eq!(cyclic_index(1, 4), 0);
        assert_eq!(cyclic_index(4, 4), 3);
        assert_eq!(cyclic_index(5, 4), 0);
        assert_eq!(cyclic_index(11, 4), 2);
        assert_eq!(cyclic_index(7, 1), 0);
    }

    #[test]
    fn paired_halfspace_validation() {
        let h = |n: [f64; 2], b: f64| Halfspace::new(n.into(), b).unwrap();
        // Opposed, empty slab: x ≤ 0 and x ≥ 1.
        assert!(matches!(
            PairedHalfspaces::new(h([1.0, 0.0], 0.0), h([-2.0, 0.0], -2.0)),
            Err(ProblemError::EmptyPairedIntersection)
        ));
        // Opposed, nonempty slab: x ≤ 1 and x ≥ 0.
        assert!(PairedHalfspaces::new(h([1.0, 0.0], 1.0), h([-1.0, 0.0], 0.0)).is_ok());
        // Nested.
        assert!(PairedHalfspaces::new(h([1.0, 0.0], 1.0), h([3.0, 0.0], 0.0)).is_ok());
        // Independent normals always meet.
        assert!(PairedHalfspaces::new(h([1.0, 0.0], -4.0), h([1.0, 1.0], -11.0)).is_ok());
    }

    #[test]
    fn pairing_merges_constraints() {
        let p = builtin_toy().paired(&[(0, 1), (2, 3)]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.sweep_cost(), 8);
        assert!(builtin_toy().paired(&[(0, 0)]).is_err());
        assert!(builtin_toy().paired(&[(0, 1), (1, 2)]).is_err());
        assert!(builtin_toy().paired(&[(0, 9)]).is_err());
        let partial = builtin_toy().paired(&[(1, 3)]).unwrap();
        assert_eq!(partial.len(), 3);
        assert_eq!(partial.sweep_cost(), 8);
    }
}
