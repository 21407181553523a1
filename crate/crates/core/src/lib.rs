//! Solvers for the best approximation pair problem: given two sets
//! `A = ⋂ A_i` and `B = ⋂ B_i` built from simple closed convex pieces, find
//! `(a, b) ∈ A × B` with `‖a − b‖` minimal.
//!
//! The problem is lifted to the product space `X = Y × Y` with constraints
//! `C_i = A_i × B_i` and coupling objective `α‖x − y‖^p`. Seven first-order
//! schemes are provided ([`solvers`]); they only ever touch the projectors of
//! the individual `A_i`, `B_i` and a few closed-form operators
//! ([`operators`]). The [`harness`] runs them under a shared budget of unit
//! operations so their progress can be compared fairly.

pub mod cli;
pub mod harness;
pub mod linalg;
pub mod operators;
pub mod problem;
pub mod solvers;

pub use harness::{run, BudgetPolicy, HarnessError, MetricKind, RunResult, TraceRecord};
pub use linalg::{pair_norm, Pair, Vector};
pub use operators::{Exponent, ObjectiveParams, OperatorError};
pub use problem::{
    builtin_boxes, builtin_toy, load_problem, serialize_problem, ConvexSetSpec, ProblemError,
    ProblemInstance, ProductConstraint,
};
pub use solvers::{Algorithm, Solver, SolverConfig};
