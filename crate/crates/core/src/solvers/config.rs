use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::operators::{Exponent, ObjectiveParams, OperatorError};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("dual step parameter L = {l} is below m/epsilon = {bound}")]
    DualStepTooSmall { l: f64, bound: f64 },
    #[error("start pair has dimension {found}, problem has {expected} (or is non-finite)")]
    BadStart { expected: usize, found: usize },
    #[error(transparent)]
    Objective(#[from] OperatorError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Acj,
    Dr,
    Dpg,
    Fdpg,
    Pda,
    AccPda,
    Ssd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Acj,
        Algorithm::Dr,
        Algorithm::Dpg,
        Algorithm::Fdpg,
        Algorithm::Pda,
        Algorithm::AccPda,
        Algorithm::Ssd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Acj => "acj",
            Algorithm::Dr => "dr",
            Algorithm::Dpg => "dpg",
            Algorithm::Fdpg => "fdpg",
            Algorithm::Pda => "pda",
            Algorithm::AccPda => "accpda",
            Algorithm::Ssd => "ssd",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConfigError::UnknownAlgorithm(s.to_string()))
    }
}

/// Step sizes `η_k` for stochastic subgradient descent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepSchedule {
    Constant(f64),
    /// `c / sqrt(k + 1)`.
    InvSqrt(f64),
}

impl StepSchedule {
    pub fn at(self, k: u64) -> f64 {
        match self {
            StepSchedule::Constant(c) => c,
            StepSchedule::InvSqrt(c) => c / ((k + 1) as f64).sqrt(),
        }
    }

    fn scale(self) -> f64 {
        match self {
            StepSchedule::Constant(c) | StepSchedule::InvSqrt(c) => c,
        }
    }
}

/// Choice of the anchor sequence `(x'_k, y'_k)` in ACJ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorMode {
    /// `(x'_k, y'_k) = (y_0, x_0)` throughout.
    Fixed,
    /// `(x'_0, y'_0) = (y_0, x_0)`, then `(x'_k, y'_k) = (y_{k−1}, x_{k−1})`.
    Dynamic,
}

/// Initial dual blocks for DPG/FDPG.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualStart {
    /// Every block zero; the first primal iterate is then the zero pair.
    Zero,
    /// Blocks chosen so the first primal iterate equals the start pair.
    Primal,
}

/// Algorithm choice plus every tunable parameter. Parameters that do not
/// apply to the chosen algorithm are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Weight `α` of the coupling objective.
    pub alpha: f64,
    /// Exponent of the coupling objective (DR only).
    pub p: Exponent,
    /// DR relaxation `λ ∈ (0, 2)`.
    pub lambda: f64,
    /// Strong-convexity weight `ε` (DPG/FDPG).
    pub epsilon: f64,
    /// Dual step parameter `L ≥ m/ε`; `None` means exactly `m/ε`.
    pub l_dual: Option<f64>,
    pub rho0: f64,
    pub rho_max: f64,
    /// Exact-penalty weight `L` on the distance functions (SSD).
    pub l_penalty: f64,
    pub step: StepSchedule,
    pub seed: u64,
    pub anchor: AnchorMode,
    pub dual_start: DualStart,
}

impl SolverConfig {
    /// Defaults follow the polygon experiment: DR with `p = 1, α = 5, λ = 1`;
    /// `α = 1` elsewhere, `ε = 1/4`, `ρ_0 = 1`, `ρ_max = 10⁵`, SSD with
    /// `L = 1` and `η_k = 1/sqrt(k + 1)`; dynamic ACJ anchors.
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            alpha: if algorithm == Algorithm::Dr { 5.0 } else { 1.0 },
            p: Exponent::One,
            lambda: 1.0,
            epsilon: 0.25,
            l_dual: None,
            rho0: 1.0,
            rho_max: 1e5,
            l_penalty: 1.0,
            step: StepSchedule::InvSqrt(1.0),
            seed: 0,
            anchor: AnchorMode::Dynamic,
            dual_start: DualStart::Zero,
        }
    }

    pub fn l_dual(&self, m: usize) -> f64 {
        self.l_dual.unwrap_or(m as f64 / self.epsilon)
    }

    pub(crate) fn objective(&self) -> Result<ObjectiveParams, OperatorError> {
        ObjectiveParams::new(self.alpha, self.p, self.epsilon)
    }

    /// Checks the parameters that matter for the chosen algorithm against a
    /// problem with `m` constraints.
    pub fn validate(&self, m: usize) -> Result<(), ConfigError> {
        fn positive(name: &'static str, value: f64) -> Result<(), ConfigError> {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange {
                    name,
                    value,
                    expected: "positive and finite",
                })
            }
        }
        match self.algorithm {
            Algorithm::Acj => {}
            Algorithm::Dr => {
                positive("alpha", self.alpha)?;
                if !(self.lambda > 0.0 && self.lambda < 2.0) {
                    return Err(ConfigError::OutOfRange {
                        name: "lambda",
                        value: self.lambda,
                        expected: "0 < lambda < 2",
                    });
                }
            }
            Algorithm::Dpg | Algorithm::Fdpg => {
                positive("alpha", self.alpha)?;
                positive("epsilon", self.epsilon)?;
                let bound = m as f64 / self.epsilon;
                let l = self.l_dual(m);
                positive("L_dual", l)?;
                // Allow for the rounding in m/ε itself.
                if l < bound * (1.0 - 1e-12) {
                    return Err(ConfigError::DualStepTooSmall { l, bound });
                }
            }
            Algorithm::Pda | Algorithm::AccPda => {
                positive("alpha", self.alpha)?;
                positive("rho0", self.rho0)?;
                positive("rho_max", self.rho_max)?;
                if self.rho_max < self.rho0 {
                    return Err(ConfigError::OutOfRange {
                        name: "rho_max",
                        value: self.rho_max,
                        expected: "rho_max >= rho0",
                    });
                }
            }
            Algorithm::Ssd => {
                positive("alpha", self.alpha)?;
                positive("L", self.l_penalty)?;
                positive("eta", self.step.scale())?;
            }
        }
        Ok(())
    }
}
