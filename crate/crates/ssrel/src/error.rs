//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A domain invariant was violated (bad parameter, bad argument).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Not enough observations for the requested operation.
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Root bracket does not straddle a sign change.
    #[error("invalid root bracket [{lo}, {hi}]: f has the same sign at both ends")]
    InvalidBracket { lo: f64, hi: f64 },

    /// Adaptive quadrature hit the subdivision cap before reaching tolerance.
    /// Carries the best estimate so callers can decide whether it is usable.
    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (best estimate {best}, error estimate {error_estimate})"
    )]
    QuadratureNonConvergence {
        best: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// The objective was non-finite where it must be finite.
    #[error("objective is not finite at {0}")]
    NonFiniteObjective(String),

    /// An optimization failed on every attempted start.
    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    /// Sample concordance is non-positive, so the Clayton copula (theta > 0)
    /// cannot represent the observed dependence.
    #[error("Kendall tau estimate {tau} is not positive; Clayton copula is inapplicable")]
    NegativeDependence { tau: f64 },

    /// A matrix that must be inverted is numerically singular.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// A variance estimate came out negative.
    #[error("negative variance estimate for {0}")]
    NegativeVariance(String),

    /// Too many bootstrap replicates failed to refit.
    #[error("{failures} of {total} bootstrap replicates failed (more than 10% allowed)")]
    BootstrapFailures { failures: usize, total: usize },

    /// Zero spacing survived tie handling in a spacings objective.
    #[error("zero spacing in product-of-spacings objective after tie handling")]
    ZeroSpacing,

    /// Data ingestion problem (missing column, bad row, empty result).
    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for usage/precondition problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::InsufficientData { .. }
            | Error::Data(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
