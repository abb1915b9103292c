use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("distance must be strictly positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(f64),

    #[error("network size n={n} outside supported range {min}..={max}")]
    NetworkSize { n: u32, min: u32, max: u32 },

    #[error("run length k={k} outside 1..={max}")]
    RunLengthRange { k: u32, max: u32 },

    #[error(
        "quadrature did not converge within {evaluations} evaluations: \
         estimate {estimate:e}, error bound {error_bound:e} > tolerance {tolerance:e}"
    )]
    QuadratureNoConvergence {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
        evaluations: usize,
    },

    #[error("series truncation orders differ: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("series reciprocal requires a nonzero constant term")]
    ZeroConstantTerm,

    #[error("coefficient index {index} exceeds truncation order {order}")]
    CoefficientOutOfRange { index: usize, order: usize },

    #[error("a point mass has no density function; substitute the atom directly")]
    PointMassDensity,

    #[error("probabilities sum to {sum}, expected exactly 1")]
    PmfNotNormalized { sum: String },

    #[error("probability {value} at support point {point} outside [0, 1]")]
    PmfProbabilityRange { point: i64, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
