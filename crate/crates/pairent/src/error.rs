//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector: norm {norm:.3e} is below 1e-14")]
    ZeroVector { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {dim} is below the minimum of {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("hermiticity violation at ({row},{col}): deviation {deviation:.3e}")]
    Hermiticity { row: usize, col: usize, deviation: f64 },

    #[error("trace deviates from 1 by {deviation:.3e}")]
    Trace { deviation: f64 },

    #[error("diagonal entry {index} is negative ({value:.3e}) or not real")]
    Diagonal { index: usize, value: f64 },

    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    Psd { min_eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("decomposition length {members} is below the numerical rank {rank}")]
    Rank { members: usize, rank: usize },

    #[error("certification failure: {0}")]
    Certification(String),

    #[error("tolerance exceeded: {0}")]
    ToleranceExceeded(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Stable machine-readable identifier, used by the CLI's error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector { .. } => "zero_vector",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DimensionTooSmall { .. } => "dimension_too_small",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::Hermiticity { .. } => "hermiticity_violation",
            Error::Trace { .. } => "trace_violation",
            Error::Diagonal { .. } => "diagonal_violation",
            Error::Psd { .. } => "psd_violation",
            Error::Domain(_) => "domain_error",
            Error::Rank { .. } => "rank_error",
            Error::Certification(_) => "certification_failure",
            Error::ToleranceExceeded(_) => "tolerance_exceeded",
        }
    }
}
