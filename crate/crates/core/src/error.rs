//! Crate-wide error type.

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is out of range or inconsistent.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Vector/matrix dimensions do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A covariance matrix failed the Cholesky factorization.
    #[error("covariance matrix is not symmetric positive semi-definite: {0}")]
    NotPsd(String),

    /// The payoff's declared growth is too strong for the configured cost,
    /// so the variational objective may be unbounded.
    #[error("growth check failed: payoff growth (order {order}, coeff {coeff}) vs cost power {power}")]
    GrowthRejected { order: f64, coeff: f64, power: f64 },

    /// Training produced a non-finite objective.
    #[error("non-finite objective at epoch {epoch}: {value}")]
    NonFinite { epoch: usize, value: f64 },

    /// No measure satisfying the moment constraints was found.
    #[error("moment problem infeasible: {0}")]
    Infeasible(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
