//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by model construction, simulation, and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },

    /// A model parameter violated its documented range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An operation argument violated its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A documented precondition did not hold (reported, never asserted).
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns an error if `value` is NaN or infinite.
pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
