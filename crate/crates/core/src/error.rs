use thiserror::Error;

/// Errors raised by constructors, numerical routines and generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("mixture convolution needs {required} components, cap is {cap}")]
    Capacity { required: u128, cap: usize },

    #[error(
        "quadrature did not reach the requested accuracy after {subdivisions} subdivisions \
         (best estimate {best_estimate}, error estimate {error_estimate:e})"
    )]
    Accuracy {
        best_estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("cross-check failed: {what} (computed {computed}, expected {expected})")]
    CrossCheck {
        what: &'static str,
        computed: f64,
        expected: f64,
    },

    #[error("instance generation failed after {attempts} attempts: {reason}")]
    Generation {
        attempts: usize,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
