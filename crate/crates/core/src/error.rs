use thiserror::Error;

/// Errors raised by the algebra, circuit and decision routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector or matrix had the wrong length or shape.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: String,
        actual: String,
    },

    /// Two circuits or matrix blocks cannot be combined as given.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("operation requires a non-empty input: {0}")]
    EmptyInput(&'static str),

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An enumeration would exceed the configured cap.
    #[error("{what} has {size} elements, above the cap of {cap}")]
    Size {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    /// Malformed serialized input; `path` locates the offending value.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn dimension(
        context: &'static str,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        Error::Dimension {
            context,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
