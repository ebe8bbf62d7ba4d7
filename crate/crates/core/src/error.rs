use thiserror::Error;

pub type Result<T> = std::result::Result<T, HardyError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// A point outside the open unit disk, or a radius outside [0, 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// A sampled function was asked for a value at a point it does not store.
    #[error("not representable: {0}")]
    NotRepresentable(String),

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for HardyError {
    fn from(err: std::io::Error) -> Self {
        HardyError::Io(err.to_string())
    }
}
