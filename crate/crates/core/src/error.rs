use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (expected {1})")]
    UnsupportedDimension(usize, &'static str),

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("Jacobi eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("{operation} requires delta = {required}, got {actual}")]
    BasisMismatch {
        operation: &'static str,
        required: f64,
        actual: f64,
    },

    #[error("closed-form payoffs are only defined for the (|00> + i|11>)/sqrt2 resource")]
    UnsupportedResource,

    #[error("grid needs at least 2 points per axis, got {0}x{1}")]
    InvalidGrid(usize, usize),

    #[error("game file line {line}: {message}")]
    GameParse { line: usize, message: String },
}
