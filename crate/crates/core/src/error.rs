use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("eigensolver did not converge for a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("coefficient vector is zero")]
    ZeroVector,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("density operator invariant violated: {0}")]
    InvariantViolation(String),

    #[error("gamma function pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(f64),

    #[error("series did not converge within {0} terms")]
    SeriesDivergence(usize),

    #[error("Fisher information must be positive, got {0}")]
    NonPositiveInformation(f64),

    #[error("{name} = {value} outside allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("teleportation weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
