use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("iteration did not converge within {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    CapacityExceeded { degree: usize, max: usize },

    #[error("degree {degree} is below the minimum {min} for this system")]
    DegreeTooSmall { degree: usize, min: usize },

    #[error("expected {expected} values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("bezout number {bezout} exceeds the path budget {budget}")]
    BudgetExceeded { bezout: u64, budget: u64 },

    #[error("{failed} paths failed after retrying with a fresh gamma")]
    QualityFailure { failed: usize },

    #[error("clusters separated by {gap:e}, within 10x of the dedup tolerance {dedup_tol:e}")]
    AmbiguousClustering { gap: f64, dedup_tol: f64 },

    #[error("prime {prime} divides the leading coefficient")]
    BadPrime { prime: u64 },

    #[error("count {count} for {bound_name} exceeds its bound {bound}")]
    BoundViolation { bound_name: String, count: u64, bound: u64 },

    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("known-answer data: {0}")]
    KnownAnswerData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
