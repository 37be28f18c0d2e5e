use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an out-of-range argument.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A state, settings vector, or strategy has the wrong size.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A bipartition is empty, out of range, or lists a qubit twice.
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    /// A density matrix failed Hermiticity, trace, or positivity validation.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// The state's correlation function is not a single harmonic of the
    /// phase sum, so the scalar-product bound does not apply.
    #[error("correlation function is not a pure harmonic; no local bound is established")]
    NotHarmonic,

    /// An evaluation budget (grid size, enumeration size) was exceeded.
    #[error("evaluation budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Two evaluation routes disagreed beyond tolerance.
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
