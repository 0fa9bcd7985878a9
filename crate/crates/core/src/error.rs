use thiserror::Error;

/// Errors raised by the partition algorithms.
///
/// Variants are grouped so that callers can tell a refused input
/// (precondition, scale cap, general position) apart from a failure of the
/// algorithm itself.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TverbergError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("general position violated: {0}")]
    GeneralPosition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input exceeds scale cap: {0}")]
    ScaleCap(String),

    #[error("retry cap of {attempts} exceeded: {reason}")]
    RetryCapExceeded { attempts: usize, reason: String },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("base solver broke its contract: {0}")]
    ContractViolation(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl TverbergError {
    /// True when the input was refused rather than mishandled.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            TverbergError::DimensionMismatch { .. }
                | TverbergError::GeneralPosition(_)
                | TverbergError::Precondition(_)
                | TverbergError::ScaleCap(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, TverbergError>;
