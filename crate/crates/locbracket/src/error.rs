use jetcalc::JetError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum BracketError {
    #[error(transparent)]
    Jet(#[from] JetError),

    /// An operation's stated precondition failed (e.g. Jacobi requires skew).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Malformed input that no check can repair.
    #[error("invalid bracket data: {0}")]
    Invalid(String),
}
