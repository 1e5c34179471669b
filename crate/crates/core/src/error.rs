//! Error types shared across the library.

use thiserror::Error;

/// Library-wide error type.
///
/// The variants map onto the CLI exit-code table: invalid input (2),
/// budget exceeded (3), internal invariant violation (4).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed word text, with the byte offset of the offending token.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// An argument violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive computation would exceed the configured budget.
    #[error("budget exceeded: {required} operations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// An internal consistency check failed. This always indicates a bug.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
