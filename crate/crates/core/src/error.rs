use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {position}: unexpected {found:?}")]
    Parse { position: usize, found: char },

    #[error("stabilization did not finish within {budget} sweeps ({balls} balls)")]
    BudgetExceeded { budget: u64, balls: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parameters outside the regime of {kind}: {reason}")]
    Regime { kind: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
