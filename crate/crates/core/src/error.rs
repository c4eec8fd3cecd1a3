use thiserror::Error;

/// Errors raised by the channel, model, solver, and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration too large: {cost} evaluations exceeds limit {limit}")]
    Resource { cost: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
