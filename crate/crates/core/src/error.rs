//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its physical domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Mutually contradictory inputs (e.g. scattered photons requested
    /// from a configuration that cannot scatter).
    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// A solver found no root in the requested window.
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
