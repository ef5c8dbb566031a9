//! Error classes shared across the library. Each class maps to exactly one
//! CLI exit code: structural/precondition/internal problems are usage-grade
//! failures, while negative verdicts and inconclusive outcomes are ordinary
//! return values of the operations, not errors.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: shape mismatches, unknown identifiers, schema
    /// violations, missing preconditions of the structural kind.
    #[error("structural: {0}")]
    Structural(String),

    /// A stated operation precondition does not hold for the given data.
    #[error("precondition: {0}")]
    Precondition(String),

    /// The requested tolerance cannot be met on the given grid; carries the
    /// best achievable bound.
    #[error("grid too coarse: requested eps {requested}, achievable {achievable}")]
    GridTooCoarse { requested: f64, achievable: f64 },

    /// An internal assertion failed; indicates a bug, not bad input.
    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
