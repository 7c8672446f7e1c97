use thiserror::Error;

use crate::lattice::LatticeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),

    /// Structurally malformed input (bad indices, duplicate rays, wrong lengths).
    #[error("invalid input: {0}")]
    Input(String),

    /// The fan fails one of the smooth/complete checks.
    #[error("invalid fan: {0}")]
    InvalidFan(String),

    /// An internal consistency check failed; indicates a bug.
    #[error("internal check failed: {0}")]
    Internal(String),

    /// A finite-field search would exceed its point budget.
    #[error("search budget exceeded: {needed} points per chart, budget {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
