use thiserror::Error;

use crate::linalg::SquareMatrix;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The QR iteration did not converge; `partial` is the Hessenberg
    /// matrix at the point of failure.
    #[error("numerical failure: {message}")]
    NumericalFailure {
        message: String,
        partial: Box<SquareMatrix>,
    },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("system is not diagonally symmetrizable; use r_tau_general")]
    WrongPath,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("no crossing of r = 1 found up to tau = {limit:e}")]
    NoCrossing { limit: f64 },

    #[error("no finite minimizer: {0}")]
    NoMinimizer(String),

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("state overflowed after t = {}", last.t)]
    Overflow {
        last: Box<crate::impulse_sim::Sample>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
