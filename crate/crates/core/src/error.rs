//! Error taxonomy shared by every module.

use thiserror::Error;

/// Library-wide error type.
///
/// The split between "argument-like" and "evaluation" errors mirrors the
/// CLI exit-code contract: bad inputs exit 2, failed computations exit 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violated a precondition (wrong sign, inverted range, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested point lies outside a domain of convergence.
    #[error("outside domain of convergence: {0}")]
    Domain(String),

    /// Evaluation at a pole of the function.
    #[error("pole encountered: {0}")]
    Pole(String),

    /// The argument would overflow the working precision.
    #[error("argument out of representable range: {0}")]
    Range(String),

    /// A sampled value came back non-finite or an iteration failed to settle.
    #[error("evaluation failure: {0}")]
    EvaluationFailure(String),

    /// A pole sits on the integration path of a mixture transform.
    #[error("singularity on integration path at n={n}, x={x}")]
    SingularityOnPath { n: usize, x: f64 },

    /// The normalizer xi(sigma) is too close to zero to divide by.
    #[error("normalizer xi(sigma) too close to zero: {0}")]
    Normalizer(f64),
}

impl Error {
    /// True when the error reflects a bad input rather than a computation
    /// that went wrong while running.
    pub fn is_argument_like(&self) -> bool {
        !matches!(self, Error::EvaluationFailure(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;
