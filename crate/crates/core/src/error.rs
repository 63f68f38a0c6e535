use thiserror::Error;

/// Errors raised by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: non-finite entries, wrong shapes, bad parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input is well-formed but outside the supported problem class.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical decision could not be made at the requested tolerance.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Not enough usable samples to estimate a quantity.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The scheme does not satisfy the conditions that certify Nash limits.
    #[error("contract violated: {0}")]
    Contract(String),

    /// Both ends of a bisection bracket carry the same verdict.
    #[error("invalid bracket [{lo}, {hi}]: both ends are {verdict}")]
    InvalidBracket { lo: f64, hi: f64, verdict: String },

    /// The eigenvalue iteration did not converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
