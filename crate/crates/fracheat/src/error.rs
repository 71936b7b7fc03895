//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by construction, parsing and the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Fractional order outside the open interval (0, 1).
    #[error("fractional order s = {0} must satisfy 0 < s < 1")]
    InvalidOrder(f64),
    /// A parameter violated its documented invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Node-doubling check failed to stabilise the quadrature value.
    #[error("quadrature did not converge: |delta| = {delta} exceeds tolerance {tol}")]
    DidNotConverge { delta: f64, tol: f64 },
    /// Field mini-language parse failure; carries the offending token.
    #[error("field spec parse error at `{token}`: {reason}")]
    FieldParse { token: String, reason: String },
    /// A requested mode is not representable on the periodic lattice.
    #[error("incommensurate frequency: {0} is not on the grid lattice")]
    IncommensurateFrequency(String),
    /// Decay-ray samples underflowed before spanning two decades.
    #[error("insufficient dynamic range: {0}")]
    InsufficientDynamicRange(String),
    /// Contraction precheck failed; carries the computed Lipschitz constant.
    #[error("fixed-point map is not contracting: constant = {constant}")]
    NotContracting { constant: f64 },
    /// Picard iteration hit the sweep cap before meeting the tolerance.
    #[error("iteration limit {max_iter} reached; last difference = {last_diff}")]
    MaxIterExceeded { max_iter: usize, last_diff: f64 },
    /// Binary or CSV I/O problem.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
