use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The gamma function has a pole at this argument.
    #[error("gamma function pole at z = {0}")]
    GammaPole(Complex64),

    /// The gamma function value does not fit in an f64.
    #[error("gamma function overflows at z = {0}")]
    GammaOverflow(Complex64),

    /// A Fox H parameter set violates one of its structural constraints.
    #[error("invalid H-function parameters: {0}")]
    InvalidParameters(String),

    /// No straight contour separates the left and right pole families.
    #[error("contour placement failed: {0}")]
    ContourPlacement(String),

    /// A precondition of a transformation identity does not hold.
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    /// An iterative or adaptive evaluation did not reach its target.
    #[error("no convergence: {reason} (estimate {estimate}, error {abs_err:e})")]
    NonConvergence {
        reason: String,
        estimate: Complex64,
        abs_err: f64,
    },

    /// Two poles sit inside each other's exclusion windows.
    #[error("poles at {0} and {1} are closer than the exclusion window")]
    PoleTooClose(f64, f64),

    /// Half-period contributions of an oscillatory tail do not alternate in sign.
    #[error("tail contributions stopped alternating at half-period {index} (q = {at})")]
    NonAlternating { index: usize, at: f64 },

    /// An argument lies outside the domain of the operation.
    #[error("argument out of domain: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn non_convergence(reason: impl Into<String>, estimate: Complex64, abs_err: f64) -> Self {
        Error::NonConvergence {
            reason: reason.into(),
            estimate,
            abs_err,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
