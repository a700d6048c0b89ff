//! Numerical fractional quantum mechanics: special functions, singular and
//! oscillatory quadrature, fractional operators, the infinite-well
//! consistency experiment and the space-time fractional free particle.

pub mod error;
pub mod fracops;
pub mod freeparticle;
pub mod quadrature;
pub mod specfun;
pub mod validation;
pub mod well;

use num_complex::Complex64;
use serde::Serialize;

pub use error::{Error, Result};

/// Crate version, echoed in report summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PowerSeries,
    LaplaceInversion,
    MellinBarnes,
    ResidueSeries,
    Quadrature,
    PrincipalValue,
    ClosedForm,
}

/// A value with its error estimate and convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub method: Method,
    /// Series terms or integrand evaluations spent.
    pub evaluations: usize,
    pub converged: bool,
}
