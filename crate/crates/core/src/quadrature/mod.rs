//! Numerical integration: adaptive Gauss-Kronrod, accelerated oscillatory
//! tails, and Cauchy principal values across simple real-axis poles.

mod extrapolation;
mod gauss_kronrod;
mod oscillatory;
mod pv;

use num_complex::Complex64;
use serde::Serialize;

pub use extrapolation::wynn_epsilon;
pub use gauss_kronrod::{integrate_adaptive, integrate_real, integrate_to_infinity, integrate_with_breakpoints};
pub use oscillatory::{oscillatory_tail, Trig};
pub use pv::{pv_integrate, Oscillation, PvProblem};

pub(crate) use gauss_kronrod::integrate_lenient;

/// Value and diagnostics of one integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    /// Non-negative bound on `|value - exact|` as estimated by the engine.
    pub abs_err_estimate: f64,
    /// Deepest bisection level for adaptive rules, or the number of
    /// tolerance levels visited by the principal-value engine.
    pub refinement_levels: u32,
    pub converged: bool,
}
