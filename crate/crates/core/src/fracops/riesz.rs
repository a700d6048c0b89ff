use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::GridFunction;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breakpoints, pv_integrate, Oscillation, PvProblem};
use crate::{EvalResult, Method};

type MomentumFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A wavefunction given through its momentum representation
/// `Φ(p) = ∫ e^{-ipx/ħ} ψ(x) dx`.
#[derive(Clone)]
pub enum SpectralFunction {
    /// `Φ` negligible outside `[-support, support]`.
    Decaying { phi: MomentumFn, hbar: f64, support: f64 },
    /// `Φ(p) = envelope(p) · oscillation(p) / Π (p - p_k)`, with
    /// `|Φ(p)| ~ |p|^tail_exponent`; the poles may be removable.
    Oscillatory {
        envelope: MomentumFn,
        poles: Vec<f64>,
        oscillation: Oscillation,
        tail_exponent: f64,
        hbar: f64,
    },
    /// `ψ(x) = amplitude · e^{i p0 x/ħ}`, i.e. `Φ = 2πħ amplitude δ(p - p0)`.
    PlaneWave { p0: f64, amplitude: Complex64, hbar: f64 },
}

impl fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Decaying { hbar, support, .. } => {
                f.debug_struct("Decaying").field("hbar", hbar).field("support", support).finish_non_exhaustive()
            }
            Self::Oscillatory { poles, oscillation, tail_exponent, hbar, .. } => f
                .debug_struct("Oscillatory")
                .field("poles", poles)
                .field("oscillation", oscillation)
                .field("tail_exponent", tail_exponent)
                .field("hbar", hbar)
                .finish_non_exhaustive(),
            Self::PlaneWave { p0, amplitude, hbar } => f
                .debug_struct("PlaneWave")
                .field("p0", p0)
                .field("amplitude", amplitude)
                .field("hbar", hbar)
                .finish(),
        }
    }
}

impl SpectralFunction {
    fn hbar(&self) -> f64 {
        match self {
            Self::Decaying { hbar, .. } | Self::Oscillatory { hbar, .. } | Self::PlaneWave { hbar, .. } => *hbar,
        }
    }
}

/// `(1/2πħ) ∫ e^{ipx/ħ} |p|^α Φ(p) dp`.
pub fn quantum_riesz_apply(f: &SpectralFunction, alpha: f64, x: f64, tol: f64) -> Result<EvalResult> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!("Riesz order {alpha} outside (0, 2]")));
    }
    let hbar = f.hbar();
    if !(hbar > 0.0) {
        return Err(Error::domain("hbar must be positive"));
    }
    let norm = 1.0 / (2.0 * PI * hbar);
    match f {
        SpectralFunction::PlaneWave { p0, amplitude, .. } => Ok(EvalResult {
            value: amplitude * p0.abs().powf(alpha) * Complex64::from_polar(1.0, p0 * x / hbar),
            abs_err: 0.0,
            method: Method::ClosedForm,
            evaluations: 1,
            converged: true,
        }),
        SpectralFunction::Decaying { phi, support, .. } => {
            let g = |p: f64| phi(p) * p.abs().powf(alpha) * Complex64::from_polar(norm, p * x / hbar);
            let r = integrate_with_breakpoints(g, &[-support, 0.0, *support], tol)?;
            Ok(EvalResult {
                value: r.value,
                abs_err: r.abs_err_estimate,
                method: Method::Quadrature,
                evaluations: r.refinement_levels as usize,
                converged: r.converged,
            })
        }
        SpectralFunction::Oscillatory {
            envelope,
            poles,
            oscillation,
            tail_exponent,
            ..
        } => {
            let env = envelope.clone();
            let problem = PvProblem::new(move |p: f64| env(p) * p.abs().powf(alpha), oscillation.mul(&Oscillation::exp(x / hbar)))
                .with_poles(poles)
                .with_breakpoints(&[0.0])
                .with_tail_exponent(tail_exponent + alpha)
                .scaled(Complex64::new(norm, 0.0));
            let r = pv_integrate(&problem, tol)?;
            Ok(EvalResult {
                value: r.value,
                abs_err: r.abs_err_estimate,
                method: Method::PrincipalValue,
                evaluations: r.refinement_levels as usize,
                converged: r.converged,
            })
        }
    }
}

/// How the sampled function continues beyond its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// The samples are one period.
    Periodic,
    /// Zero outside the grid; transformed with 4x zero padding.
    Compact,
}

/// Output of [`riesz_apply_grid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRiesz {
    pub output: GridFunction,
    /// Share of spectral energy in the outer fifth of the frequency band.
    pub spectral_tail_fraction: f64,
    /// Set when the tail share exceeds 1e-8: the grid under-resolves `f`.
    pub aliasing_warning: bool,
}

/// Riesz derivative of order `q` on a grid: the discrete spectrum is
/// multiplied by `-|ω|^q`.
pub fn riesz_apply_grid(f: &GridFunction, q: f64, boundary: Boundary) -> Result<GridRiesz> {
    if !(q > 0.0 && q <= 2.0) {
        return Err(Error::domain(format!("Riesz order {q} outside (0, 2]")));
    }
    let n = f.len();
    let len = match boundary {
        Boundary::Periodic => n,
        Boundary::Compact => 4 * n,
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    buf[..n].copy_from_slice(&f.samples);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);

    let dw = 2.0 * PI / (len as f64 * f.spacing);
    let mut total = 0.0;
    let mut tail = 0.0;
    for (k, c) in buf.iter_mut().enumerate() {
        let signed = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 };
        let energy = c.norm_sqr();
        total += energy;
        if signed.abs() >= 0.4 * len as f64 {
            tail += energy;
        }
        *c *= -(signed.abs() * dw).powf(q) / len as f64;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    buf.truncate(n);
    let fraction = if total > 0.0 { tail / total } else { 0.0 };
    Ok(GridRiesz {
        output: GridFunction::new(buf, f.spacing, f.domain_start)?,
        spectral_tail_fraction: fraction,
        aliasing_warning: fraction > 1e-8,
    })
}
