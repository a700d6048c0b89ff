//! Semi-infinite integrals of a slowly decaying envelope times a sine or
//! cosine, summed over half-periods and accelerated with Wynn's epsilon.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::extrapolation::wynn_epsilon;
use super::{integrate_lenient, QuadResult};
use crate::error::{Error, Result};

const MAX_HALF_PERIODS: usize = 800;
const EPSILON_WINDOW: usize = 60;

/// Which trigonometric factor multiplies the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn eval(self, phase: f64) -> f64 {
        match self {
            Trig::Cos => phase.cos(),
            Trig::Sin => phase.sin(),
        }
    }
}

/// `∫_from^∞ envelope(q) · trig(frequency · q) dq`.
///
/// The range is cut at the zeros of the trigonometric factor; the
/// half-period contributions form an alternating series whose partial sums
/// are accelerated. An envelope that tends to a non-zero constant yields the
/// Abel-regularised value of the integral.
pub fn oscillatory_tail<F>(envelope: F, trig: Trig, frequency: f64, from: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    if frequency == 0.0 || !frequency.is_finite() {
        return Err(Error::domain("oscillatory tail needs a finite non-zero frequency"));
    }
    if !(tol > 0.0) || !from.is_finite() {
        return Err(Error::domain("tolerance must be positive and the start finite"));
    }
    let omega = frequency.abs();
    // sin(-w q) = -sin(w q)
    let sign = if frequency < 0.0 && trig == Trig::Sin { -1.0 } else { 1.0 };
    let integrand = |q: f64| Complex64::new(envelope(q) * trig.eval(omega * q), 0.0);

    let half = PI / omega;
    let offset = match trig {
        Trig::Cos => 0.5,
        Trig::Sin => 0.0,
    };
    let mut j = (from / half - offset).ceil();
    let mut zero = (j + offset) * half;
    if zero < from {
        j += 1.0;
        zero = (j + offset) * half;
    }
    let term_tol = 1e-3 * tol;

    let mut err_sum = 0.0;
    let mut depth = 0u32;
    let mut head = Complex64::new(0.0, 0.0);
    if zero > from {
        let r = integrate_lenient(&integrand, &[from, zero], term_tol)?;
        head = r.value;
        err_sum += r.abs_err_estimate;
        depth = depth.max(r.refinement_levels);
    }

    let mut sums: Vec<Complex64> = Vec::new();
    let mut running = head;
    let mut prev_term: Option<f64> = None;
    let mut prev_estimate: Option<Complex64> = None;
    let mut small_run = 0;
    for k in 0..MAX_HALF_PERIODS {
        let a = (j + offset + k as f64) * half;
        let b = a + half;
        let r = integrate_lenient(&integrand, &[a, b], term_tol)?;
        err_sum += r.abs_err_estimate;
        depth = depth.max(r.refinement_levels);
        let term = r.value.re;
        running += r.value;
        sums.push(running);

        if k == 2 && head == Complex64::new(0.0, 0.0) && sums.iter().all(|s| *s == Complex64::new(0.0, 0.0)) {
            return Ok(QuadResult {
                value: Complex64::new(0.0, 0.0),
                abs_err_estimate: 0.0,
                refinement_levels: depth,
                converged: true,
            });
        }

        if let Some(p) = prev_term {
            let floor = 1e-3 * tol + 1e-14 * running.norm();
            if p * term > 0.0 && p.abs().min(term.abs()) > floor {
                return Err(Error::NonAlternating { index: k, at: a });
            }
        }
        prev_term = Some(term);

        // fast-decaying envelopes converge without acceleration
        if term.abs() < 1e-2 * tol {
            small_run += 1;
            if small_run >= 3 {
                return Ok(QuadResult {
                    value: running * sign,
                    abs_err_estimate: err_sum + term.abs(),
                    refinement_levels: depth,
                    converged: true,
                });
            }
        } else {
            small_run = 0;
        }

        if sums.len() >= 5 {
            let window = &sums[sums.len().saturating_sub(EPSILON_WINDOW)..];
            let (estimate, est_err) = wynn_epsilon(window);
            if let Some(prev) = prev_estimate {
                let drift = (estimate - prev).norm();
                let total = est_err.max(drift) + err_sum;
                if total <= tol {
                    return Ok(QuadResult {
                        value: estimate * sign,
                        abs_err_estimate: total,
                        refinement_levels: depth,
                        converged: true,
                    });
                }
            }
            prev_estimate = Some(estimate);
        }
    }
    let last = prev_estimate.unwrap_or(running);
    Err(Error::non_convergence(
        format!("oscillatory tail not converged after {MAX_HALF_PERIODS} half-periods"),
        last * sign,
        f64::NAN,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_envelope_has_closed_form() {
        // ∫_0^∞ e^{-q} cos(2q) dq = 1/5
        let r = oscillatory_tail(|q| (-q).exp(), Trig::Cos, 2.0, 0.0, 1e-12).unwrap();
        assert!((r.value.re - 0.2).abs() < 1e-12, "{}", r.value);
        let r = oscillatory_tail(|q| (-q).exp(), Trig::Sin, 2.0, 0.0, 1e-12).unwrap();
        assert!((r.value.re - 0.4).abs() < 1e-12);
        let r = oscillatory_tail(|q| (-q).exp(), Trig::Sin, -2.0, 0.0, 1e-12).unwrap();
        assert!((r.value.re + 0.4).abs() < 1e-12);
    }

    #[test]
    fn constant_envelope_gives_abel_value() {
        // Abel limit of ∫_1^∞ cos(q) dq is -sin(1)
        let r = oscillatory_tail(|_| 1.0, Trig::Cos, 1.0, 1.0, 1e-12).unwrap();
        assert!((r.value.re + 1f64.sin()).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn growing_half_period_sums_are_rejected() {
        // envelope with a sign change: contributions stop alternating
        let err = oscillatory_tail(|q| if q < 20.0 { 1.0 } else { -1.0 }, Trig::Cos, 1.0, 0.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NonAlternating { .. }), "{err:?}");
    }

    #[test]
    fn zero_frequency_is_a_domain_error() {
        assert!(oscillatory_tail(|q| 1.0 / q, Trig::Cos, 0.0, 1.0, 1e-8).is_err());
    }
}
