use num_complex::Complex64;

use super::GridFunction;
use crate::error::{Error, Result};
use crate::quadrature::integrate_lenient;
use crate::specfun::rgamma;
use crate::{EvalResult, Method};

fn check_order(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Caputo order {q} outside (0, 1)")))
    }
}

/// L1 scheme: `f` is replaced by its piecewise-linear interpolant and the
/// Caputo integral is evaluated exactly, so `t` need not be a node.
///
/// The grid must start at 0.
pub fn caputo_derivative(f: &GridFunction, q: f64, t: f64) -> Result<EvalResult> {
    check_order(q)?;
    if f.domain_start != 0.0 {
        return Err(Error::domain("Caputo grid must start at t = 0"));
    }
    if !(t > 0.0 && t <= f.end() * (1.0 + 1e-12)) {
        return Err(Error::domain(format!("t = {t} outside (0, {}]", f.end())));
    }
    let h = f.spacing;
    let e = 1.0 - q;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut used = 0;
    for (k, w) in f.samples.windows(2).enumerate() {
        let t0 = k as f64 * h;
        if t0 >= t {
            break;
        }
        let t1 = ((k + 1) as f64 * h).min(t);
        let slope = (w[1] - w[0]) / h;
        acc += slope * ((t - t0).powf(e) - (t - t1).powf(e));
        used += 1;
    }
    Ok(EvalResult {
        value: acc * rgamma(2.0 - q),
        abs_err: f64::NAN,
        method: Method::Quadrature,
        evaluations: used,
        converged: true,
    })
}

/// `∫_0^T e^{-st} g(t) dt` for the piecewise-linear interpolant `g` of the samples.
fn laplace_of_interpolant(f: &GridFunction, s: Complex64) -> Complex64 {
    let h = f.spacing;
    let decay = (-s * h).exp();
    let one = Complex64::new(1.0, 0.0);
    let w0 = (one - decay) / s;
    let w1 = (one - decay * (one + s * h)) / (s * s);
    f.samples
        .windows(2)
        .enumerate()
        .map(|(k, w)| (-s * (k as f64 * h)).exp() * (w[0] * w0 + (w[1] - w[0]) / h * w1))
        .sum()
}

/// Both sides of the Caputo Laplace property for `0 < q < 1`:
/// `(∫_0^T e^{-st} D^q f dt, s^q F(s) - s^{q-1} f(0))`.
pub fn caputo_laplace_sides(f: &GridFunction, q: f64, s: Complex64) -> Result<(Complex64, Complex64)> {
    check_order(q)?;
    if !(s.re > 0.0) {
        return Err(Error::domain("Laplace variable needs Re(s) > 0"));
    }
    let big_t = f.end();
    let lhs_integrand = |t: f64| {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let d = caputo_derivative(f, q, t.min(big_t)).map(|r| r.value).unwrap_or_default();
        d * (-s * t).exp()
    };
    let lhs = integrate_lenient(&lhs_integrand, &[0.0, f.spacing, big_t.min(1.0).max(f.spacing), big_t], 1e-10)?;
    let rhs = s.powf(q) * laplace_of_interpolant(f, s) - s.powf(q - 1.0) * f.samples[0];
    Ok((lhs.value, rhs))
}

/// `|LHS - RHS|` of [`caputo_laplace_sides`]; `f` must have decayed
/// (relative to `e^{sT}`) by the end of its grid.
pub fn caputo_laplace_check(f: &GridFunction, q: f64, s: Complex64) -> Result<f64> {
    let (l, r) = caputo_laplace_sides(f, q, s)?;
    Ok((l - r).norm())
}
