//! One-parameter Mittag-Leffler function `E_α(z) = Σ z^k / Γ(αk + 1)`.
//!
//! Small arguments use the power series. Elsewhere the function is
//! recovered from its Laplace transform `s^{α-1} / (s^α - z)` by
//! integrating along a parabola around the branch cut and adding the
//! residues `e^{s_k}/α` of the poles the parabola leaves outside.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{ln_gamma, rgamma};
use crate::error::{Error, Result};
use crate::quadrature::integrate_lenient;
use crate::{EvalResult, Method};

const MAX_SERIES_TERMS: usize = 20_000;

/// Radius below which the power series keeps at least ten correct digits:
/// the cancellation loss is bounded by `E_α(|z|) ≈ exp(|z|^{1/α})`.
pub fn series_radius(alpha: f64) -> f64 {
    5f64.min(1e5f64.ln().powf(alpha))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Mittag-Leffler order {alpha} outside (0, 2]")))
    }
}

/// `E_α(z)` for `α ∈ (0, 2]`, choosing the method by `|z|`.
pub fn mittag_leffler(alpha: f64, z: Complex64) -> Result<EvalResult> {
    check_alpha(alpha)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("Mittag-Leffler argument must be finite"));
    }
    if z.norm() <= series_radius(alpha) {
        mittag_leffler_series(alpha, z)
    } else {
        mittag_leffler_inversion(alpha, z)
    }
}

/// Power-series evaluation at any `z`; the error estimate accounts for
/// cancellation, so it is honest but may be large for big `|z|`.
pub fn mittag_leffler_series(alpha: f64, z: Complex64) -> Result<EvalResult> {
    check_alpha(alpha)?;
    let eps = f64::EPSILON;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    let mut power = Complex64::new(1.0, 0.0);
    let ln_z = z.ln();
    let mut quiet = 0;
    for k in 1..MAX_SERIES_TERMS {
        power *= z;
        let arg = alpha * k as f64 + 1.0;
        let term = if arg < 170.0 && power.norm().is_finite() {
            power * rgamma(arg)
        } else {
            (ln_z * k as f64 - ln_gamma(arg)).exp()
        };
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::non_convergence("series term overflowed", sum, f64::INFINITY));
        }
        sum += term;
        let t = term.norm();
        abs_sum += t;
        // terms decrease once αk exceeds |z|^{1/α}
        let past_peak = arg > z.norm().powf(1.0 / alpha) + 1.0;
        if past_peak && t <= 0.5 * eps * sum.norm().max(eps * abs_sum) {
            quiet += 1;
            if quiet >= 3 {
                let value = if z.im == 0.0 { Complex64::new(sum.re, 0.0) } else { sum };
                return Ok(EvalResult {
                    value,
                    abs_err: 4.0 * eps * abs_sum + t,
                    method: Method::PowerSeries,
                    evaluations: k + 1,
                    converged: true,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::non_convergence(
        format!("Mittag-Leffler series not converged after {MAX_SERIES_TERMS} terms"),
        sum,
        f64::NAN,
    ))
}

/// Roots of `s^α = z` on the principal sheet, `arg s ∈ (-π, π]`.
fn poles(alpha: f64, z: Complex64) -> Vec<Complex64> {
    if z.norm() == 0.0 {
        return Vec::new();
    }
    let r = z.norm().powf(1.0 / alpha);
    let theta = z.arg();
    let kmax = (alpha / 2.0 + 1.0).ceil() as i64;
    (-kmax..=kmax)
        .map(|k| (theta + 2.0 * PI * k as f64) / alpha)
        .filter(|&phi| phi > -PI && phi <= PI)
        .map(|phi| Complex64::from_polar(r, phi))
        .collect()
}

/// Laplace-inversion evaluation on the parabola `s(u) = μ(1 + iu)²`.
pub fn mittag_leffler_inversion(alpha: f64, z: Complex64) -> Result<EvalResult> {
    check_alpha(alpha)?;
    let ps = poles(alpha, z);
    // a point s lies right of the parabola iff Re √s > √μ
    let root_re: Vec<f64> = ps.iter().map(|s| ((s.norm() + s.re) / 2.0).sqrt()).collect();
    let sqrt_mu = (0..=50)
        .map(|i| 0.5 + 0.05 * i as f64)
        .map(|m| {
            let gap = root_re.iter().map(|r| (m - r).abs()).fold(f64::INFINITY, f64::min);
            (m, gap.min(10.0) - 0.1 * m)
        })
        .fold((0.5, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0;
    let mu = sqrt_mu * sqrt_mu;

    let calls = Cell::new(0usize);
    let integrand = |u: f64| {
        calls.set(calls.get() + 1);
        let w = Complex64::new(1.0, u);
        let s = mu * w * w;
        let sa = s.powf(alpha);
        s.exp() * sa / s * w / (sa - z)
    };
    let u_max = (1.0 + 45.0 / mu).sqrt();
    let tol = 1e-15;
    let real_axis = z.im == 0.0;
    let (integral, quad_err) = if real_axis {
        // f(-u) = conj f(u)
        let r = integrate_lenient(&integrand, &[0.0, 0.5, u_max], tol)?;
        (Complex64::new(2.0 * r.value.re, 0.0), 2.0 * r.abs_err_estimate)
    } else {
        let r = integrate_lenient(&integrand, &[-u_max, -0.5, 0.0, 0.5, u_max], tol)?;
        (r.value, r.abs_err_estimate)
    };
    let mut value = integral * (mu / PI);
    for (s, r) in ps.iter().zip(&root_re) {
        if *r > sqrt_mu {
            value += s.exp() / alpha;
        }
    }
    if real_axis {
        value.im = 0.0;
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::non_convergence("Mittag-Leffler value overflows", value, f64::INFINITY));
    }
    // rounding in the e^μ-sized integrand near u = 0
    let abs_err = quad_err * mu / PI + 64.0 * f64::EPSILON * mu.exp() + 1e-300;
    Ok(EvalResult {
        value,
        abs_err,
        method: Method::LaplaceInversion,
        evaluations: calls.get(),
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn order_one_is_exponential() {
        for z in [c(1.0, 0.0), c(-3.0, 0.0), c(0.5, 2.0), c(-20.0, 0.0), c(10.0, 5.0)] {
            let r = mittag_leffler(1.0, z).unwrap();
            let e = z.exp();
            assert!((r.value - e).norm() <= 1e-12 * e.norm().max(1.0), "{z}: {} vs {e}", r.value);
        }
    }

    #[test]
    fn order_two_is_hyperbolic_cosine() {
        for z in [c(4.0, 0.0), c(-30.0, 0.0), c(10.0, -8.0)] {
            let r = mittag_leffler(2.0, z).unwrap();
            let e = z.sqrt().cosh();
            assert!((r.value - e).norm() <= 1e-11 * e.norm().max(1.0), "{z}: {} vs {e}", r.value);
        }
    }

    #[test]
    fn half_order_against_erfc() {
        // E_{1/2}(-1) = e erfc(1)
        let r = mittag_leffler(0.5, c(-1.0, 0.0)).unwrap();
        assert!((r.value.re - 0.427_583_576_155_807_004_41).abs() < 1e-14);
        let r = mittag_leffler_inversion(0.5, c(-1.0, 0.0)).unwrap();
        assert!((r.value.re - 0.427_583_576_155_807_004_41).abs() < 1e-12);
    }

    #[test]
    fn large_arguments_against_extended_precision_series() {
        // reference values: series summed at 400-500 significant digits
        let cases = [
            (0.75, c(-2.5, 0.0), c(0.156_426_958_611_947_442_89, 0.0)),
            (0.3, c(-5.0, 0.0), c(0.137_080_869_020_270_638_89, 0.0)),
            (1.5, c(-40.0, 0.0), c(-0.009_930_965_478_693_434_638, 0.0)),
            (0.9, c(-30.0, 10.0), c(0.003_300_283_724_776_038_144_2, 0.001_167_246_620_126_280_792_1)),
            (
                0.6,
                Complex64::from_polar(50.0, 2.0),
                c(0.003_708_613_558_769_394_536_8, 0.008_251_118_434_299_767_610_6),
            ),
        ];
        for (a, z, want) in cases {
            let r = mittag_leffler(a, z).unwrap();
            assert!((r.value - want).norm() <= 1e-10 * want.norm().max(1.0), "α={a} z={z}: {} vs {want}", r.value);
            assert!(r.abs_err < 1e-9 * want.norm().max(1.0));
        }
    }

    #[test]
    fn zero_argument_is_one() {
        for a in [0.3, 1.0, 1.7] {
            assert_eq!(mittag_leffler(a, c(0.0, 0.0)).unwrap().value, c(1.0, 0.0));
        }
    }

    #[test]
    fn methods_agree_on_the_overlap() {
        for a in [0.3, 0.6, 0.9, 1.4, 1.9] {
            let rad = series_radius(a);
            for k in 0..8 {
                let z = Complex64::from_polar(0.7 * rad, -3.0 + 0.8 * k as f64);
                let s = mittag_leffler_series(a, z).unwrap();
                let i = mittag_leffler_inversion(a, z).unwrap();
                assert!((s.value - i.value).norm() < 1e-9 * s.value.norm().max(1.0), "α={a} z={z}: {} vs {}", s.value, i.value);
            }
        }
    }

    #[test]
    fn order_out_of_range() {
        assert!(mittag_leffler(0.0, c(1.0, 0.0)).is_err());
        assert!(mittag_leffler(2.5, c(1.0, 0.0)).is_err());
    }
}
