//! Gamma function for real and complex arguments.
//!
//! Lanczos approximation (g = 7, nine coefficients) in the half-plane
//! `Re(z) >= 1/2`, reflection formula elsewhere. Values are assembled in
//! log form so that large arguments do not overflow intermediate powers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` for `Re(z) >= 1/2`, branch not normalised.
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + series.ln()
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz}), |e^{2iπz}| = e^{-2π Im z} < 1
    let i = Complex64::i();
    let w = (i * 2.0 * PI * z).exp();
    -i * PI * z + Complex64::new(0.0, 0.5).ln() + (Complex64::new(1.0, 0.0) - w).ln()
}

/// Complex logarithm of the gamma function (some branch of it).
///
/// Only `exp(ln_gamma_complex(z))` is meaningful; the imaginary part is not
/// reduced to the principal log-gamma branch.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z))
    } else {
        let one = Complex64::new(1.0, 0.0);
        Ok(PI.ln() - ln_sin_pi(z) - ln_gamma_lanczos(one - z))
    }
}

/// `ln(1/Γ(z))`; returns `-inf` real part at the poles of Γ.
pub(crate) fn ln_rgamma_complex(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    }
    -ln_gamma_complex(z).expect("poles handled above")
}

/// Γ(z) for complex `z`.
///
/// Relative accuracy is about 1e-14 for `|z| <= 50`. Non-positive integers
/// are poles and produce [`Error::GammaPole`]; results beyond the f64
/// range produce [`Error::GammaOverflow`].
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z));
    }
    let value = if z.re >= 0.5 {
        ln_gamma_lanczos(z).exp()
    } else {
        let one = Complex64::new(1.0, 0.0);
        let reflected = ln_gamma_lanczos(one - z).exp();
        PI / ((z * PI).sin() * reflected)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::GammaOverflow(z))
    }
}

/// Reciprocal gamma function, entire in `z` (zero at the poles of Γ).
pub fn rgamma_complex(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_lanczos(z)).exp()
    } else {
        let one = Complex64::new(1.0, 0.0);
        (z * PI).sin() * ln_gamma_lanczos(one - z).exp() / PI
    }
}

fn lanczos_real(x: f64) -> f64 {
    let xm1 = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (xm1 + k as f64);
    }
    let t = xm1 + LANCZOS_G + 0.5;
    (LN_SQRT_2PI + (xm1 + 0.5) * t.ln() - t).exp() * series
}

/// Γ(x) for real `x`.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.round() {
        return Err(Error::GammaPole(Complex64::new(x, 0.0)));
    }
    let value = if x >= 0.5 {
        lanczos_real(x)
    } else {
        PI / ((PI * x).sin() * lanczos_real(1.0 - x))
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::GammaOverflow(Complex64::new(x, 0.0)))
    }
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    ln_gamma_lanczos(Complex64::new(x, 0.0)).re
}

/// `1/Γ(x)` for real `x`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x >= 0.5 {
        1.0 / lanczos_real(x)
    } else {
        (PI * x).sin() * lanczos_real(1.0 - x) / PI
    }
}
