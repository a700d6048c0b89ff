//! Free particle under the space-time fractional equation: the
//! Mittag-Leffler k-integral, its Fox H closed forms, and their limits.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, integrate_with_breakpoints, oscillatory_tail, Trig};
use crate::specfun::{foxh_eval, mittag_leffler, FoxHParams, MellinBarnesConfig};
use crate::EvalResult;

/// Absolute tolerance of the k-integral.
const INTEGRAL_TOL: f64 = 1e-10;

/// Orders and constants of the space-time fractional free particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    /// Time order, in `(0, 1]`.
    pub alpha: f64,
    /// Space order, in `(1, 2]`.
    pub beta: f64,
    /// Generalized diffusion constant `Ď_{α,β}`.
    pub d_check: f64,
    pub hbar: f64,
    /// Overall complex scale of the wavefunction.
    pub psi0: Complex64,
}

impl FracParams {
    pub fn new(alpha: f64, beta: f64, d_check: f64, hbar: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            d_check,
            hbar,
            psi0: Complex64::new(1.0, 0.0),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_psi0(mut self, psi0: Complex64) -> Self {
        self.psi0 = psi0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.beta > 1.0 && self.beta <= 2.0) {
            return Err(Error::domain(format!("beta must lie in (1, 2], got {}", self.beta)));
        }
        if !(self.d_check > 0.0 && self.hbar > 0.0) {
            return Err(Error::domain("diffusion constant and hbar must be positive"));
        }
        if !(self.psi0.re.is_finite() && self.psi0.im.is_finite()) {
            return Err(Error::domain("psi0 must be finite"));
        }
        Ok(())
    }

    /// `i^α Ď ħ^{β-1} t^α`: the coefficient of `k^β` in the
    /// Mittag-Leffler argument, up to sign.
    pub fn phase_scale(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.alpha / 2.0) * self.d_check * self.hbar.powf(self.beta - 1.0) * t.powf(self.alpha)
    }
}

/// Which representation produced a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMethod {
    /// Cosine transform of the Mittag-Leffler time factor.
    MittagLefflerIntegral,
    /// `H^{1,2}_{3,2}` closed form for general orders.
    FoxH,
    /// `β = 2`: `H^{1,2}_{3,2}` in `4 i^α D t^α / x²`.
    TimeFractionalH32,
    /// `β = 2`: `H^{2,0}_{1,2}` in `x² / (4 i^α D t^α)`.
    TimeFractionalH12,
    /// `β = 2`: `H^{1,0}_{1,1}` in `x² / (i^α D t^α)`.
    TimeFractionalH11,
    /// `α = 1, β = 2`: the Schrödinger propagator.
    Gaussian,
    /// `α = 1`: `H^{1,2}_{3,2}` in `i D ħ^{β-1} t (2/|x|)^β`.
    SpaceFractionalH32,
    /// `α = 1`: Laskin's `H^{1,1}_{2,2}` form.
    LaskinH22,
}

impl FieldMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::MittagLefflerIntegral => "mittag_leffler_integral",
            Self::FoxH => "fox_h",
            Self::TimeFractionalH32 => "time_fractional_h32",
            Self::TimeFractionalH12 => "time_fractional_h12",
            Self::TimeFractionalH11 => "time_fractional_h11",
            Self::Gaussian => "gaussian",
            Self::SpaceFractionalH32 => "space_fractional_h32",
            Self::LaskinH22 => "laskin_h22",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefieldSample {
    pub x: f64,
    pub t: f64,
    pub value: Complex64,
    pub method: FieldMethod,
    pub err: f64,
    pub converged: bool,
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("t must be positive, got {t}")))
    }
}

fn check_position(x: f64) -> Result<()> {
    if x != 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("the closed forms need x != 0"))
    }
}

/// `(Ψ₀/π) ∫₀^∞ cos(kx) E_α(-i^α Ď ħ^{β-1} k^β t^α) dk`.
///
/// For `α < 1` the time factor decays like `k^{-β}` and the integral is
/// taken on the real axis with an accelerated oscillatory tail. For `α = 1`
/// the factor is a pure phase and the ray is rotated to
/// `k = r e^{-iπ/2β}`, where it decays like `exp(-c r^β)`.
pub fn psi_integral(p: &FracParams, x: f64, t: f64) -> Result<WavefieldSample> {
    p.validate()?;
    check_time(t)?;
    let c = p.phase_scale(t);
    let (value, err) = if p.alpha == 1.0 {
        let tilt = Complex64::from_polar(1.0, -PI / (2.0 * p.beta));
        let decay = c.norm();
        let f = |r: f64| (tilt * r * x).cos() * (-decay * r.powf(p.beta)).exp();
        let r = integrate_to_infinity(f, 0.0, INTEGRAL_TOL)?;
        (tilt * r.value, r.abs_err_estimate)
    } else {
        let time_factor = |k: f64| -> Complex64 {
            mittag_leffler(p.alpha, -c * k.powf(p.beta))
                .map(|r| r.value)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        };
        if x == 0.0 {
            let r = integrate_to_infinity(time_factor, 0.0, INTEGRAL_TOL)?;
            (r.value, r.abs_err_estimate)
        } else {
            let w = x.abs();
            let knee = (1.0 / c.norm()).powf(1.0 / p.beta);
            let split = (16.0 * PI / w).max(8.0 * knee);
            let mut cuts = vec![0.0, knee.min(split / 2.0)];
            let step = PI / w;
            let mut k = step;
            while k < split {
                if k > cuts[cuts.len() - 1] {
                    cuts.push(k);
                }
                k += step;
            }
            cuts.push(split);
            let head = integrate_with_breakpoints(|k| (k * w).cos() * time_factor(k), &cuts, INTEGRAL_TOL / 4.0)?;
            let re = oscillatory_tail(|k| time_factor(k).re, Trig::Cos, w, split, INTEGRAL_TOL / 4.0)?;
            let im = oscillatory_tail(|k| time_factor(k).im, Trig::Cos, w, split, INTEGRAL_TOL / 4.0)?;
            let value = head.value + re.value + Complex64::i() * im.value;
            (value, head.abs_err_estimate + re.abs_err_estimate + im.abs_err_estimate)
        }
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::non_convergence("Mittag-Leffler factor failed inside the k-integral", value, err));
    }
    Ok(WavefieldSample {
        x,
        t,
        value: p.psi0 * (value / PI),
        method: FieldMethod::MittagLefflerIntegral,
        err: p.psi0.norm() / PI * err,
        converged: true,
    })
}

// Ψ₀ multiplies last so the value is exactly linear in it.
fn h_sample(x: f64, t: f64, psi0: Complex64, prefactor: f64, r: EvalResult, method: FieldMethod) -> WavefieldSample {
    WavefieldSample {
        x,
        t,
        value: psi0 * (prefactor * r.value),
        method,
        err: psi0.norm() * prefactor * r.abs_err,
        converged: r.converged,
    }
}

fn general_h32(alpha: f64, beta: f64) -> Result<FoxHParams> {
    FoxHParams::real(
        1,
        2,
        &[(0.5, beta / 2.0), (0.0, 1.0), (0.0, beta / 2.0)],
        &[(0.0, 1.0), (0.0, alpha)],
    )
}

/// `Ψ₀/(√π|x|) · H^{1,2}_{3,2}(i^α Ď ħ^{β-1} t^α (2/|x|)^β)` with upper
/// pairs `(1/2, β/2), (0, 1), (0, β/2)` and lower pairs `(0, 1), (0, α)`.
pub fn psi_foxh(p: &FracParams, x: f64, t: f64) -> Result<WavefieldSample> {
    p.validate()?;
    check_time(t)?;
    check_position(x)?;
    let h = general_h32(p.alpha, p.beta)?;
    let z = p.phase_scale(t) * (2.0 / x.abs()).powf(p.beta);
    let r = foxh_eval(&h, z, &MellinBarnesConfig::default())?;
    let pre = 1.0 / (PI.sqrt() * x.abs());
    Ok(h_sample(x, t, p.psi0, pre, r, FieldMethod::FoxH))
}

/// The three `β = 2` closed forms, in the order h32, h12, h11.
pub fn psi_time_fractional(p: &FracParams, x: f64, t: f64) -> Result<[WavefieldSample; 3]> {
    p.validate()?;
    check_time(t)?;
    check_position(x)?;
    if p.beta != 2.0 {
        return Err(Error::domain("time-fractional forms need beta = 2"));
    }
    let cfg = MellinBarnesConfig::default();
    let a = p.alpha;
    // i^α D_α t^α with D_α = Ď ħ
    let w = Complex64::from_polar(1.0, PI * a / 2.0) * p.d_check * p.hbar * t.powf(a);
    let x2 = x * x;
    let pre = 1.0 / (PI.sqrt() * x.abs());

    let h32 = FoxHParams::real(1, 2, &[(0.5, 1.0), (0.0, 1.0), (0.0, 1.0)], &[(0.0, 1.0), (0.0, a)])?;
    let h12 = FoxHParams::real(2, 0, &[(1.0, a)], &[(0.5, 1.0), (1.0, 1.0)])?;
    let h11 = FoxHParams::real(1, 0, &[(1.0, a)], &[(1.0, 2.0)])?;
    Ok([
        h_sample(x, t, p.psi0, pre, foxh_eval(&h32, 4.0 * w / x2, &cfg)?, FieldMethod::TimeFractionalH32),
        h_sample(x, t, p.psi0, pre, foxh_eval(&h12, x2 / (4.0 * w), &cfg)?, FieldMethod::TimeFractionalH12),
        h_sample(x, t, p.psi0, 1.0 / x.abs(), foxh_eval(&h11, x2 / w, &cfg)?, FieldMethod::TimeFractionalH11),
    ])
}

/// The two `α = 1` closed forms: the `H^{1,2}_{3,2}` form and Laskin's
/// `π Ψ₀/(β|x|) · H^{1,1}_{2,2}(|x| (ħ/(iDt))^{1/β} / ħ)`.
pub fn psi_space_fractional(p: &FracParams, x: f64, t: f64) -> Result<[WavefieldSample; 2]> {
    p.validate()?;
    check_time(t)?;
    check_position(x)?;
    if p.alpha != 1.0 {
        return Err(Error::domain("space-fractional forms need alpha = 1"));
    }
    let cfg = MellinBarnesConfig::default();
    let b = p.beta;
    let mut main = psi_foxh(p, x, t)?;
    main.method = FieldMethod::SpaceFractionalH32;

    let laskin = FoxHParams::real(1, 1, &[(1.0, 1.0 / b), (1.0, 0.5)], &[(1.0, 1.0), (1.0, 0.5)])?;
    let z = (p.hbar / Complex64::new(0.0, p.d_check * t)).powf(1.0 / b) * x.abs() / p.hbar;
    let r = foxh_eval(&laskin, z, &cfg)?;
    let pre = PI / (b * x.abs());
    Ok([main, h_sample(x, t, p.psi0, pre, r, FieldMethod::LaskinH22)])
}

/// `Ψ₀ (4πi D₁ t)^{-1/2} exp(-x²/(4i D₁ t))`, principal square root.
pub fn gaussian_limit(x: f64, t: f64, d1: f64, psi0: Complex64) -> Result<Complex64> {
    check_time(t)?;
    if !(d1 > 0.0) {
        return Err(Error::domain("D1 must be positive"));
    }
    let w = Complex64::new(0.0, 4.0 * d1 * t);
    Ok(psi0 * ((-x * x / w).exp() / (PI * w).sqrt()))
}

/// The kernel `H^{1,1}_{1,2}(i^α Ď ħ^{β-1} k^β t^α)` of the k-integral, with
/// upper pair `(0, 1)` and lower pairs `(0, 1), (0, α)`. Equals the
/// Mittag-Leffler time factor at the same `k`.
pub fn time_factor_foxh(p: &FracParams, k: f64, t: f64) -> Result<EvalResult> {
    p.validate()?;
    check_time(t)?;
    let h = FoxHParams::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, p.alpha)])?;
    foxh_eval(&h, p.phase_scale(t) * k.powf(p.beta), &MellinBarnesConfig::default())
}

/// `E_α(-i^α Ď ħ^{β-1} k^β t^α)`.
pub fn time_factor(p: &FracParams, k: f64, t: f64) -> Result<EvalResult> {
    p.validate()?;
    check_time(t)?;
    mittag_leffler(p.alpha, -p.phase_scale(t) * k.powf(p.beta))
}

/// `∫_{-L}^{L} |Ψ(x, t)|² dx` from the general closed form; a diagnostic
/// for the scale `Ψ₀`, which the delta initial state leaves undetermined.
pub fn norm_at(p: &FracParams, t: f64, half_width: f64, tol: f64) -> Result<f64> {
    if !(half_width > 0.0) {
        return Err(Error::domain("half-width must be positive"));
    }
    let density = |x: f64| -> Complex64 {
        let v = psi_foxh(p, x, t).map(|s| s.value.norm_sqr()).unwrap_or(f64::NAN);
        Complex64::new(v, 0.0)
    };
    let r = integrate_with_breakpoints(density, &[0.0, half_width.min(1.0), half_width], tol / 2.0)?;
    Ok(2.0 * r.value.re)
}

/// CSV header for wavefield samples.
pub const WAVEFIELD_COLUMNS: [&str; 9] = ["alpha", "beta", "x", "t", "method", "re", "im", "err", "converged"];

pub fn wavefield_csv_line(p: &FracParams, s: &WavefieldSample) -> String {
    format!(
        "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{}",
        p.alpha,
        p.beta,
        s.x,
        s.t,
        s.method.name(),
        s.value.re,
        s.value.im,
        s.err,
        s.converged
    )
}
