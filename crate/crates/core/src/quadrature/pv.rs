//! Cauchy principal values of `smooth(q) · oscillation(q) / Π (q - p_k)`
//! over the real line.
//!
//! Each pole gets a symmetric exclusion window on which the simple-pole
//! part is subtracted analytically; the remaining finite range is handled
//! by adaptive quadrature and the two semi-infinite tails by accelerated
//! half-period summation.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::oscillatory::{oscillatory_tail, Trig};
use super::{integrate_lenient, QuadResult};
use crate::error::{Error, Result};

const MAX_LEVELS: u32 = 6;

/// A finite exponential sum `Σ c_j exp(i ω_j q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Oscillation {
    terms: Vec<(Complex64, f64)>,
}

impl Oscillation {
    /// The constant 1.
    pub fn none() -> Self {
        Self::from_terms(vec![(Complex64::new(1.0, 0.0), 0.0)])
    }

    pub fn exp(omega: f64) -> Self {
        Self::from_terms(vec![(Complex64::new(1.0, 0.0), omega)])
    }

    pub fn cos(omega: f64) -> Self {
        Self::from_terms(vec![(Complex64::new(0.5, 0.0), omega), (Complex64::new(0.5, 0.0), -omega)])
    }

    pub fn sin(omega: f64) -> Self {
        Self::from_terms(vec![(Complex64::new(0.0, -0.5), omega), (Complex64::new(0.0, 0.5), -omega)])
    }

    /// Terms with equal frequency are merged; vanishing terms are dropped.
    pub fn from_terms(terms: Vec<(Complex64, f64)>) -> Self {
        let mut merged: Vec<(Complex64, f64)> = Vec::new();
        for (c, w) in terms {
            match merged.iter_mut().find(|(_, v)| *v == w) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, w)),
            }
        }
        merged.retain(|(c, _)| c.norm() > 0.0);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(c1, w1) in &self.terms {
            for &(c2, w2) in &other.terms {
                out.push((c1 * c2, w1 + w2));
            }
        }
        Self::from_terms(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(a, w)| (a * c, w)).collect())
    }

    pub fn eval(&self, q: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(c, w)| c * Complex64::from_polar(1.0, w * q))
            .sum()
    }
}

type SmoothFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Principal-value integral over the whole real line.
///
/// `smooth` must be continuous away from the declared break points and
/// bounded by `C |q|^tail_exponent` for large `|q|`. A tail exponent in
/// `[-1, 1)` is accepted only when every oscillation frequency is non-zero;
/// the tails are then summed in the Abel sense.
#[derive(Clone)]
pub struct PvProblem {
    smooth: SmoothFn,
    poles: Vec<f64>,
    oscillation: Oscillation,
    tail_exponent: f64,
    breakpoints: Vec<f64>,
    window: Option<f64>,
    tail_start: Option<f64>,
}

impl fmt::Debug for PvProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PvProblem")
            .field("poles", &self.poles)
            .field("oscillation", &self.oscillation)
            .field("tail_exponent", &self.tail_exponent)
            .field("breakpoints", &self.breakpoints)
            .field("window", &self.window)
            .field("tail_start", &self.tail_start)
            .finish_non_exhaustive()
    }
}

impl PvProblem {
    pub fn new<F>(smooth: F, oscillation: Oscillation) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            smooth: Arc::new(smooth),
            poles: Vec::new(),
            oscillation,
            tail_exponent: -2.0,
            breakpoints: Vec::new(),
            window: None,
            tail_start: None,
        }
    }

    pub fn with_poles(mut self, poles: &[f64]) -> Self {
        self.poles = poles.to_vec();
        self
    }

    pub fn with_breakpoints(mut self, points: &[f64]) -> Self {
        self.breakpoints = points.to_vec();
        self
    }

    /// Half-width of the exclusion window around each pole.
    pub fn with_window(mut self, delta: f64) -> Self {
        self.window = Some(delta);
        self
    }

    pub fn with_tail_exponent(mut self, exponent: f64) -> Self {
        self.tail_exponent = exponent;
        self
    }

    /// Where the finite range ends and the accelerated tails begin.
    pub fn with_tail_start(mut self, start: f64) -> Self {
        self.tail_start = Some(start);
        self
    }

    /// The same problem with the integrand multiplied by `c`.
    pub fn scaled(mut self, c: Complex64) -> Self {
        self.oscillation = self.oscillation.scale(c);
        self
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    /// The full integrand; infinite at the poles.
    pub fn integrand(&self, q: f64) -> Complex64 {
        (self.smooth)(q) * self.oscillation.eval(q) / self.pole_product(q, None)
    }

    fn pole_product(&self, q: f64, skip: Option<usize>) -> f64 {
        self.poles
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, p)| q - p)
            .product()
    }

    /// `integrand(q) · (q - p_j)`, regular at `p_j`.
    fn regular_part(&self, q: f64, j: usize) -> Complex64 {
        (self.smooth)(q) * self.oscillation.eval(q) / self.pole_product(q, Some(j))
    }

    /// Residue numerator at pole `j`; falls back to symmetric Richardson
    /// extrapolation when `smooth` is not finite at the pole itself.
    fn residue(&self, j: usize, delta: f64) -> Complex64 {
        let p = self.poles[j];
        let direct = self.regular_part(p, j);
        if direct.re.is_finite() && direct.im.is_finite() {
            return direct;
        }
        let mut h = [0.0; 6];
        let mut y = [Complex64::new(0.0, 0.0); 6];
        for i in 0..6 {
            let eps = delta * 0.5f64.powi(i as i32 + 1);
            h[i] = eps * eps;
            y[i] = 0.5 * (self.regular_part(p + eps, j) + self.regular_part(p - eps, j));
        }
        // Neville to h = 0
        for k in 1..6 {
            for i in (k..6).rev() {
                y[i] = (y[i] * h[i - k] - y[i - 1] * h[i]) / (h[i - k] - h[i]);
            }
        }
        y[5]
    }
}

struct Layout {
    delta: f64,
    tail_start: f64,
    poles: Vec<f64>,
}

fn layout(p: &PvProblem) -> Result<Layout> {
    if p.poles.iter().chain(&p.breakpoints).any(|v| !v.is_finite()) {
        return Err(Error::domain("poles and break points must be finite"));
    }
    if !(p.tail_exponent < 1.0) {
        return Err(Error::domain("tail exponent must be below 1"));
    }
    let mut poles = p.poles.clone();
    poles.sort_by(f64::total_cmp);
    let min_gap = poles.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let delta = match p.window {
        Some(d) if d > 0.0 && d.is_finite() => d,
        Some(_) => return Err(Error::domain("window half-width must be positive")),
        None => (0.25 * min_gap).min(0.5),
    };
    if let Some(w) = poles.windows(2).find(|w| w[1] - w[0] < 2.0 * delta) {
        return Err(Error::PoleTooClose(w[0], w[1]));
    }
    let outer = poles.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let spacing = if poles.len() > 1 { min_gap } else { 1.0 };
    let bp_outer = p.breakpoints.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut tail_start = p.tail_start.unwrap_or(outer + 3.0 * spacing).max(bp_outer + 1.0);
    if !poles.is_empty() {
        tail_start = tail_start.max(outer + 2.0 * delta);
    }
    Ok(Layout {
        delta,
        tail_start,
        poles,
    })
}

/// Principal value of `∫_{-∞}^{∞} smooth(q) · oscillation(q) / Π (q - p_k) dq`.
///
/// The evaluation is repeated with internal tolerances `tol`, `tol/10`,
/// ... until two successive values agree to `tol`.
pub fn pv_integrate(p: &PvProblem, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let lay = layout(p)?;
    // the layout works on sorted poles
    let mut sorted = p.clone();
    sorted.poles = lay.poles.clone();

    let mut prev: Option<Complex64> = None;
    let mut last_err = f64::NAN;
    for level in 0..MAX_LEVELS {
        let inner_tol = tol * 0.1f64.powi(level as i32);
        let (value, err) = match evaluate(&sorted, &lay, inner_tol) {
            Ok(v) => v,
            // below the rounding floor: keep the previous level
            Err(e) if prev.is_none() => return Err(e),
            Err(_) => break,
        };
        if let Some(v) = prev {
            let diff = (value - v).norm();
            if diff <= tol {
                return Ok(QuadResult {
                    value,
                    abs_err_estimate: diff.max(err),
                    refinement_levels: level + 1,
                    converged: true,
                });
            }
        }
        prev = Some(value);
        last_err = err;
    }
    Err(Error::non_convergence(
        "principal value did not stabilise across tolerance levels",
        prev.unwrap_or_default(),
        last_err,
    ))
}

fn evaluate(p: &PvProblem, lay: &Layout, tol: f64) -> Result<(Complex64, f64)> {
    let l = lay.tail_start;
    let d = lay.delta;
    let mut cuts = vec![-l, l];
    for &q in &lay.poles {
        cuts.extend([q - d, q, q + d]);
    }
    cuts.extend(p.breakpoints.iter().copied().filter(|b| b.abs() < l));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let residues: Vec<Complex64> = (0..lay.poles.len()).map(|j| p.residue(j, d)).collect();
    let segments = cuts.len() - 1;
    let budget = 0.5 * tol / segments as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let owner = lay.poles.iter().position(|&q| (mid - q).abs() < d);
        let r = match owner {
            Some(j) => {
                let q0 = lay.poles[j];
                let c = residues[j];
                integrate_lenient(&|q: f64| (p.regular_part(q, j) - c) / (q - q0), &[a, b], budget)?
            }
            None => integrate_lenient(&|q: f64| p.integrand(q), &[a, b], budget)?,
        };
        value += r.value;
        err += r.abs_err_estimate;
    }

    let components = p.oscillation.terms();
    let tail_budget = 0.5 * tol / (2 * components.len()).max(1) as f64;
    for &(c, omega) in components {
        for side in [1.0, -1.0] {
            // ∫_L^∞ env(side u) e^{i ω side u} du
            let env = |u: f64| {
                let q = side * u;
                c * (p.smooth)(q) / p.pole_product(q, None)
            };
            let r = tail(&env, side * omega, l, p.tail_exponent, tail_budget)?;
            value += r.0;
            err += r.1;
        }
    }
    Ok((value, err))
}

/// `∫_L^∞ env(u) e^{i ω u} du` split into real trigonometric pieces.
fn tail<F>(env: &F, omega: f64, l: f64, tail_exponent: f64, tol: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    if omega == 0.0 {
        if !(tail_exponent < -1.0) {
            return Err(Error::domain(
                "non-oscillating component needs a tail exponent below -1",
            ));
        }
        let mapped = |t: f64| {
            let v = 1.0 - t;
            let w = env(l + t / v) / (v * v);
            if w.re.is_finite() && w.im.is_finite() {
                w
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let r = integrate_lenient(&mapped, &[0.0, 0.5, 1.0], tol)?;
        return Ok((r.value, r.abs_err_estimate));
    }

    let probe = [l, 1.3 * l + 0.7, 2.1 * l + 1.9, 3.7 * l + 4.1, 7.3 * l + 11.0];
    let has_re = probe.iter().any(|&u| env(u).re != 0.0);
    let has_im = probe.iter().any(|&u| env(u).im != 0.0);
    let parts = (has_re as usize + has_im as usize).max(1) as f64;
    let t = 0.5 * tol / parts;

    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    // (u + i v)(cos + i sin) = (u cos - v sin) + i (u sin + v cos)
    if has_re {
        let c = oscillatory_tail(|x| env(x).re, Trig::Cos, omega, l, t)?;
        let s = oscillatory_tail(|x| env(x).re, Trig::Sin, omega, l, t)?;
        value += Complex64::new(c.value.re, s.value.re);
        err += c.abs_err_estimate + s.abs_err_estimate;
    }
    if has_im {
        let c = oscillatory_tail(|x| env(x).im, Trig::Cos, omega, l, t)?;
        let s = oscillatory_tail(|x| env(x).im, Trig::Sin, omega, l, t)?;
        value += Complex64::new(-s.value.re, c.value.re);
        err += c.abs_err_estimate + s.abs_err_estimate;
    }
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn one(_: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn cosine_over_two_poles() {
        // PV ∫ cos q / (q² - 1) dq = -π sin 1
        let p = PvProblem::new(one, Oscillation::cos(1.0)).with_poles(&[-1.0, 1.0]).with_tail_exponent(-2.0);
        let r = pv_integrate(&p, 1e-10).unwrap();
        assert!((r.value.re + PI * 1f64.sin()).abs() < 1e-10, "{}", r.value);
        assert!(r.value.im.abs() < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn cos_half_pi_over_two_poles() {
        // PV ∫ cos(πq/2) / (q² - 1) dq = -π
        let p = PvProblem::new(one, Oscillation::cos(PI / 2.0)).with_poles(&[-1.0, 1.0]).with_breakpoints(&[0.0]);
        let r = pv_integrate(&p, 1e-10).unwrap();
        assert!((r.value.re + PI).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn single_pole_sine_kernel() {
        // PV ∫ e^{iq}/q dq = iπ
        let p = PvProblem::new(one, Oscillation::exp(1.0)).with_poles(&[0.0]).with_tail_exponent(-1.0);
        let r = pv_integrate(&p, 1e-10).unwrap();
        assert!(r.value.re.abs() < 1e-10, "{}", r.value);
        assert!((r.value.im - PI).abs() < 1e-10);
    }

    #[test]
    fn no_poles_lorentzian() {
        // ∫ 1/(1+q²) dq = π with a non-oscillating integrand
        let p = PvProblem::new(|q: f64| Complex64::new(1.0 / (1.0 + q * q), 0.0), Oscillation::none());
        let r = pv_integrate(&p, 1e-11).unwrap();
        assert!((r.value.re - PI).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn slow_non_oscillating_tail_is_rejected() {
        let p = PvProblem::new(one, Oscillation::none()).with_poles(&[0.0]).with_tail_exponent(-1.0);
        assert!(matches!(pv_integrate(&p, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn crowded_poles_are_rejected() {
        let p = PvProblem::new(one, Oscillation::cos(1.0)).with_poles(&[0.0, 0.1]).with_window(0.2);
        assert!(matches!(pv_integrate(&p, 1e-8), Err(Error::PoleTooClose(..))));
    }

    #[test]
    fn window_choice_does_not_change_the_value() {
        let base = PvProblem::new(|q: f64| Complex64::new(q.abs().sqrt(), 0.0), Oscillation::cos(1.3))
            .with_poles(&[-1.0, 1.0])
            .with_breakpoints(&[0.0])
            .with_tail_exponent(-1.5);
        let a = pv_integrate(&base.clone().with_window(0.5), 1e-10).unwrap();
        let b = pv_integrate(&base.with_window(0.25), 1e-10).unwrap();
        assert!((a.value - b.value).norm() < 1e-9, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn oscillation_algebra() {
        let c = Oscillation::cos(2.0);
        let s = Oscillation::sin(2.0);
        // cos² + sin² = 1
        let sum = Oscillation::from_terms(c.mul(&c).terms().iter().chain(s.mul(&s).terms()).copied().collect());
        for q in [0.0, 0.7, -3.1] {
            assert!((sum.eval(q) - 1.0).norm() < 1e-15);
        }
        assert!((s.eval(0.4).re - 0.8f64.sin()).abs() < 1e-15);
    }
}
