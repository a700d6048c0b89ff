//! Infinite square well on `(-a, a)` for the space-fractional equation:
//! eigenstates, their momentum representation, the principal-value
//! recovery experiment, and the effective ordinary potential.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::GridFunction;
use crate::quadrature::{pv_integrate, Oscillation, PvProblem};

/// Box half-width, fractional order and physical constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub a: f64,
    /// Space order, in `(1, 2]`.
    pub beta: f64,
    pub d_beta: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl WellSpec {
    pub fn new(a: f64, beta: f64, d_beta: f64, hbar: f64, mass: f64) -> Result<Self> {
        let s = Self { a, beta, d_beta, hbar, mass };
        s.validate()?;
        Ok(s)
    }

    /// The unit box `a = ħ = m = D = 1` at order `beta`.
    pub fn unit(beta: f64) -> Self {
        Self {
            a: 1.0,
            beta,
            d_beta: 1.0,
            hbar: 1.0,
            mass: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("D_beta", self.d_beta), ("hbar", self.hbar), ("mass", self.mass)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.beta > 1.0 && self.beta <= 2.0) {
            return Err(Error::domain(format!("beta must lie in (1, 2], got {}", self.beta)));
        }
        Ok(())
    }

    /// `nπ/2a`.
    pub fn wavenumber(&self, n: u32) -> f64 {
        n as f64 * PI / (2.0 * self.a)
    }

    /// `E_n = D (nπħ/2a)^β`.
    pub fn energy(&self, n: u32) -> f64 {
        self.d_beta * (self.hbar * self.wavenumber(n)).powf(self.beta)
    }
}

/// Which closed form the wavefunction is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenForm {
    /// `A sin(nπ(x+a)/2a)`.
    SinShifted,
    /// `A cos(nπx/2a)` for odd `n`, `A sin(nπx/2a)` for even `n`.
    CosFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenstate {
    pub n: u32,
    pub energy: f64,
    pub amplitude: f64,
    pub form: EigenForm,
    pub a: f64,
    pub hbar: f64,
}

/// Eigenstate `n ≥ 1`; `normalized` selects `A = 1/√a`, otherwise `A = 1`.
pub fn eigenstate(spec: &WellSpec, n: u32, normalized: bool) -> Result<Eigenstate> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::domain("quantum number must be at least 1"));
    }
    Ok(Eigenstate {
        n,
        energy: spec.energy(n),
        amplitude: if normalized { 1.0 / spec.a.sqrt() } else { 1.0 },
        form: EigenForm::SinShifted,
        a: spec.a,
        hbar: spec.hbar,
    })
}

impl Eigenstate {
    fn k(&self) -> f64 {
        self.n as f64 * PI / (2.0 * self.a)
    }

    /// `ψ_n(x)`, zero outside the box.
    pub fn psi(&self, x: f64) -> f64 {
        if x.abs() >= self.a {
            return 0.0;
        }
        match self.form {
            EigenForm::SinShifted => self.amplitude * (self.k() * (x + self.a)).sin(),
            EigenForm::CosFamily => self.amplitude * self.cos_family(x),
        }
    }

    /// The cos/sin form without the sign that relates it to the shifted sine.
    pub fn cos_family(&self, x: f64) -> f64 {
        if self.n % 2 == 1 {
            (self.k() * x).cos()
        } else {
            (self.k() * x).sin()
        }
    }

    /// `sin(nπ(x+a)/2a) = form_sign · cos_family(x)`.
    pub fn form_sign(&self) -> f64 {
        let half = self.n as f64 * PI / 2.0;
        if self.n % 2 == 1 {
            half.sin().round()
        } else {
            half.cos().round()
        }
    }

    pub fn with_form(mut self, form: EigenForm) -> Self {
        self.form = form;
        self
    }

    /// `Φ_n(p) = ∫ e^{-ipx/ħ} ψ_n(x) dx` for the shifted-sine form, in a
    /// sinc representation that is regular at `p = ±nπħ/2a`.
    pub fn momentum(&self, p: f64) -> Complex64 {
        let a = self.a;
        let k = p / self.hbar;
        let kn = self.k();
        let sinc = |u: f64| if u.abs() < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
        let minus = a * sinc((kn - k) * a);
        let plus = a * sinc((kn + k) * a);
        let half = self.n as f64 * PI / 2.0;
        let value = if self.n % 2 == 1 {
            Complex64::new(half.sin() * (minus + plus), 0.0)
        } else {
            Complex64::new(0.0, -half.cos() * (minus - plus))
        };
        let mut v = value * self.amplitude;
        if self.form == EigenForm::CosFamily {
            v *= self.form_sign();
        }
        v
    }

    /// `∫_{-a}^{a} |ψ|² dx`.
    pub fn norm_squared(&self) -> f64 {
        self.amplitude * self.amplitude * self.a
    }
}

/// Momentum representation of the normalized shifted-sine state `n`.
pub fn momentum_wavefunction(spec: &WellSpec, n: u32, p: f64) -> Result<Complex64> {
    Ok(eigenstate(spec, n, true)?.momentum(p))
}

/// `D (nπħ/2a)^β - (ħ²/2m)(nπ/2a)²`.
pub fn effective_potential_well(spec: &WellSpec, n: u32) -> f64 {
    let k = spec.wavenumber(n);
    spec.energy(n) - spec.hbar * spec.hbar / (2.0 * spec.mass) * k * k
}

/// Pointwise effective potential and the indices where it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectivePotential {
    pub values: GridFunction,
    /// Endpoints and points where `|X|` is below `1e-8 max|X|`; their
    /// values are NaN.
    pub flagged: Vec<usize>,
}

/// `(ħ²/2m) X''/X + E` with second-order central differences.
pub fn effective_potential_general(x: &GridFunction, energy: f64, spec: &WellSpec) -> Result<EffectivePotential> {
    let h = x.spacing;
    let s = &x.samples;
    let scale = s.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let coef = spec.hbar * spec.hbar / (2.0 * spec.mass);
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let mut out = vec![nan; s.len()];
    let mut flagged = vec![0, s.len() - 1];
    for k in 1..s.len() - 1 {
        if s[k].norm() <= 1e-8 * scale {
            flagged.push(k);
            continue;
        }
        let d2 = (s[k + 1] - 2.0 * s[k] + s[k - 1]) / (h * h);
        out[k] = coef * d2 / s[k] + energy;
    }
    flagged.sort_unstable();
    Ok(EffectivePotential {
        values: GridFunction::new(out, h, x.domain_start)?,
        flagged,
    })
}

/// The recovery integral `I_n(x) = ∫ |q|^α T(nπq/2) e^{i(nπx/2a)q} / (q²-1) dq`
/// with `T = cos` for odd `n` and `T = i sin` for even `n`.
pub fn recovery_integral(spec: &WellSpec, n: u32, alpha: f64, x: f64) -> PvProblem {
    let half = n as f64 * PI / 2.0;
    let shift = n as f64 * PI * x / (2.0 * spec.a);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let osc = Oscillation::from_terms(vec![
        (Complex64::new(0.5, 0.0), half + shift),
        (Complex64::new(0.5 * sign, 0.0), shift - half),
    ]);
    PvProblem::new(move |q: f64| Complex64::new(q.abs().powf(alpha), 0.0), osc)
        .with_poles(&[-1.0, 1.0])
        .with_breakpoints(&[0.0])
        .with_tail_exponent(alpha - 2.0)
}

/// Residue-calculus value of `PV I_n(x)`: `-π sin(nπ(x+a)/2a)`. Exact for
/// `α = 0`; for other orders it is the claim under test.
pub fn closed_form_pv(spec: &WellSpec, n: u32, x: f64) -> f64 {
    let k = spec.wavenumber(n);
    let half = n as f64 * PI / 2.0;
    if n % 2 == 1 {
        -PI * half.sin() * (k * x).cos()
    } else {
        -PI * half.cos() * (k * x).sin()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub n: u32,
    pub alpha: f64,
    pub x: f64,
    pub pv_re: f64,
    pub pv_im: f64,
    pub pv_err: f64,
    pub closed_form: f64,
    pub recovered_psi: f64,
    pub original_psi: f64,
    pub residual: f64,
    pub converged: bool,
    pub refinement_levels: u32,
    /// Why the evaluation failed, when it did.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub spec: WellSpec,
    pub tol: f64,
    pub rows: Vec<ConsistencyRow>,
}

pub const CONSISTENCY_COLUMNS: [&str; 11] = [
    "n",
    "alpha",
    "x",
    "pv_re",
    "pv_im",
    "pv_err",
    "closed_form",
    "recovered_psi",
    "original_psi",
    "residual",
    "converged",
];

impl ConsistencyRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.n,
            self.alpha,
            self.x,
            self.pv_re,
            self.pv_im,
            self.pv_err,
            self.closed_form,
            self.recovered_psi,
            self.original_psi,
            self.residual,
            self.converged
        )
    }
}

impl ConsistencyReport {
    pub fn to_csv(&self) -> String {
        let mut out = CONSISTENCY_COLUMNS.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

/// One row of the recovery experiment.
pub fn consistency_point(spec: &WellSpec, n: u32, alpha: f64, x: f64, tol: f64) -> Result<ConsistencyRow> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::domain("quantum number must be at least 1"));
    }
    if !(alpha >= 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!("alpha must lie in [0, 2], got {alpha}")));
    }
    if !(x.abs() < spec.a) {
        return Err(Error::domain(format!("x = {x} must lie strictly inside the box")));
    }
    let state = eigenstate(spec, n, true)?;
    let closed = closed_form_pv(spec, n, x);
    let original = state.psi(x);
    let row = match pv_integrate(&recovery_integral(spec, n, alpha, x), tol) {
        Ok(r) => {
            let recovered = -state.amplitude / PI * r.value.re;
            ConsistencyRow {
                n,
                alpha,
                x,
                pv_re: r.value.re,
                pv_im: r.value.im,
                pv_err: r.abs_err_estimate,
                closed_form: closed,
                recovered_psi: recovered,
                original_psi: original,
                residual: recovered - original,
                converged: r.converged,
                refinement_levels: r.refinement_levels,
                failure: None,
            }
        }
        Err(e) => {
            let (estimate, est_err) = match &e {
                Error::NonConvergence { estimate, abs_err, .. } => (*estimate, *abs_err),
                _ => (Complex64::new(f64::NAN, f64::NAN), f64::NAN),
            };
            let recovered = -state.amplitude / PI * estimate.re;
            ConsistencyRow {
                n,
                alpha,
                x,
                pv_re: estimate.re,
                pv_im: estimate.im,
                pv_err: est_err,
                closed_form: closed,
                recovered_psi: recovered,
                original_psi: original,
                residual: recovered - original,
                converged: false,
                refinement_levels: 0,
                failure: Some(e.to_string()),
            }
        }
    };
    Ok(row)
}

/// Principal-value recovery of `ψ_n` at every `x`. Quadrature failures
/// are recorded per row; only invalid inputs abort.
pub fn consistency_experiment(spec: &WellSpec, n: u32, alpha: f64, xs: &[f64], tol: f64) -> Result<ConsistencyReport> {
    let rows = xs
        .iter()
        .map(|&x| consistency_point(spec, n, alpha, x, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConsistencyReport { spec: *spec, tol, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_of_the_unit_box() {
        let s = WellSpec::unit(1.5);
        assert!((s.energy(1) - (PI / 2.0).powf(1.5)).abs() < 1e-14);
        assert!((s.energy(2) - PI.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn boundary_values_vanish() {
        let s = WellSpec::new(1.3, 1.7, 0.8, 1.1, 2.0).unwrap();
        for n in 1..=6 {
            let st = eigenstate(&s, n, true).unwrap();
            assert!(st.psi(-1.3 + 1e-12).abs() < 1e-10);
            assert!(st.psi(1.3 - 1e-12).abs() < 1e-10);
        }
    }

    #[test]
    fn ground_state_momentum_matches_its_closed_form() {
        let s = WellSpec::unit(1.5);
        let st = eigenstate(&s, 1, false).unwrap();
        assert!((st.momentum(0.0).re - 4.0 / PI).abs() < 1e-14);
        for p in [0.3, 2.0, -5.5] {
            let want = -PI * (p as f64).cos() / (p * p - (PI / 2.0).powi(2));
            assert!((st.momentum(p).re - want).abs() < 1e-13);
        }
    }

    #[test]
    fn unit_effective_potential() {
        let v = effective_potential_well(&WellSpec::unit(1.5), 1);
        assert!((v - 0.735_000_693_079_132_6).abs() < 1e-14, "{v}");
        let v3 = effective_potential_well(&WellSpec::unit(1.5), 3);
        assert!((v3 + 0.873_633_216_706_776_8).abs() < 1e-14, "{v3}");
    }

    #[test]
    fn meromorphic_diagnostic_at_centre() {
        let s = WellSpec::unit(1.5);
        let r = consistency_point(&s, 1, 0.0, 0.0, 1e-10).unwrap();
        assert!((r.pv_re + PI).abs() < 1e-9, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn even_closed_form_is_exact_when_meromorphic() {
        let s = WellSpec::unit(1.5);
        for x in [-0.6, 0.35] {
            let r = consistency_point(&s, 2, 0.0, x, 1e-10).unwrap();
            assert!((r.pv_re - closed_form_pv(&s, 2, x)).abs() < 1e-8, "{r:?}");
        }
    }
}
