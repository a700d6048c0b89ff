//! Parameter-level identities for H-functions: Laplace transform pair and
//! Riemann-Liouville derivative. Prefactors travel as metadata on
//! [`HTerm`]; the coefficient lists only ever gain or lose whole pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::foxh::{foxh_eval, foxh_validate, FoxHParams, MellinBarnesConfig};
use crate::error::{Error, Result};
use crate::EvalResult;

/// `coefficient · v^prefactor_exponent · H(scale · v^power)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HTerm {
    pub coefficient: Complex64,
    pub prefactor_exponent: Complex64,
    pub scale: Complex64,
    pub power: f64,
    pub params: FoxHParams,
}

impl HTerm {
    /// `H(scale · v^power)` with unit coefficient and no prefactor.
    pub fn new(params: FoxHParams, scale: Complex64, power: f64) -> Self {
        Self {
            coefficient: Complex64::new(1.0, 0.0),
            prefactor_exponent: Complex64::new(0.0, 0.0),
            scale,
            power,
            params,
        }
    }

    pub fn with_prefactor(mut self, exponent: Complex64) -> Self {
        self.prefactor_exponent = exponent;
        self
    }

    pub fn with_coefficient(mut self, c: Complex64) -> Self {
        self.coefficient = c;
        self
    }

    /// Value at `v` (principal branch for the powers).
    pub fn eval(&self, v: Complex64, cfg: &MellinBarnesConfig) -> Result<EvalResult> {
        let arg = self.scale * v.powf(self.power);
        let h = foxh_eval(&self.params, arg, cfg)?;
        let factor = self.coefficient * v.powc(self.prefactor_exponent);
        Ok(EvalResult {
            value: h.value * factor,
            abs_err: h.abs_err * factor.norm(),
            ..h
        })
    }

    /// Same function written through `H(z) = H^{n,m}_{q,p}(1/z | (1-b,B); (1-a,A))`,
    /// so that `power` changes sign.
    pub fn reciprocal(&self) -> Result<Self> {
        Ok(Self {
            params: reciprocal_params(&self.params)?,
            scale: 1.0 / self.scale,
            power: -self.power,
            ..self.clone()
        })
    }

    /// Laplace transform of `x^{ρ-1} H(a x^σ | ..; .., (1-ρ, σ))` in `x`,
    /// with `ρ = prefactor_exponent + 1` and `σ = power`.
    pub fn laplace(&self) -> Result<Self> {
        let rho = self.prefactor_exponent + 1.0;
        let out = foxh_laplace(&self.params, rho, self.power, self.scale)?;
        Ok(Self {
            coefficient: self.coefficient,
            prefactor_exponent: -rho,
            scale: self.scale,
            power: -self.power,
            params: out,
        })
    }

    /// Inverse Laplace transform of `s^{-ρ} H(a s^σ)` with
    /// `ρ = -prefactor_exponent`. A negative `σ` is first flipped through
    /// [`HTerm::reciprocal`].
    pub fn inverse_laplace(&self) -> Result<Self> {
        let term = if self.power < 0.0 { self.reciprocal()? } else { self.clone() };
        let rho = -term.prefactor_exponent;
        let params = foxh_inverse_laplace(&term.params, rho, term.power)?;
        let mut out = Self {
            coefficient: term.coefficient,
            prefactor_exponent: rho - 1.0,
            scale: term.scale,
            power: -term.power,
            params,
        };
        // prefer the orientation of the input when it was flipped
        if self.power < 0.0 {
            if let Ok(back) = out.reciprocal() {
                out = back;
            }
        }
        Ok(out)
    }

    /// Riemann-Liouville derivative of order `beta_ord` in `z` of
    /// `z^a H((c z)^b)`; requires `prefactor_exponent` real, `scale = c^b`
    /// with `c > 0` and `power = b`.
    pub fn rl_derivative(&self, beta_ord: f64) -> Result<Self> {
        if self.prefactor_exponent.im != 0.0 || self.scale.im != 0.0 || !(self.scale.re > 0.0) {
            return Err(Error::ConstraintViolation(
                "derivative identity needs a real prefactor exponent and a positive real scale".into(),
            ));
        }
        let a = self.prefactor_exponent.re;
        let b = self.power;
        let c = self.scale.re.powf(1.0 / b);
        let mut out = foxh_rl_derivative(&self.params, a, b, beta_ord, c)?;
        out.coefficient *= self.coefficient;
        Ok(out)
    }
}

fn reciprocal_params(h: &FoxHParams) -> Result<FoxHParams> {
    let one = Complex64::new(1.0, 0.0);
    FoxHParams::new(
        h.n,
        h.m,
        h.lower.iter().map(|&(b, w)| (one - b, w)).collect(),
        h.upper.iter().map(|&(a, w)| (one - a, w)).collect(),
    )
    .map_err(|_| Error::ConstraintViolation("reciprocal argument form needs n >= 1".into()))
}

/// Removes the trailing lower pair `(1-ρ, σ)`: the Laplace transform of
/// `x^{ρ-1} H^{m,n}_{p,q+1}(a x^σ)` is `s^{-ρ} H^{m,n}_{p,q}(a s^{-σ})`.
///
/// Checked conditions: `σ > 0`, the trailing pair sits in the denominator
/// group, `Re ρ + σ max_{i≤n} (1 + Re a_i)/A_i > 0`, and
/// `|arg a| < π a*/2` with `a*` taken from the untransformed parameters.
pub fn foxh_laplace(h: &FoxHParams, rho: Complex64, sigma: f64, a: Complex64) -> Result<FoxHParams> {
    if !(sigma > 0.0) {
        return Err(Error::ConstraintViolation(format!("Laplace identity needs sigma > 0, got {sigma}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let last = h.lower.last().copied();
    let matches = matches!(last, Some((b, w)) if (b - (one - rho)).norm() < 1e-12 && (w - sigma).abs() < 1e-12);
    if !matches || h.lower.len() <= h.m {
        return Err(Error::ConstraintViolation(format!(
            "Laplace identity needs a trailing denominator pair (1 - rho, sigma) = ({}, {sigma})",
            one - rho
        )));
    }
    if h.n > 0 {
        let edge = h.upper[..h.n].iter().map(|&(ai, w)| (1.0 + ai.re) / w).fold(f64::NEG_INFINITY, f64::max);
        if !(rho.re + sigma * edge > 0.0) {
            return Err(Error::ConstraintViolation(format!(
                "Laplace identity needs Re(rho) + sigma * max (1 + Re a_i)/A_i > 0, got {}",
                rho.re + sigma * edge
            )));
        }
    }
    let prof = foxh_validate(h)?;
    if !(a.arg().abs() < std::f64::consts::PI * prof.a_star / 2.0) {
        return Err(Error::ConstraintViolation(format!(
            "Laplace identity needs |arg a| < pi a*/2; arg a = {}, a* = {}",
            a.arg(),
            prof.a_star
        )));
    }
    let mut out = h.clone();
    out.lower.pop();
    foxh_validate(&out)?;
    Ok(out)
}

/// Appends the upper pair `(ρ, σ)`: the inverse Laplace transform of
/// `s^{-ρ} H^{m,n}_{p,q}(a s^σ)` is `x^{ρ-1} H^{m,n}_{p+1,q}(a x^{-σ})`.
pub fn foxh_inverse_laplace(h: &FoxHParams, rho: Complex64, sigma: f64) -> Result<FoxHParams> {
    if !(sigma > 0.0) {
        return Err(Error::ConstraintViolation(format!("inverse Laplace identity needs sigma > 0, got {sigma}")));
    }
    let mut out = h.clone();
    out.upper.push((rho, sigma));
    foxh_validate(&out)?;
    Ok(out)
}

/// `D^β [z^a H((cz)^b)] = z^{a-β} H^{m,n+1}_{p+1,q+1}((cz)^b | (-a,b),..; ..,(β-a,b))`
/// for `a, b > 0` and `a + b min_{j≤m} Re b_j / B_j > -1`.
pub fn foxh_rl_derivative(h: &FoxHParams, a_exp: f64, b_exp: f64, beta_ord: f64, c_scale: f64) -> Result<HTerm> {
    if !(a_exp > 0.0 && b_exp > 0.0) {
        return Err(Error::ConstraintViolation(format!(
            "derivative identity needs a > 0 and b > 0, got a = {a_exp}, b = {b_exp}"
        )));
    }
    if !(c_scale > 0.0) {
        return Err(Error::ConstraintViolation("derivative identity needs c > 0".into()));
    }
    let min_ratio = h.lower[..h.m].iter().map(|&(bj, w)| bj.re / w).fold(f64::INFINITY, f64::min);
    if !(a_exp + b_exp * min_ratio > -1.0) {
        return Err(Error::ConstraintViolation(format!(
            "derivative identity needs a + b min(b_j/B_j) > -1, got {}",
            a_exp + b_exp * min_ratio
        )));
    }
    let mut upper = vec![(Complex64::new(-a_exp, 0.0), b_exp)];
    upper.extend_from_slice(&h.upper);
    let mut lower = h.lower.clone();
    lower.push((Complex64::new(beta_ord - a_exp, 0.0), b_exp));
    let params = FoxHParams::new(h.m, h.n + 1, upper, lower)?;
    foxh_validate(&params)?;
    Ok(HTerm {
        coefficient: Complex64::new(1.0, 0.0),
        prefactor_exponent: Complex64::new(a_exp - beta_ord, 0.0),
        scale: Complex64::new(c_scale.powf(b_exp), 0.0),
        power: b_exp,
        params,
    })
}
