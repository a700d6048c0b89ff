//! Fox H-function
//!
//! ```text
//! H^{m,n}_{p,q}(z) = (1/2πi) ∫_L h(s) z^{-s} ds,
//! h(s) = Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 - a_j - A_j s)
//!      / [Π_{j>m} Γ(1 - b_j - B_j s) Π_{j>n} Γ(a_j + A_j s)],
//! ```
//!
//! evaluated either by quadrature along a contour separating the two pole
//! families, or by summing residues on the side where the series converges.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{ln_gamma, ln_gamma_complex, ln_rgamma_complex};
use crate::error::{Error, Result};
use crate::quadrature::integrate_lenient;
use crate::{EvalResult, Method};

const MAX_POLES: usize = 2000;
const CLUSTER_RADIUS: f64 = 0.25;
const CIRCLE_NODES: usize = 64;

/// Index set and coefficient pairs of an H-function. `p` and `q` are the
/// lengths of `upper` and `lower`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoxHParams {
    pub m: usize,
    pub n: usize,
    /// Pairs `(a_j, A_j)`.
    pub upper: Vec<(Complex64, f64)>,
    /// Pairs `(b_j, B_j)`.
    pub lower: Vec<(Complex64, f64)>,
}

/// Where the defining integral is known to give an analytic function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticDomain {
    AllNonzero,
    Disk { radius: f64 },
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceProfile {
    /// `Σ B_j - Σ A_j`.
    pub mu: f64,
    /// `Π A_j^{A_j} Π B_j^{-B_j}`.
    pub beta_star: f64,
    pub analytic_domain: AnalyticDomain,
    /// Opening of the sector `|arg z| < a*π/2` where the straight contour
    /// converges absolutely.
    pub a_star: f64,
}

/// Contour settings. `None` fields are chosen from the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinBarnesConfig {
    /// Real part of the contour at `Im s = 0`.
    pub contour_abscissa: Option<f64>,
    /// Slope `κ` of the contour `s = c + κ|y| + iy`; zero is a vertical line.
    pub bend: Option<f64>,
    /// Largest `|Im s|` the quadrature may reach.
    pub truncation_height: f64,
    /// Budget of kernel evaluations.
    pub node_count: usize,
    pub target_abs_err: f64,
}

impl Default for MellinBarnesConfig {
    fn default() -> Self {
        Self {
            contour_abscissa: None,
            bend: None,
            truncation_height: 2000.0,
            node_count: 2_000_000,
            target_abs_err: 1e-12,
        }
    }
}

impl FoxHParams {
    pub fn new(m: usize, n: usize, upper: Vec<(Complex64, f64)>, lower: Vec<(Complex64, f64)>) -> Result<Self> {
        let h = Self { m, n, upper, lower };
        h.check_structure()?;
        Ok(h)
    }

    /// Convenience constructor for real `a_j`, `b_j`.
    pub fn real(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)]) -> Result<Self> {
        let lift = |v: &[(f64, f64)]| v.iter().map(|&(x, w)| (Complex64::new(x, 0.0), w)).collect();
        Self::new(m, n, lift(upper), lift(lower))
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    fn check_structure(&self) -> Result<()> {
        if self.n > self.p() {
            return Err(Error::InvalidParameters(format!("n = {} exceeds p = {}", self.n, self.p())));
        }
        if self.m < 1 || self.m > self.q() {
            return Err(Error::InvalidParameters(format!("m = {} outside 1..=q = {}", self.m, self.q())));
        }
        for (name, list) in [("A", &self.upper), ("B", &self.lower)] {
            if let Some((j, _)) = list.iter().enumerate().find(|(_, (c, w))| !(*w > 0.0 && w.is_finite() && c.re.is_finite() && c.im.is_finite())) {
                return Err(Error::InvalidParameters(format!("{name}_{} must be positive and finite", j + 1)));
            }
        }
        Ok(())
    }

    /// Largest real part among the poles of `Γ(b_j + B_j s)`, `j ≤ m`.
    fn left_edge(&self) -> f64 {
        self.lower[..self.m].iter().map(|(b, w)| -b.re / w).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest real part among the poles of `Γ(1 - a_j - A_j s)`, `j ≤ n`.
    fn right_edge(&self) -> f64 {
        self.upper[..self.n].iter().map(|(a, w)| (1.0 - a.re) / w).fold(f64::INFINITY, f64::min)
    }

    fn left_pole(&self, j: usize, nu: usize) -> Complex64 {
        let (b, w) = self.lower[j];
        -(b + nu as f64) / w
    }

    fn right_pole(&self, j: usize, lambda: usize) -> Complex64 {
        let (a, w) = self.upper[j];
        (1.0 - a + lambda as f64) / w
    }

    /// `ln h(s)`, optionally leaving out one singular factor. Poles of the
    /// numerator give `+inf`, zeros from the denominator `-inf`.
    fn ln_kernel(&self, s: Complex64, skip: Option<Factor>) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let lg = |z: Complex64| ln_gamma_complex(z).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(b, w)) in self.lower.iter().enumerate() {
            if skip == Some(Factor::Lower(j)) {
                continue;
            }
            acc += if j < self.m { lg(b + w * s) } else { ln_rgamma_complex(one - b - w * s) };
        }
        for (j, &(a, w)) in self.upper.iter().enumerate() {
            if skip == Some(Factor::Upper(j)) {
                continue;
            }
            acc += if j < self.n { lg(one - a - w * s) } else { ln_rgamma_complex(a + w * s) };
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    Lower(usize),
    Upper(usize),
}

/// Structural checks, the pole non-coincidence condition and the
/// convergence profile.
pub fn foxh_validate(h: &FoxHParams) -> Result<ConvergenceProfile> {
    h.check_structure()?;
    for (jb, &(b, bw)) in h.lower[..h.m].iter().enumerate() {
        for (ja, &(a, aw)) in h.upper[..h.n].iter().enumerate() {
            // left poles have Re ≤ -Re b/B, right poles Re ≥ (1 - Re a)/A
            let hi = -b.re / bw;
            let lo = (1.0 - a.re) / aw;
            if hi < lo - 1e-12 || ((-b.im / bw) - (-a.im / aw)).abs() > 1e-12 * (1.0 + a.im.abs() + b.im.abs()) {
                continue;
            }
            let nu_max = ((hi - lo) * bw).floor() as usize + 1;
            for nu in 0..=nu_max.min(100_000) {
                let sl = h.left_pole(jb, nu);
                // nearest right pole
                let lambda = (sl.re * aw - 1.0 + a.re).round();
                if lambda < 0.0 {
                    continue;
                }
                let sr = h.right_pole(ja, lambda as usize);
                if (sl - sr).norm() <= 1e-12 * (1.0 + sl.norm()) {
                    return Err(Error::InvalidParameters(format!(
                        "pole of Γ(b_{} + B_{} s) coincides with pole of Γ(1 - a_{} - A_{} s) at s = {sl}",
                        jb + 1,
                        jb + 1,
                        ja + 1,
                        ja + 1
                    )));
                }
            }
        }
    }
    let sum_a: f64 = h.upper.iter().map(|p| p.1).sum();
    let sum_b: f64 = h.lower.iter().map(|p| p.1).sum();
    let mu = sum_b - sum_a;
    let ln_beta: f64 = h.upper.iter().map(|&(_, w)| w * w.ln()).sum::<f64>() - h.lower.iter().map(|&(_, w)| w * w.ln()).sum::<f64>();
    let beta_star = ln_beta.exp();
    let analytic_domain = if mu > 0.0 {
        AnalyticDomain::AllNonzero
    } else if mu == 0.0 {
        AnalyticDomain::Disk { radius: 1.0 / beta_star }
    } else {
        AnalyticDomain::Undetermined
    };
    let a_star = h.upper[..h.n].iter().map(|p| p.1).sum::<f64>() - h.upper[h.n..].iter().map(|p| p.1).sum::<f64>()
        + h.lower[..h.m].iter().map(|p| p.1).sum::<f64>()
        - h.lower[h.m..].iter().map(|p| p.1).sum::<f64>();
    Ok(ConvergenceProfile {
        mu,
        beta_star,
        analytic_domain,
        a_star,
    })
}

/// Value of `H(z)`: contour quadrature, falling back to the residue series
/// when no convergent contour is available.
pub fn foxh_eval(h: &FoxHParams, z: Complex64, cfg: &MellinBarnesConfig) -> Result<EvalResult> {
    match foxh_contour(h, z, cfg) {
        Ok(r) => Ok(r),
        Err(contour_err) => foxh_series(h, z, cfg).map_err(|_| contour_err),
    }
}

fn check_argument(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("H-function argument must be finite and non-zero, got {z}")));
    }
    Ok(())
}

/// Contour `s(y) = c + κ|y| + iy` used for `z`.
pub fn contour_geometry(h: &FoxHParams, z: Complex64, cfg: &MellinBarnesConfig) -> Result<(f64, f64)> {
    let prof = foxh_validate(h)?;
    let left = h.left_edge();
    let right = h.right_edge();
    let c = match cfg.contour_abscissa {
        Some(c) => c,
        None if right.is_finite() => 0.5 * (left + right),
        None => left + 0.5,
    };
    if !(c > left && c < right) {
        return Err(Error::ContourPlacement(format!(
            "abscissa {c} does not separate left poles (max Re {left}) from right poles (min Re {right})"
        )));
    }
    let mut kappa = match cfg.bend {
        Some(k) => k,
        None if prof.a_star > 0.0 && z.arg().abs() < prof.a_star * PI / 2.0 - 0.1 => 0.0,
        None if prof.mu < 0.0 => 1.0,
        None if prof.mu > 0.0 => -1.0,
        None => {
            return Err(Error::ContourPlacement(
                "argument outside the convergence sector and mu = 0".into(),
            ))
        }
    };
    // keep complex poles of the opposite family outside the wedge
    if kappa > 0.0 {
        for j in 0..h.n {
            let s = h.right_pole(j, 0);
            if s.im != 0.0 {
                kappa = kappa.min(0.5 * (s.re - c) / s.im.abs());
            }
        }
    } else if kappa < 0.0 {
        for j in 0..h.m {
            let s = h.left_pole(j, 0);
            if s.im != 0.0 {
                kappa = kappa.max(-0.5 * (c - s.re) / s.im.abs());
            }
        }
    }
    Ok((c, kappa))
}

/// Contour quadrature only.
pub fn foxh_contour(h: &FoxHParams, z: Complex64, cfg: &MellinBarnesConfig) -> Result<EvalResult> {
    check_argument(z)?;
    let (c, kappa) = contour_geometry(h, z, cfg)?;
    let ln_z = z.ln();
    let calls = Cell::new(0usize);
    let integrand = |y: f64| {
        calls.set(calls.get() + 1);
        let s = Complex64::new(c + kappa * y.abs(), y);
        let jac = Complex64::new(1.0, -kappa * y.signum());
        (h.ln_kernel(s, None) - s * ln_z).exp() * jac / (2.0 * PI)
    };
    let target = cfg.target_abs_err;
    let panel_tol = target / 40.0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for side in [1.0, -1.0] {
        let f = |t: f64| integrand(side * t);
        let mut y0 = 0.0;
        let mut width = 1.0;
        let mut quiet = 0;
        let mut f0 = f(0.0).norm();
        loop {
            let y1 = y0 + width;
            if y1 > cfg.truncation_height || calls.get() > cfg.node_count {
                return Err(Error::non_convergence(
                    format!("contour integrand still {f0:e} at |Im s| = {y0}"),
                    total,
                    f64::INFINITY,
                ));
            }
            let r = integrate_lenient(&f, &[y0, y1], panel_tol)?;
            total += r.value;
            err += r.abs_err_estimate;
            let f1 = f(y1).norm();
            if r.value.norm() < 0.1 * target && f1 < 0.1 * target && f1 <= f0 {
                quiet += 1;
                if quiet >= 2 {
                    err += r.value.norm();
                    break;
                }
            } else {
                quiet = 0;
            }
            f0 = f1;
            y0 = y1;
            width = (2.0 * width).min(64.0);
        }
    }
    Ok(EvalResult {
        value: total,
        abs_err: err,
        method: Method::MellinBarnes,
        evaluations: calls.get(),
        converged: err <= target.max(1e-15 * total.norm()),
    })
}

#[derive(Debug, Clone, Copy)]
struct Pole {
    s: Complex64,
    factor: Factor,
    order: usize,
}

fn left_poles(h: &FoxHParams, budget: usize) -> Vec<Pole> {
    let total: f64 = h.lower[..h.m].iter().map(|p| p.1).sum();
    let depth = budget as f64 / total;
    let mut out = Vec::new();
    for j in 0..h.m {
        let count = (h.lower[j].1 * depth).ceil() as usize + 1;
        out.extend((0..count).map(|nu| Pole {
            s: h.left_pole(j, nu),
            factor: Factor::Lower(j),
            order: nu,
        }));
    }
    out.sort_by(|a, b| b.s.re.total_cmp(&a.s.re));
    out
}

fn right_poles(h: &FoxHParams, budget: usize) -> Vec<Pole> {
    if h.n == 0 {
        return Vec::new();
    }
    let total: f64 = h.upper[..h.n].iter().map(|p| p.1).sum();
    let depth = budget as f64 / total;
    let mut out = Vec::new();
    for j in 0..h.n {
        let count = (h.upper[j].1 * depth).ceil() as usize + 1;
        out.extend((0..count).map(|lambda| Pole {
            s: h.right_pole(j, lambda),
            factor: Factor::Upper(j),
            order: lambda,
        }));
    }
    out.sort_by(|a, b| a.s.re.total_cmp(&b.s.re));
    out
}

/// Groups of poles closer than the cluster radius, in summation order.
fn cluster(poles: &[Pole]) -> Vec<Vec<Pole>> {
    let mut groups: Vec<Vec<Pole>> = Vec::new();
    let mut assigned = vec![false; poles.len()];
    for i in 0..poles.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut group = vec![poles[i]];
        let mut k = 0;
        while k < group.len() {
            let anchor = group[k].s;
            for j in i + 1..poles.len() {
                if (poles[j].s.re - anchor.re).abs() > CLUSTER_RADIUS {
                    if j > i + 1 && (poles[j].s.re - poles[i].s.re).abs() > CLUSTER_RADIUS * (group.len() + 1) as f64 {
                        break;
                    }
                    continue;
                }
                if !assigned[j] && (poles[j].s - anchor).norm() < CLUSTER_RADIUS {
                    assigned[j] = true;
                    group.push(poles[j]);
                }
            }
            k += 1;
        }
        groups.push(group);
    }
    groups
}

/// Residue-series evaluation only.
pub fn foxh_series(h: &FoxHParams, z: Complex64, cfg: &MellinBarnesConfig) -> Result<EvalResult> {
    check_argument(z)?;
    let prof = foxh_validate(h)?;
    let use_left = if prof.mu > 0.0 {
        true
    } else if prof.mu < 0.0 {
        false
    } else {
        let r = 1.0 / prof.beta_star;
        if (z.norm() - r).abs() <= 1e-12 * r {
            return Err(Error::domain("residue series does not converge on |z| = 1/beta*"));
        }
        z.norm() < r
    };
    let (poles, others) = if use_left {
        (left_poles(h, MAX_POLES), right_poles(h, 64))
    } else {
        (right_poles(h, MAX_POLES), left_poles(h, 64))
    };
    if poles.is_empty() {
        // n = 0 and the series runs over right poles: H vanishes identically
        return Ok(EvalResult {
            value: Complex64::new(0.0, 0.0),
            abs_err: 0.0,
            method: Method::ResidueSeries,
            evaluations: 0,
            converged: true,
        });
    }
    let ln_z = z.ln();
    let target = cfg.target_abs_err;
    let mut sum = Complex64::new(0.0, 0.0);
    // exp of a log-domain sum carries relative error ε·(size of its parts)
    let mut round_err = 0.0;
    let mut cluster_err = 0.0;
    let mut quiet = 0;
    let mut prev = f64::INFINITY;
    let mut evaluations = 0;
    for group in cluster(&poles) {
        let term = if group.len() == 1 {
            evaluations += 1;
            let pole = group[0];
            let weight = match pole.factor {
                Factor::Lower(j) => h.lower[j].1,
                Factor::Upper(j) => h.upper[j].1,
            };
            let sign = if pole.order % 2 == 0 { 1.0 } else { -1.0 };
            let ln_mag = -ln_gamma(pole.order as f64 + 1.0) - weight.ln();
            let kernel = h.ln_kernel(pole.s, Some(pole.factor));
            let t = (kernel - pole.s * ln_z + ln_mag).exp() * sign;
            if t.re.is_finite() && t.im.is_finite() {
                let parts = 4.0 + kernel.norm() + (pole.s * ln_z).norm() + ln_mag.abs();
                round_err += f64::EPSILON * parts * t.norm();
                t
            } else if kernel.re == f64::NEG_INFINITY {
                Complex64::new(0.0, 0.0)
            } else {
                return Err(Error::non_convergence(format!("residue at s = {} is not finite", pole.s), sum, f64::INFINITY));
            }
        } else {
            let (res, e, used) = cluster_residue(h, &group, &poles, &others, ln_z)?;
            evaluations += used;
            cluster_err += e + 4.0 * f64::EPSILON * res.norm();
            if use_left {
                res
            } else {
                -res
            }
        };
        sum += term;
        let t = term.norm();
        if t < 1e-2 * target && t <= prev.max(1e-2 * target) {
            quiet += 1;
            if quiet >= 10 {
                let abs_err = round_err + 10.0 * t + cluster_err;
                return Ok(EvalResult {
                    value: sum,
                    abs_err,
                    method: Method::ResidueSeries,
                    evaluations,
                    converged: abs_err <= target.max(1e-14 * sum.norm()),
                });
            }
        } else {
            quiet = 0;
        }
        prev = t;
    }
    Err(Error::non_convergence(
        format!("residue series not converged after {} poles", poles.len()),
        sum,
        f64::INFINITY,
    ))
}

/// `Res` of `h(s) z^{-s}` summed over a pole cluster, by the trapezoidal
/// rule on an enclosing circle; the error is the 64- vs 128-node change.
fn cluster_residue(
    h: &FoxHParams,
    group: &[Pole],
    family: &[Pole],
    others: &[Pole],
    ln_z: Complex64,
) -> Result<(Complex64, f64, usize)> {
    let centre = group.iter().map(|p| p.s).sum::<Complex64>() / group.len() as f64;
    let spread = group.iter().map(|p| (p.s - centre).norm()).fold(0.0f64, f64::max);
    let outside = family
        .iter()
        .filter(|p| !group.iter().any(|g| g.s == p.s && g.factor == p.factor))
        .chain(others)
        .map(|p| (p.s - centre).norm())
        .fold(f64::INFINITY, f64::min);
    if !(outside > spread * 1.05) {
        return Err(Error::non_convergence("pole cluster cannot be isolated", Complex64::new(0.0, 0.0), f64::INFINITY));
    }
    let radius = 0.5 * (spread + outside.min(spread + 2.0));
    let ring = |nodes: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..nodes {
            let e = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / nodes as f64);
            let s = centre + radius * e;
            acc += (h.ln_kernel(s, None) - s * ln_z).exp() * e;
        }
        acc * radius / nodes as f64
    };
    let coarse = ring(CIRCLE_NODES);
    let fine = ring(2 * CIRCLE_NODES);
    Ok((fine, (fine - coarse).norm(), 3 * CIRCLE_NODES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MellinBarnesConfig {
        MellinBarnesConfig::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exponential_by_both_routes() {
        let h = FoxHParams::real(1, 0, &[], &[(0.0, 1.0)]).unwrap();
        for x in [0.3, 1.0, 4.0] {
            let a = foxh_contour(&h, c(x), &cfg()).unwrap();
            let b = foxh_series(&h, c(x), &cfg()).unwrap();
            assert!((a.value - (-x).exp()).norm() < 1e-12, "contour {x}: {}", a.value);
            assert!((b.value - (-x).exp()).norm() < 1e-12, "series {x}: {}", b.value);
        }
    }

    #[test]
    fn profile_of_exponential() {
        let h = FoxHParams::real(1, 0, &[], &[(0.0, 1.0)]).unwrap();
        let p = foxh_validate(&h).unwrap();
        assert_eq!(p.mu, 1.0);
        assert_eq!(p.analytic_domain, AnalyticDomain::AllNonzero);
    }

    #[test]
    fn coincident_poles_are_rejected() {
        let h = FoxHParams::real(1, 1, &[(1.0, 1.0)], &[(0.0, 1.0)]).unwrap();
        assert!(matches!(foxh_validate(&h), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn index_ranges_are_checked() {
        assert!(FoxHParams::real(0, 0, &[], &[(0.0, 1.0)]).is_err());
        assert!(FoxHParams::real(1, 2, &[(0.0, 1.0)], &[(0.0, 1.0)]).is_err());
        assert!(FoxHParams::real(1, 0, &[], &[(0.0, -1.0)]).is_err());
    }

    #[test]
    fn step_function_on_the_unit_circle_boundary() {
        // H^{1,0}_{1,1}(z | (1,1); (0,1)) = 1 for |z| < 1, 0 for |z| > 1
        let h = FoxHParams::real(1, 0, &[(1.0, 1.0)], &[(0.0, 1.0)]).unwrap();
        assert!((foxh_eval(&h, c(0.5), &cfg()).unwrap().value - 1.0).norm() < 1e-14);
        assert!(foxh_eval(&h, c(2.0), &cfg()).unwrap().value.norm() < 1e-14);
    }

    #[test]
    fn coincident_left_poles_use_the_circle() {
        // Γ(s)² has double poles: H^{2,0}_{0,2}(z | (0,1),(0,1)) = 2 K_0(2√z)
        let h = FoxHParams::real(2, 0, &[], &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        // 2 K_0(2) from the modified Bessel function
        let want = 2.0 * 0.113_893_872_749_533_435_65;
        let s = foxh_series(&h, c(1.0), &cfg()).unwrap();
        let q = foxh_contour(&h, c(1.0), &cfg()).unwrap();
        assert!((s.value.re - want).abs() < 1e-11, "{}", s.value);
        assert!((q.value.re - want).abs() < 1e-11, "{}", q.value);
    }
}
