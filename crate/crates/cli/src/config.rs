//! Experiment configuration files.
//!
//! A config is one JSON object `{"kind": ..., "parameters": {...}}`.
//! Unknown fields are rejected so that typos fail loudly.

use std::path::{Path, PathBuf};

use fracqm::freeparticle::FracParams;
use fracqm::specfun::{foxh_validate, FoxHParams};
use fracqm::well::WellSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentConfig {
    WellConsistency(WellConsistency),
    EffectivePotential(EffectivePotential),
    FreeParticle(FreeParticle),
    SpecfunEval(SpecfunEval),
    PvEval(PvEval),
    ValidateSuite(ValidateSuite),
}

/// A scalar or a list of scalars.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// Explicit points or `points` evenly spaced values from `start` to `stop`
/// inclusive.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Points(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::Points(ref v) => v.clone(),
            Grid::Range { start, stop, points: 1 } if start == stop => vec![start],
            Grid::Range { start, stop, points } => {
                let last = points.saturating_sub(1).max(1) as f64;
                (0..points).map(|k| start + (stop - start) * k as f64 / last).collect()
            }
        }
    }

    fn check(&self, field: &str) -> Result<Vec<f64>> {
        if let Grid::Range { points, start, stop } = *self {
            if points == 0 || (points == 1 && start != stop) {
                return Err(CliError::invalid(field, "a range needs at least 2 points (or 1 with start = stop)"));
            }
        }
        let v = self.values();
        if v.is_empty() {
            return Err(CliError::invalid(field, "must contain at least one point"));
        }
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(CliError::invalid(field, format!("{bad} is not finite")));
        }
        Ok(v)
    }
}

/// A complex number written as `1.5`, `[re, im]` or `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(f64),
    Pair([f64; 2]),
    Parts { re: f64, im: f64 },
}

impl ComplexInput {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexInput::Real(re) => Complex64::new(re, 0.0),
            ComplexInput::Pair([re, im]) | ComplexInput::Parts { re, im } => Complex64::new(re, im),
        }
    }
}

/// H-function parameters with pairs written as `[a_j, A_j]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HParamsInput {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub upper: Vec<(ComplexInput, f64)>,
    #[serde(default)]
    pub lower: Vec<(ComplexInput, f64)>,
}

impl HParamsInput {
    pub fn build(&self, field: &str) -> Result<FoxHParams> {
        let lift = |v: &[(ComplexInput, f64)]| v.iter().map(|&(a, w)| (a.value(), w)).collect();
        let h = FoxHParams::new(self.m, self.n, lift(&self.upper), lift(&self.lower))
            .map_err(|e| CliError::invalid(field, e.to_string()))?;
        foxh_validate(&h).map_err(|e| CliError::invalid(field, e.to_string()))?;
        Ok(h)
    }
}

fn one() -> f64 {
    1.0
}

fn default_beta() -> f64 {
    1.5
}

fn default_well_tol() -> f64 {
    1e-8
}

fn default_pv_tol() -> f64 {
    1e-10
}

fn default_points() -> usize {
    201
}

fn default_psi0() -> ComplexInput {
    ComplexInput::Real(1.0)
}

fn default_methods() -> Vec<FieldKind> {
    vec![FieldKind::MittagLefflerIntegral, FieldKind::FoxH]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellConsistency {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "one")]
    pub d_beta: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub n: OneOrMany<u32>,
    pub alpha: OneOrMany<f64>,
    pub xs: Grid,
    #[serde(default = "default_well_tol")]
    pub tol: f64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectivePotential {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "one")]
    pub d_beta: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub n: OneOrMany<u32>,
    /// Grid points on `[-a, a]`, endpoints included.
    #[serde(default = "default_points")]
    pub points: usize,
    pub output: Option<PathBuf>,
}

/// Representations selectable in a free-particle run. `time_fractional`
/// and `space_fractional` each expand to all of their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    MittagLefflerIntegral,
    FoxH,
    TimeFractional,
    SpaceFractional,
    Gaussian,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeParticle {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub d_check: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "default_psi0")]
    pub psi0: ComplexInput,
    pub xs: Grid,
    pub ts: Grid,
    #[serde(default = "default_methods")]
    pub methods: Vec<FieldKind>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialFunction {
    Gamma,
    MittagLeffler,
    Foxh,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecfunEval {
    pub function: SpecialFunction,
    /// Order of the Mittag-Leffler function.
    pub alpha: Option<f64>,
    /// Index sets of the H-function.
    pub params: Option<HParamsInput>,
    pub points: Vec<ComplexInput>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigKind {
    Cos,
    Sin,
    Exp,
}

/// `PV ∫ |q|^power · trig(ω q) / Π (q - p_k) dq` for each `ω`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvEval {
    #[serde(default)]
    pub power: f64,
    #[serde(default)]
    pub poles: Vec<f64>,
    pub trig: TrigKind,
    pub omega: OneOrMany<f64>,
    #[serde(default = "default_pv_tol")]
    pub tol: f64,
    /// Half-width of the exclusion window around each pole.
    pub window: Option<f64>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSuite {
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::WellConsistency(_) => "well_consistency",
            Self::EffectivePotential(_) => "effective_potential",
            Self::FreeParticle(_) => "free_particle",
            Self::SpecfunEval(_) => "specfun_eval",
            Self::PvEval(_) => "pv_eval",
            Self::ValidateSuite(_) => "validate_suite",
        }
    }

    pub fn output(&self) -> Option<&Path> {
        match self {
            Self::WellConsistency(p) => p.output.as_deref(),
            Self::EffectivePotential(p) => p.output.as_deref(),
            Self::FreeParticle(p) => p.output.as_deref(),
            Self::SpecfunEval(p) => p.output.as_deref(),
            Self::PvEval(p) => p.output.as_deref(),
            Self::ValidateSuite(p) => p.output.as_deref(),
        }
    }

    /// Checks every precondition of the target routines; nothing is
    /// computed before this passes.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::WellConsistency(p) => p.validate(),
            Self::EffectivePotential(p) => p.validate().map(|_| ()),
            Self::FreeParticle(p) => p.validate().map(|_| ()),
            Self::SpecfunEval(p) => p.validate(),
            Self::PvEval(p) => p.validate(),
            Self::ValidateSuite(_) => Ok(()),
        }
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::invalid(field, format!("must be positive and finite, got {v}")))
    }
}

fn quantum_numbers(n: &OneOrMany<u32>) -> Result<Vec<u32>> {
    let v = n.to_vec();
    if v.is_empty() {
        return Err(CliError::invalid("n", "must contain at least one quantum number"));
    }
    if v.contains(&0) {
        return Err(CliError::invalid("n", "quantum numbers start at 1"));
    }
    Ok(v)
}

pub fn well_spec(a: f64, beta: f64, d_beta: f64, hbar: f64, mass: f64) -> Result<WellSpec> {
    for (field, v) in [("a", a), ("d_beta", d_beta), ("hbar", hbar), ("mass", mass)] {
        positive(field, v)?;
    }
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(CliError::invalid("beta", format!("must lie in (1, 2], got {beta}")));
    }
    Ok(WellSpec::new(a, beta, d_beta, hbar, mass)?)
}

impl WellConsistency {
    pub fn spec(&self) -> Result<WellSpec> {
        well_spec(self.a, self.beta, self.d_beta, self.hbar, self.mass)
    }

    fn validate(&self) -> Result<()> {
        self.spec()?;
        quantum_numbers(&self.n)?;
        let alphas = self.alpha.to_vec();
        if alphas.is_empty() {
            return Err(CliError::invalid("alpha", "must contain at least one order"));
        }
        if let Some(bad) = alphas.iter().find(|a| !(**a >= 0.0 && **a <= 2.0)) {
            return Err(CliError::invalid("alpha", format!("must lie in [0, 2], got {bad}")));
        }
        let xs = self.xs.check("xs")?;
        if let Some(bad) = xs.iter().find(|x| !(x.abs() < self.a)) {
            return Err(CliError::invalid("xs", format!("{bad} is not strictly inside (-a, a)")));
        }
        positive("tol", self.tol)
    }
}

impl EffectivePotential {
    pub fn spec(&self) -> Result<WellSpec> {
        well_spec(self.a, self.beta, self.d_beta, self.hbar, self.mass)
    }

    fn validate(&self) -> Result<Vec<u32>> {
        self.spec()?;
        if self.points < 4 {
            return Err(CliError::invalid("points", "a grid needs at least 4 points"));
        }
        quantum_numbers(&self.n)
    }
}

impl FreeParticle {
    pub fn params(&self) -> Result<FracParams> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(CliError::invalid("alpha", format!("must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.beta > 1.0 && self.beta <= 2.0) {
            return Err(CliError::invalid("beta", format!("must lie in (1, 2], got {}", self.beta)));
        }
        positive("d_check", self.d_check)?;
        positive("hbar", self.hbar)?;
        let psi0 = self.psi0.value();
        if !(psi0.re.is_finite() && psi0.im.is_finite()) {
            return Err(CliError::invalid("psi0", "must be finite"));
        }
        Ok(FracParams::new(self.alpha, self.beta, self.d_check, self.hbar)?.with_psi0(psi0))
    }

    fn validate(&self) -> Result<FracParams> {
        let p = self.params()?;
        if self.methods.is_empty() {
            return Err(CliError::invalid("methods", "must name at least one representation"));
        }
        // the closed forms are singular at the origin
        let xs = self.xs.check("xs")?;
        if xs.contains(&0.0) && self.methods != [FieldKind::MittagLefflerIntegral] {
            return Err(CliError::invalid("xs", "x = 0 is only allowed when methods is [\"mittag_leffler_integral\"]"));
        }
        if let Some(bad) = self.ts.check("ts")?.iter().find(|t| !(**t > 0.0)) {
            return Err(CliError::invalid("ts", format!("times must be positive, got {bad}")));
        }
        for m in &self.methods {
            match m {
                FieldKind::TimeFractional if p.beta != 2.0 => {
                    return Err(CliError::invalid("methods", "time_fractional needs beta = 2"));
                }
                FieldKind::SpaceFractional if p.alpha != 1.0 => {
                    return Err(CliError::invalid("methods", "space_fractional needs alpha = 1"));
                }
                FieldKind::Gaussian if p.alpha != 1.0 || p.beta != 2.0 => {
                    return Err(CliError::invalid("methods", "gaussian needs alpha = 1 and beta = 2"));
                }
                _ => {}
            }
        }
        Ok(p)
    }
}

impl SpecfunEval {
    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(CliError::invalid("points", "must contain at least one argument"));
        }
        if let Some(z) = self.points.iter().map(|z| z.value()).find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CliError::invalid("points", format!("{z} is not finite")));
        }
        match self.function {
            SpecialFunction::Gamma => Ok(()),
            SpecialFunction::MittagLeffler => match self.alpha {
                Some(a) if a > 0.0 && a <= 2.0 => Ok(()),
                Some(a) => Err(CliError::invalid("alpha", format!("must lie in (0, 2], got {a}"))),
                None => Err(CliError::invalid("alpha", "required for mittag_leffler")),
            },
            SpecialFunction::Foxh => {
                let h = self.params.as_ref().ok_or_else(|| CliError::invalid("params", "required for foxh"))?;
                h.build("params")?;
                if self.points.iter().any(|z| z.value() == Complex64::new(0.0, 0.0)) {
                    return Err(CliError::invalid("points", "the H-function needs z != 0"));
                }
                Ok(())
            }
        }
    }
}

impl PvEval {
    fn validate(&self) -> Result<()> {
        if !self.power.is_finite() {
            return Err(CliError::invalid("power", "must be finite"));
        }
        if let Some(bad) = self.poles.iter().find(|p| !p.is_finite()) {
            return Err(CliError::invalid("poles", format!("{bad} is not finite")));
        }
        let omegas = self.omega.to_vec();
        if omegas.is_empty() {
            return Err(CliError::invalid("omega", "must contain at least one frequency"));
        }
        if let Some(bad) = omegas.iter().find(|w| !w.is_finite()) {
            return Err(CliError::invalid("omega", format!("{bad} is not finite")));
        }
        let tail = self.power - self.poles.len() as f64;
        if !(tail < 1.0) {
            return Err(CliError::invalid("power", format!("|q|^power / Π(q - p) must decay faster than |q|, tail exponent is {tail}")));
        }
        if tail >= -1.0 && omegas.contains(&0.0) {
            return Err(CliError::invalid("omega", "a slowly decaying integrand needs a non-zero frequency"));
        }
        if let Some(w) = self.window {
            positive("window", w)?;
        }
        positive("tol", self.tol)
    }
}
