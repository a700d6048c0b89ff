//! Point evaluations: one value and its error estimate per line.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use fracqm::freeparticle::FracParams;
use fracqm::quadrature::pv_integrate;
use fracqm::specfun::{foxh_eval, mittag_leffler, MellinBarnesConfig};
use fracqm::well::{effective_potential_well, WellSpec};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{well_spec, FieldKind, HParamsInput, TrigKind};
use crate::error::{CliError, Result};
use crate::experiments::{field_values, gamma_eval, method_name, pv_problem};

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Mittag-Leffler function E_alpha(z).
    Ml(MlArgs),
    /// Fox H-function with index sets read from a JSON file.
    Foxh(FoxhArgs),
    /// Complex gamma function.
    Gamma(ComplexArg),
    /// Principal value of |q|^power trig(omega q) / prod(q - pole).
    Pv(PvArgs),
    /// Well energy D (n pi hbar / 2a)^beta.
    Energy(WellArgs),
    /// Constant effective potential of the well.
    Veff(WellArgs),
    /// Free-particle wavefunction at one point.
    Psi(PsiArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ComplexArg {
    #[arg(long)]
    re: f64,
    #[arg(long, default_value_t = 0.0)]
    im: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MlArgs {
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    z: ComplexArg,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FoxhArgs {
    /// JSON file `{"m", "n", "upper": [[a, A], ...], "lower": [[b, B], ...]}`.
    #[arg(long)]
    params: PathBuf,
    /// Real part of the argument.
    #[arg(long)]
    z: f64,
    /// Imaginary part of the argument.
    #[arg(long, default_value_t = 0.0)]
    zi: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Trig {
    Cos,
    Sin,
    Exp,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PvArgs {
    #[arg(long, default_value_t = 0.0)]
    power: f64,
    /// Comma-separated pole positions, e.g. `--poles=-1,1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    poles: Vec<f64>,
    #[arg(long, value_enum, default_value = "cos")]
    trig: Trig,
    #[arg(long)]
    omega: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Half-width of the exclusion window around each pole.
    #[arg(long)]
    window: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WellArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    beta: f64,
    /// Fractional diffusion constant.
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PsiMethod {
    MittagLefflerIntegral,
    FoxH,
    TimeFractional,
    SpaceFractional,
    Gaussian,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PsiArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, value_enum, default_value = "fox-h")]
    method: PsiMethod,
}

#[derive(Debug, Serialize)]
struct Parts {
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct Line {
    #[serde(serialize_with = "as_parts")]
    value: Complex64,
    abs_err: f64,
    method: String,
    converged: bool,
}

impl Line {
    fn text(&self, real: bool) -> String {
        let v = if real {
            format!("{}", self.value.re)
        } else {
            format!("{} {:+e}i", self.value.re, self.value.im)
        };
        let status = if self.converged { "" } else { ", not converged" };
        format!("{v} ± {:.3e} [{}{status}]", self.abs_err, self.method)
    }
}

fn as_parts<S: serde::Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    Parts { re: v.re, im: v.im }.serialize(s)
}

fn exact(value: f64) -> Line {
    Line {
        value: Complex64::new(value, 0.0),
        abs_err: 0.0,
        method: "closed_form".into(),
        converged: true,
    }
}

fn from_eval(r: &fracqm::EvalResult) -> Line {
    Line {
        value: r.value,
        abs_err: r.abs_err,
        method: method_name(r),
        converged: r.converged,
    }
}

fn spec(w: &WellArgs) -> Result<WellSpec> {
    if w.n == 0 {
        return Err(CliError::invalid("--n", "quantum numbers start at 1"));
    }
    well_spec(w.a, w.beta, w.d, w.hbar, w.m).map_err(|e| match e {
        CliError::Validation { field, constraint } => {
            let flag = match field.as_str() {
                "d_beta" => "d",
                "mass" => "m",
                other => other,
            };
            CliError::invalid(format!("--{flag}"), constraint)
        }
        other => other,
    })
}

fn load_params(path: &PathBuf) -> Result<HParamsInput> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.clone(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Evaluates, prints, and returns the exit status.
pub fn eval(cmd: &EvalCommand, as_json: bool) -> Result<u8> {
    let (name, inputs, lines, real): (&str, Value, Vec<Line>, bool) = match cmd {
        EvalCommand::Ml(a) => {
            if !(a.alpha > 0.0 && a.alpha <= 2.0) {
                return Err(CliError::invalid("--alpha", format!("must lie in (0, 2], got {}", a.alpha)));
            }
            let r = mittag_leffler(a.alpha, Complex64::new(a.z.re, a.z.im))?;
            ("ml", json!({"alpha": a.alpha, "re": a.z.re, "im": a.z.im}), vec![from_eval(&r)], false)
        }
        EvalCommand::Foxh(a) => {
            let h = load_params(&a.params)?.build("--params")?;
            let z = Complex64::new(a.z, a.zi);
            if z == Complex64::new(0.0, 0.0) {
                return Err(CliError::invalid("--z", "the H-function needs z != 0"));
            }
            let r = foxh_eval(&h, z, &MellinBarnesConfig::default())?;
            ("foxh", json!({"params": h, "z": a.z, "zi": a.zi}), vec![from_eval(&r)], false)
        }
        EvalCommand::Gamma(a) => {
            let (v, err) = gamma_eval(Complex64::new(a.re, a.im))?;
            let line = Line {
                value: v,
                abs_err: err,
                method: "lanczos".into(),
                converged: true,
            };
            ("gamma", json!({"re": a.re, "im": a.im}), vec![line], false)
        }
        EvalCommand::Pv(a) => {
            let trig = match a.trig {
                Trig::Cos => TrigKind::Cos,
                Trig::Sin => TrigKind::Sin,
                Trig::Exp => TrigKind::Exp,
            };
            if !(a.tol > 0.0) {
                return Err(CliError::invalid("--tol", "must be positive"));
            }
            if !(a.power - (a.poles.len() as f64) < 1.0) {
                return Err(CliError::invalid("--power", "the integrand must decay faster than |q|"));
            }
            let r = pv_integrate(&pv_problem(a.power, &a.poles, trig, a.omega, a.window), a.tol)?;
            let line = Line {
                value: r.value,
                abs_err: r.abs_err_estimate,
                method: "principal_value".into(),
                converged: r.converged,
            };
            let inputs = json!({"power": a.power, "poles": a.poles, "trig": trig, "omega": a.omega, "tol": a.tol});
            ("pv", inputs, vec![line], false)
        }
        EvalCommand::Energy(w) => {
            let s = spec(w)?;
            ("energy", well_inputs(w), vec![exact(s.energy(w.n))], true)
        }
        EvalCommand::Veff(w) => {
            let s = spec(w)?;
            ("veff", well_inputs(w), vec![exact(effective_potential_well(&s, w.n))], true)
        }
        EvalCommand::Psi(a) => {
            let p = FracParams::new(a.alpha, a.beta, a.d, a.hbar)?;
            let kind = match a.method {
                PsiMethod::MittagLefflerIntegral => FieldKind::MittagLefflerIntegral,
                PsiMethod::FoxH => FieldKind::FoxH,
                PsiMethod::TimeFractional => FieldKind::TimeFractional,
                PsiMethod::SpaceFractional => FieldKind::SpaceFractional,
                PsiMethod::Gaussian => FieldKind::Gaussian,
            };
            let lines = field_values(&p, kind, a.x, a.t)?
                .iter()
                .map(|s| Line {
                    value: s.value,
                    abs_err: s.err,
                    method: s.method.name().into(),
                    converged: s.converged,
                })
                .collect();
            let inputs = json!({"alpha": a.alpha, "beta": a.beta, "x": a.x, "t": a.t, "d": a.d, "hbar": a.hbar, "method": kind});
            ("psi", inputs, lines, false)
        }
    };
    if as_json {
        let out = json!({
            "command": name,
            "version": fracqm::VERSION,
            "inputs": inputs,
            "results": lines,
        });
        println!("{}", serde_json::to_string(&out).expect("plain data"));
    } else {
        for l in &lines {
            println!("{}", l.text(real));
        }
    }
    Ok(if lines.iter().all(|l| l.converged) { 0 } else { 2 })
}

fn well_inputs(w: &WellArgs) -> Value {
    json!({"a": w.a, "n": w.n, "beta": w.beta, "d": w.d, "m": w.m, "hbar": w.hbar})
}
