//! One runner per experiment kind. Each returns the CSV text, a
//! convergence flag per CSV row and kind-specific summary results.

use fracqm::fracops::GridFunction;
use fracqm::freeparticle::{
    gaussian_limit, psi_foxh, psi_integral, psi_space_fractional, psi_time_fractional, wavefield_csv_line, FieldMethod, FracParams,
    WavefieldSample, WAVEFIELD_COLUMNS,
};
use fracqm::quadrature::{pv_integrate, Oscillation, PvProblem};
use fracqm::specfun::{foxh_eval, gamma_complex, mittag_leffler, MellinBarnesConfig};
use fracqm::validation::validate_suite;
use fracqm::well::{
    closed_form_pv, consistency_point, effective_potential_general, effective_potential_well, eigenstate, ConsistencyReport, ConsistencyRow, WellSpec,
};
use fracqm::EvalResult;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{self, ExperimentConfig, FieldKind, SpecialFunction, TrigKind};
use crate::error::Result;

/// Documented relative accuracy of the complex gamma function.
pub const GAMMA_REL_ACCURACY: f64 = 1e-14;

#[derive(Debug, Clone, Serialize)]
pub struct RowFlag {
    pub row: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub csv: String,
    pub flags: Vec<RowFlag>,
    pub results: Value,
}

impl Outcome {
    pub fn all_converged(&self) -> bool {
        self.flags.iter().all(|f| f.converged)
    }
}

/// Round-trip float format shared by every CSV.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn flags_from(converged: impl IntoIterator<Item = (bool, Option<String>)>) -> Vec<RowFlag> {
    converged
        .into_iter()
        .enumerate()
        .map(|(row, (converged, failure))| RowFlag { row, converged, failure })
        .collect()
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writing to memory cannot fail
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg {
        ExperimentConfig::WellConsistency(p) => well_consistency(p),
        ExperimentConfig::EffectivePotential(p) => effective_potential(p),
        ExperimentConfig::FreeParticle(p) => free_particle(p),
        ExperimentConfig::SpecfunEval(p) => specfun_eval(p),
        ExperimentConfig::PvEval(p) => pv_eval(p),
        ExperimentConfig::ValidateSuite(_) => Ok(suite()),
    }
}

fn failed_consistency_row(spec: &WellSpec, n: u32, alpha: f64, x: f64, why: String) -> ConsistencyRow {
    ConsistencyRow {
        n,
        alpha,
        x,
        pv_re: f64::NAN,
        pv_im: f64::NAN,
        pv_err: f64::NAN,
        closed_form: closed_form_pv(spec, n, x),
        recovered_psi: f64::NAN,
        original_psi: f64::NAN,
        residual: f64::NAN,
        converged: false,
        refinement_levels: 0,
        failure: Some(why),
    }
}

fn well_consistency(p: &config::WellConsistency) -> Result<Outcome> {
    let spec = p.spec()?;
    let xs = p.xs.values();
    let mut tasks = Vec::new();
    for n in p.n.to_vec() {
        for alpha in p.alpha.to_vec() {
            tasks.extend(xs.iter().map(|&x| (n, alpha, x)));
        }
    }
    let rows: Vec<ConsistencyRow> = tasks
        .par_iter()
        .map(|&(n, alpha, x)| {
            consistency_point(&spec, n, alpha, x, p.tol).unwrap_or_else(|e| failed_consistency_row(&spec, n, alpha, x, e.to_string()))
        })
        .collect();

    let mut groups = Vec::new();
    for n in p.n.to_vec() {
        for alpha in p.alpha.to_vec() {
            let g: Vec<&ConsistencyRow> = rows.iter().filter(|r| r.n == n && r.alpha == alpha).collect();
            let max = |f: &dyn Fn(&ConsistencyRow) -> f64| g.iter().map(|r| f(r).abs()).fold(0.0f64, f64::max);
            groups.push(json!({
                "n": n,
                "alpha": alpha,
                "max_abs_residual": max(&|r| r.residual),
                "max_abs_pv_minus_closed_form": max(&|r| r.pv_re - r.closed_form),
                "max_abs_imag": max(&|r| r.pv_im),
                "max_pv_err": max(&|r| r.pv_err),
            }));
        }
    }
    let flags = flags_from(rows.iter().map(|r| (r.converged, r.failure.clone())));
    let report = ConsistencyReport { spec, tol: p.tol, rows };
    Ok(Outcome {
        csv: report.to_csv(),
        flags,
        results: json!({ "groups": groups }),
    })
}

pub const POTENTIAL_COLUMNS: [&str; 8] = ["n", "x", "psi", "v_eff_re", "v_eff_im", "v_eff_constant", "flagged", "converged"];

fn effective_potential(p: &config::EffectivePotential) -> Result<Outcome> {
    let spec = p.spec()?;
    let h = 2.0 * spec.a / (p.points - 1) as f64;
    let mut rows = Vec::new();
    let mut groups = Vec::new();
    for n in p.n.to_vec() {
        let state = eigenstate(&spec, n, true)?;
        let grid = GridFunction::sample_real(|x| state.psi(x), -spec.a, h, p.points)?;
        let v = effective_potential_general(&grid, state.energy, &spec)?;
        let constant = effective_potential_well(&spec, n);
        let mut worst = 0.0f64;
        for k in 0..p.points {
            let flagged = v.flagged.contains(&k);
            let value = v.values.samples[k];
            if !flagged {
                worst = worst.max((value - constant).norm());
            }
            rows.push(vec![
                n.to_string(),
                sci(grid.point(k)),
                sci(grid.samples[k].re),
                sci(value.re),
                sci(value.im),
                sci(constant),
                flagged.to_string(),
                "true".to_string(),
            ]);
        }
        groups.push(json!({
            "n": n,
            "energy": state.energy,
            "v_eff_constant": constant,
            "max_interior_deviation": worst,
            "flagged_points": v.flagged,
        }));
    }
    let flags = flags_from(rows.iter().map(|_| (true, None)));
    Ok(Outcome {
        csv: csv_text(&POTENTIAL_COLUMNS, &rows),
        flags,
        results: json!({ "groups": groups }),
    })
}

fn expansion(kind: FieldKind) -> &'static [FieldMethod] {
    match kind {
        FieldKind::MittagLefflerIntegral => &[FieldMethod::MittagLefflerIntegral],
        FieldKind::FoxH => &[FieldMethod::FoxH],
        FieldKind::TimeFractional => &[FieldMethod::TimeFractionalH32, FieldMethod::TimeFractionalH12, FieldMethod::TimeFractionalH11],
        FieldKind::SpaceFractional => &[FieldMethod::SpaceFractionalH32, FieldMethod::LaskinH22],
        FieldKind::Gaussian => &[FieldMethod::Gaussian],
    }
}

/// Every sample one representation produces at one point.
pub fn field_values(p: &FracParams, kind: FieldKind, x: f64, t: f64) -> fracqm::Result<Vec<WavefieldSample>> {
    match kind {
        FieldKind::MittagLefflerIntegral => psi_integral(p, x, t).map(|s| vec![s]),
        FieldKind::FoxH => psi_foxh(p, x, t).map(|s| vec![s]),
        FieldKind::TimeFractional => psi_time_fractional(p, x, t).map(|s| s.to_vec()),
        FieldKind::SpaceFractional => psi_space_fractional(p, x, t).map(|s| s.to_vec()),
        FieldKind::Gaussian => gaussian_limit(x, t, p.d_check * p.hbar, p.psi0).map(|value| {
            vec![WavefieldSample {
                x,
                t,
                value,
                method: FieldMethod::Gaussian,
                err: 0.0,
                converged: true,
            }]
        }),
    }
}

/// Like [`field_values`], with failures turned into NaN rows.
fn field_samples(p: &FracParams, kind: FieldKind, x: f64, t: f64) -> Vec<(WavefieldSample, Option<String>)> {
    match field_values(p, kind, x, t) {
        Ok(v) => v.into_iter().map(|s| (s, None)).collect(),
        Err(e) => expansion(kind)
            .iter()
            .map(|&method| {
                let nan = f64::NAN;
                let s = WavefieldSample {
                    x,
                    t,
                    value: Complex64::new(nan, nan),
                    method,
                    err: nan,
                    converged: false,
                };
                (s, Some(e.to_string()))
            })
            .collect(),
    }
}

fn free_particle(p: &config::FreeParticle) -> Result<Outcome> {
    let params = p.params()?;
    let mut points = Vec::new();
    for t in p.ts.values() {
        points.extend(p.xs.values().into_iter().map(|x| (x, t)));
    }
    let per_point: Vec<Vec<(WavefieldSample, Option<String>)>> = points
        .par_iter()
        .map(|&(x, t)| p.methods.iter().flat_map(|&k| field_samples(&params, k, x, t)).collect())
        .collect();

    // largest disagreement among the converged representations at each point
    let mut spread = 0.0f64;
    for samples in &per_point {
        let ok: Vec<Complex64> = samples.iter().filter(|(s, _)| s.converged).map(|(s, _)| s.value).collect();
        for (i, a) in ok.iter().enumerate() {
            for b in &ok[i + 1..] {
                spread = spread.max((a - b).norm());
            }
        }
    }
    let mut csv = WAVEFIELD_COLUMNS.join(",");
    csv.push('\n');
    let mut flags = Vec::new();
    for (s, failure) in per_point.into_iter().flatten() {
        csv.push_str(&wavefield_csv_line(&params, &s));
        csv.push('\n');
        flags.push((s.converged, failure));
    }
    Ok(Outcome {
        csv,
        flags: flags_from(flags),
        results: json!({ "max_representation_spread": spread }),
    })
}

pub const SPECFUN_COLUMNS: [&str; 8] = ["function", "z_re", "z_im", "re", "im", "abs_err", "method", "converged"];

/// Γ(z) with its documented accuracy as the error estimate.
pub fn gamma_eval(z: Complex64) -> fracqm::Result<(Complex64, f64)> {
    let g = gamma_complex(z)?;
    Ok((g, GAMMA_REL_ACCURACY * g.norm()))
}

pub fn method_name(r: &EvalResult) -> String {
    match serde_json::to_value(r.method) {
        Ok(Value::String(s)) => s,
        _ => format!("{:?}", r.method),
    }
}

fn specfun_eval(p: &config::SpecfunEval) -> Result<Outcome> {
    let h = match p.function {
        SpecialFunction::Foxh => Some(p.params.as_ref().map(|h| h.build("params")).transpose()?.expect("validated")),
        _ => None,
    };
    let cfg = MellinBarnesConfig::default();
    let name = match p.function {
        SpecialFunction::Gamma => "gamma",
        SpecialFunction::MittagLeffler => "mittag_leffler",
        SpecialFunction::Foxh => "foxh",
    };
    let zs: Vec<Complex64> = p.points.iter().map(|z| z.value()).collect();
    let evaluated: Vec<fracqm::Result<(Complex64, f64, String, bool)>> = zs
        .par_iter()
        .map(|&z| match p.function {
            SpecialFunction::Gamma => gamma_eval(z).map(|(v, e)| (v, e, "lanczos".to_string(), true)),
            SpecialFunction::MittagLeffler => {
                mittag_leffler(p.alpha.expect("validated"), z).map(|r| (r.value, r.abs_err, method_name(&r), r.converged))
            }
            SpecialFunction::Foxh => {
                foxh_eval(h.as_ref().expect("validated"), z, &cfg).map(|r| (r.value, r.abs_err, method_name(&r), r.converged))
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut flags = Vec::new();
    for (z, r) in zs.iter().zip(evaluated) {
        let (v, err, method, ok, failure) = match r {
            Ok((v, e, m, c)) => (v, e, m, c, None),
            Err(e) => (Complex64::new(f64::NAN, f64::NAN), f64::NAN, "failed".to_string(), false, Some(e.to_string())),
        };
        rows.push(vec![
            name.to_string(),
            sci(z.re),
            sci(z.im),
            sci(v.re),
            sci(v.im),
            sci(err),
            method,
            ok.to_string(),
        ]);
        flags.push((ok, failure));
    }
    Ok(Outcome {
        csv: csv_text(&SPECFUN_COLUMNS, &rows),
        flags: flags_from(flags),
        results: json!({}),
    })
}

/// `|q|^power · trig(ω q) / Π (q - p_k)`.
pub fn pv_problem(power: f64, poles: &[f64], trig: TrigKind, omega: f64, window: Option<f64>) -> PvProblem {
    let osc = match trig {
        TrigKind::Cos => Oscillation::cos(omega),
        TrigKind::Sin => Oscillation::sin(omega),
        TrigKind::Exp => Oscillation::exp(omega),
    };
    let mut problem = if power == 0.0 {
        PvProblem::new(|_| Complex64::new(1.0, 0.0), osc)
    } else {
        PvProblem::new(move |q: f64| Complex64::new(q.abs().powf(power), 0.0), osc).with_breakpoints(&[0.0])
    };
    problem = problem.with_poles(poles).with_tail_exponent(power - poles.len() as f64);
    match window {
        Some(w) => problem.with_window(w),
        None => problem,
    }
}

pub const PV_COLUMNS: [&str; 8] = ["power", "trig", "omega", "re", "im", "abs_err", "levels", "converged"];

fn pv_eval(p: &config::PvEval) -> Result<Outcome> {
    let omegas = p.omega.to_vec();
    let trig = match p.trig {
        TrigKind::Cos => "cos",
        TrigKind::Sin => "sin",
        TrigKind::Exp => "exp",
    };
    let results: Vec<_> = omegas
        .par_iter()
        .map(|&w| pv_integrate(&pv_problem(p.power, &p.poles, p.trig, w, p.window), p.tol))
        .collect();
    let mut rows = Vec::new();
    let mut flags = Vec::new();
    for (w, r) in omegas.iter().zip(results) {
        let (v, err, levels, ok, failure) = match r {
            Ok(q) => (q.value, q.abs_err_estimate, q.refinement_levels, q.converged, None),
            Err(e) => {
                let (v, err) = match &e {
                    fracqm::Error::NonConvergence { estimate, abs_err, .. } => (*estimate, *abs_err),
                    _ => (Complex64::new(f64::NAN, f64::NAN), f64::NAN),
                };
                (v, err, 0, false, Some(e.to_string()))
            }
        };
        rows.push(vec![
            sci(p.power),
            trig.to_string(),
            sci(*w),
            sci(v.re),
            sci(v.im),
            sci(err),
            levels.to_string(),
            ok.to_string(),
        ]);
        flags.push((ok, failure));
    }
    Ok(Outcome {
        csv: csv_text(&PV_COLUMNS, &rows),
        flags: flags_from(flags),
        results: json!({}),
    })
}

pub const SUITE_COLUMNS: [&str; 5] = ["criterion", "title", "check", "passed", "tolerance"];

/// Measured values and timings go to the summary only, so the CSV stays
/// identical between runs.
fn suite() -> Outcome {
    let reports = validate_suite();
    let mut rows = Vec::new();
    let mut flags = Vec::new();
    for r in &reports {
        for c in &r.checks {
            rows.push(vec![r.id.to_string(), r.title.to_string(), c.name.clone(), c.passed.to_string(), sci(c.tolerance)]);
            let why = (!c.passed).then(|| if c.note.is_empty() { format!("measured {}", c.measured) } else { c.note.clone() });
            flags.push((c.passed, why));
        }
    }
    let lines: Vec<String> = reports.iter().map(|r| r.summary_line()).collect();
    Outcome {
        csv: csv_text(&SUITE_COLUMNS, &rows),
        flags: flags_from(flags),
        results: json!({ "summary": lines, "criteria": reports }),
    }
}
