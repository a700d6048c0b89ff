use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fracqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracqm")).args(args).output().expect("binary runs")
}

fn fracqm_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracqm"))
        .args(args)
        .env("FRACQM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Leading number of a text-mode eval line.
fn first_value(o: &Output) -> f64 {
    stdout(o).split_whitespace().next().unwrap().parse().unwrap()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const WELL_21: &str = r#"{
  "kind": "well_consistency",
  "parameters": {"a": 1, "n": 1, "alpha": 1.5, "xs": {"start": -0.9, "stop": 0.9, "points": 21}}
}"#;

#[test]
fn veff_of_the_unit_box() {
    let o = fracqm(&["eval", "veff", "--a", "1", "--n", "1", "--beta", "1.5", "--d", "1", "--m", "1", "--hbar", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // mpmath: (π/2)^1.5 - (π/2)²/2
    assert!((first_value(&o) - 0.735_000_693_079_132_6).abs() < 1e-14);
    assert!(stdout(&o).starts_with("0.73500"));
}

#[test]
fn order_one_mittag_leffler_is_e() {
    let o = fracqm(&["eval", "ml", "--alpha", "1", "--re", "1"]);
    assert!(o.status.success());
    assert!((first_value(&o) - std::f64::consts::E).abs() < 1e-9);
    assert!(stdout(&o).starts_with("2.718281828"));
}

#[test]
fn second_level_energy() {
    let o = fracqm(&["eval", "energy", "--a", "1", "--n", "2", "--beta", "1.5", "--d", "1", "--hbar", "1"]);
    assert!(o.status.success());
    // mpmath: π^1.5
    assert!((first_value(&o) - 5.568_327_996_831_707_8).abs() < 1e-13);
}

#[test]
fn json_mode_is_machine_readable() {
    let o = fracqm(&["eval", "gamma", "--re", "1", "--im", "1", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "gamma");
    let r = &v["results"][0];
    // mpmath: Γ(1+i)
    assert!((r["value"]["re"].as_f64().unwrap() - 0.498_015_668_118_356_04).abs() < 1e-13);
    assert!((r["value"]["im"].as_f64().unwrap() + 0.154_949_828_301_810_69).abs() < 1e-13);
    assert!(r["abs_err"].as_f64().unwrap() > 0.0);
    assert_eq!(r["converged"], true);
}

#[test]
fn negative_arguments_parse() {
    let o = fracqm(&["eval", "ml", "--alpha", "0.5", "--re", "-1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // E_{1/2}(-1) = e erfc(1)
    assert!((first_value(&o) - 0.427_583_576_155_807_0).abs() < 1e-12);
}

#[test]
fn pv_eval_matches_the_residue_value() {
    let o = fracqm(&["eval", "pv", "--poles=-1,1", "--trig", "cos", "--omega", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // -π sin 1
    assert!((first_value(&o) + 2.643_559_064_081_456_2).abs() < 1e-9);
}

#[test]
fn foxh_from_a_parameter_file() {
    let dir = TempDir::new().unwrap();
    let p = write_config(&dir, "h.json", r#"{"m": 1, "n": 1, "upper": [[0, 1]], "lower": [[0, 1], [0, 0.75]]}"#);
    let o = fracqm(&["eval", "foxh", "--params", p.to_str().unwrap(), "--z", "1.0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // this H-function is E_{0.75}(-z); mpmath value at z = 1
    assert!((first_value(&o) - 0.393_108_302_815_754_06).abs() < 1e-10);
}

#[test]
fn psi_expands_to_every_closed_form() {
    let o = fracqm(&["eval", "psi", "--alpha", "1", "--beta", "1.5", "--x", "1", "--t", "1", "--method", "space-fractional"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.contains("space_fractional_h32") && out.contains("laskin_h22"));
}

#[test]
fn missing_flag_is_named() {
    let o = fracqm(&["eval", "veff", "--a", "1", "--n", "1", "--d", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--beta"));
}

#[test]
fn out_of_range_flag_is_named() {
    let o = fracqm(&["eval", "energy", "--a", "1", "--n", "1", "--beta", "2.5", "--d", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--beta"), "{}", stderr(&o));
}

#[test]
fn well_consistency_writes_21_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "well.json", WELL_21);
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let csv = std::fs::read_to_string(dir.path().join("well.report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,alpha,x,pv_re,pv_im,pv_err,closed_form,recovered_psi,original_psi,residual,converged"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r.split(',').count() == 11 && r.ends_with(",true")));

    let summary = read_json(&dir.path().join("well.report.json"));
    assert_eq!(summary["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(summary["inputs"]["parameters"]["alpha"], 1.5);
    assert_eq!(summary["row_flags"].as_array().unwrap().len(), 21);
    assert_eq!(summary["all_converged"], true);
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "well.json", WELL_21);
    let c = cfg.to_str().unwrap();
    let one = dir.path().join("one");
    let many = dir.path().join("many");
    assert!(fracqm_env(&["run", c, "-o", one.to_str().unwrap()], "1").status.success());
    assert!(fracqm_env(&["run", c, "-o", many.to_str().unwrap()], "4").status.success());
    let a = std::fs::read(dir.path().join("one.csv")).unwrap();
    let b = std::fs::read(dir.path().join("many.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn validate_suite_lists_every_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "suite.json", r#"{"kind": "validate_suite", "parameters": {"output": "reports/suite"}}"#);
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = read_json(&dir.path().join("reports/suite.json"));
    let criteria = summary["results"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    for c in criteria {
        assert!(c["passed"].is_boolean());
        assert!(!c["checks"].as_array().unwrap().is_empty());
    }
    let csv = std::fs::read_to_string(dir.path().join("reports/suite.csv")).unwrap();
    assert_eq!(csv.lines().count() - 1, summary["rows"].as_u64().unwrap() as usize);
    assert!(csv.contains("alpha = 0 diagnostic"));
}

#[test]
fn malformed_json_reports_the_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "bad.json", "{\n  \"kind\": \"pv_eval\",\n  \"parameters\": {\"trig\": \"cos\",, \"omega\": 1}\n}\n");
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.json:3:"), "{}", stderr(&o));
}

#[test]
fn invalid_field_is_named_before_computing() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", r#"{"kind": "well_consistency", "parameters": {"n": 1, "alpha": 1.5, "xs": [0.2, 1.0]}}"#);
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`xs`"), "{}", stderr(&o));
    assert!(!dir.path().join("w.report.csv").exists());
}

#[test]
fn unknown_fields_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", r#"{"kind": "pv_eval", "parameters": {"trig": "cos", "omega": 1, "omegas": 2}}"#);
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("omegas"));
}

#[test]
fn non_convergence_exits_2_with_values_printed() {
    let dir = TempDir::new().unwrap();
    // below the attainable floor of the Abel-summed integrand
    let cfg = write_config(&dir, "hard.json", r#"{"kind": "well_consistency", "parameters": {"n": 1, "alpha": 2.0, "xs": [0.0], "tol": 1e-13}}"#);
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let csv = std::fs::read_to_string(dir.path().join("hard.report.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.ends_with(",false"));
    let pv: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!(pv.is_finite());
    let summary = read_json(&dir.path().join("hard.report.json"));
    assert!(summary["row_flags"][0]["failure"].as_str().unwrap().contains("no convergence"));
}

#[test]
fn free_particle_rows_carry_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "fp.json",
        r#"{"kind": "free_particle", "parameters": {"alpha": 1, "beta": 2, "d_check": 0.5, "xs": [0.7, -0.7], "ts": [1.0],
            "methods": ["fox_h", "time_fractional", "gaussian"]}}"#,
    );
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("fp.report.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "alpha,beta,x,t,method,re,im,err,converged");
    assert_eq!(csv.lines().count(), 1 + 2 * 5);
    let summary = read_json(&dir.path().join("fp.report.json"));
    assert!(summary["results"]["max_representation_spread"].as_f64().unwrap() < 1e-6);
}

#[test]
fn mismatched_representation_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "fp.json",
        r#"{"kind": "free_particle", "parameters": {"alpha": 0.8, "beta": 1.5, "xs": [1], "ts": [1], "methods": ["time_fractional"]}}"#,
    );
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`methods`"));
}

#[test]
fn effective_potential_flags_the_walls() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "v.json", r#"{"kind": "effective_potential", "parameters": {"n": [1, 3], "points": 2001}}"#);
    let o = fracqm(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary = read_json(&dir.path().join("v.report.json"));
    for g in summary["results"]["groups"].as_array().unwrap() {
        assert!(g["max_interior_deviation"].as_f64().unwrap() < 1e-4);
        let flagged: Vec<u64> = g["flagged_points"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        assert!(flagged.contains(&0) && flagged.contains(&2000));
    }
}

#[test]
fn specfun_and_pv_batches() {
    let dir = TempDir::new().unwrap();
    let sf = write_config(
        &dir,
        "sf.json",
        r#"{"kind": "specfun_eval", "parameters": {"function": "mittag_leffler", "alpha": 0.75, "points": [-0.3, [-1, 0], {"re": -2.5, "im": 0}]}}"#,
    );
    assert!(fracqm(&["run", sf.to_str().unwrap()]).status.success());
    let csv = std::fs::read_to_string(dir.path().join("sf.report.csv")).unwrap();
    let re: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    // mpmath values of E_0.75 at -0.3, -1, -2.5
    for (got, want) in re.iter().zip([0.731_908_175_110_220_4, 0.393_108_302_815_754_06, 0.156_426_958_611_947_44]) {
        assert!((got - want).abs() < 1e-10);
    }

    let pv = write_config(&dir, "pv.json", r#"{"kind": "pv_eval", "parameters": {"poles": [-1, 1], "trig": "cos", "omega": [1, 2]}}"#);
    assert!(fracqm(&["run", pv.to_str().unwrap()]).status.success());
    let csv = std::fs::read_to_string(dir.path().join("pv.report.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "power,trig,omega,re,im,abs_err,levels,converged");
    let v: f64 = csv.lines().nth(2).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    // -π sin 2
    assert!((v + std::f64::consts::PI * 2f64.sin()).abs() < 1e-9);
}

#[test]
fn output_never_overwrites_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "well.json", WELL_21);
    let prefix = dir.path().join("well");
    let o = fracqm(&["run", cfg.to_str().unwrap(), "-o", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&cfg).unwrap(), WELL_21);
}

#[test]
fn bad_thread_cap_is_rejected() {
    let o = fracqm_env(&["eval", "ml", "--alpha", "1", "--re", "1"], "zero");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FRACQM_THREADS"));
}

#[test]
fn shipped_configs_run_clean() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = TempDir::new().unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(&root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let prefix = dir.path().join(path.file_stem().unwrap());
        let o = fracqm(&["run", path.to_str().unwrap(), "-o", prefix.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stderr(&o));
        seen += 1;
    }
    assert_eq!(seen, 6);
}
