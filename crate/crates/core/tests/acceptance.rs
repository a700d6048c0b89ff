//! One PASS/FAIL line per acceptance criterion, with the individual checks
//! underneath. Run with `--nocapture` to see the report.

use fracqm::validation::{validate_suite, CriterionReport};

fn print(report: &CriterionReport) {
    println!("{}", report.summary_line());
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let tol = if c.tolerance.is_nan() { "reported".to_string() } else { format!("<= {:.1e}", c.tolerance) };
        println!("    {mark} {}: {:.4e} ({tol}) {}", c.name, c.measured, c.note);
    }
}

#[test]
fn acceptance() {
    let reports = validate_suite();
    assert_eq!(reports.len(), 10);
    for r in &reports {
        print(r);
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
