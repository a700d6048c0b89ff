use std::f64::consts::PI;

use fracqm::quadrature::{
    integrate_adaptive, integrate_real, integrate_to_infinity, oscillatory_tail, pv_integrate, Oscillation, PvProblem,
    Trig,
};
use fracqm::well::{recovery_integral, WellSpec};
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn polynomial_and_sine() {
    let r = integrate_real(|x| x * x, 0.0, 1.0, 1e-13).unwrap();
    assert!((r.value.re - 1.0 / 3.0).abs() < 1e-12);
    let r = integrate_real(f64::sin, 0.0, PI, 1e-13).unwrap();
    assert!((r.value.re - 2.0).abs() < 1e-12);
}

#[test]
fn mapped_half_line_gives_gamma_1_3() {
    // mpmath: gamma(1.3)
    let r = integrate_to_infinity(|t| c((-t).exp() * t.powf(0.3)), 0.0, 1e-11).unwrap();
    assert!((r.value.re - 0.897_470_696_306_277_188_5).abs() < 1e-9, "{}", r.value);
}

#[test]
fn sine_integral_tail() {
    // pi/2 - Si(1)
    let r = oscillatory_tail(|q| 1.0 / q, Trig::Sin, 1.0, 1.0, 1e-11).unwrap();
    assert!((r.value.re - 0.624_713_256_427_713_604_3).abs() < 1e-8, "{}", r.value);
}

#[test]
fn quarter_wave_cosine_tail() {
    // mpmath quadosc of cos(pi q/2)/q^2 on [1, inf)
    let want = -0.314_212_921_625_860_736_6;
    let r = oscillatory_tail(|q| 1.0 / (q * q), Trig::Cos, PI / 2.0, 1.0, 1e-11).unwrap();
    assert!((r.value.re - want).abs() < 1e-8, "{}", r.value);

    // brute force period by period to q = 1e5; the remainder is below 2/(π·1e10)
    let mut brute = 0.0;
    let mut a = 1.0;
    while a < 1e5 {
        brute += integrate_adaptive(|q| c((PI * q / 2.0).cos() / (q * q)), a, a + 4.0, 1e-13).unwrap().value.re;
        a += 4.0;
    }
    assert!((r.value.re - brute).abs() < 1e-8, "{} vs {brute}", r.value);
}

#[test]
fn zero_envelope() {
    let r = oscillatory_tail(|_| 0.0, Trig::Cos, 3.0, 2.0, 1e-10).unwrap();
    assert_eq!(r.value, c(0.0));
}

#[test]
fn principal_value_oracle() {
    let p = PvProblem::new(|_| c(1.0), Oscillation::cos(1.0)).with_poles(&[-1.0, 1.0]);
    let r = pv_integrate(&p, 1e-11).unwrap();
    assert!((r.value.re + PI * 1f64.sin()).abs() < 1e-9);
    assert!(r.value.im.abs() < 1e-11);
}

#[test]
fn well_integrand_at_alpha_zero() {
    let r = pv_integrate(&recovery_integral(&WellSpec::unit(1.5), 1, 0.0, 0.0), 1e-10).unwrap();
    assert!((r.value.re + PI).abs() < 1e-9);
}

#[test]
fn well_integrand_is_real() {
    let spec = WellSpec::unit(1.5);
    for alpha in [0.4, 1.3, 1.9] {
        for x in [-0.7, 0.15] {
            let r = pv_integrate(&recovery_integral(&spec, 2, alpha, x), 1e-9).unwrap();
            assert!(r.value.im.abs() < 1e-9, "alpha={alpha} x={x}: {}", r.value);
        }
    }
}

#[test]
fn halving_the_window_stays_within_the_estimate() {
    let spec = WellSpec::unit(1.5);
    let base = recovery_integral(&spec, 1, 1.5, 0.3);
    let wide = pv_integrate(&base.clone().with_window(0.4), 1e-9).unwrap();
    let narrow = pv_integrate(&base.with_window(0.2), 1e-9).unwrap();
    assert!((wide.value - narrow.value).norm() < 1e-9 + wide.abs_err_estimate + narrow.abs_err_estimate);
}

#[test]
fn one_more_level_stays_within_twice_the_estimate() {
    let spec = WellSpec::unit(1.5);
    for (n, alpha, x) in [(1, 1.5, 0.0), (2, 1.2, 0.45), (3, 1.8, -0.6)] {
        let p = recovery_integral(&spec, n, alpha, x);
        let coarse = pv_integrate(&p, 1e-7).unwrap();
        let fine = pv_integrate(&p, 1e-8).unwrap();
        assert!(coarse.converged);
        assert!(
            (coarse.value - fine.value).norm() <= 2.0 * coarse.abs_err_estimate.max(1e-7),
            "n={n}: {} vs {}",
            coarse.value,
            fine.value
        );
    }
}

#[test]
fn scaling_is_linear() {
    let p = recovery_integral(&WellSpec::unit(1.5), 1, 1.5, 0.2);
    let base = pv_integrate(&p, 1e-10).unwrap().value;
    for k in [2.0, -1.0] {
        let v = pv_integrate(&p.clone().scaled(c(k)), 1e-10).unwrap().value;
        assert!((v - base * k).norm() < 1e-12, "{k}: {v} vs {}", base * k);
    }
}
