use std::f64::consts::PI;
use std::sync::Arc;

use fracqm::fracops::*;
use fracqm::quadrature::Oscillation;
use fracqm::specfun::gamma;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Momentum representation of the unit-box ground state, `A = a = ħ = 1`.
fn ground_state() -> SpectralFunction {
    SpectralFunction::Oscillatory {
        envelope: Arc::new(|_| c(-PI)),
        poles: vec![-PI / 2.0, PI / 2.0],
        oscillation: Oscillation::cos(1.0),
        tail_exponent: -2.0,
        hbar: 1.0,
    }
}

/// Fourth-order central second difference.
fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

#[test]
fn second_order_riesz_on_the_ground_state() {
    for x in [0.0, 0.5, -0.9] {
        let r = quantum_riesz_apply(&ground_state(), 2.0, x, 1e-8).unwrap();
        let want = (PI / 2.0).powi(2) * (PI * x / 2.0).cos();
        assert!((r.value - want).norm() < 1e-6, "x={x}: {} vs {want}", r.value);
    }
}

#[test]
fn second_order_riesz_on_a_gaussian() {
    // Φ of e^{-x²/2}
    let f = SpectralFunction::Decaying {
        phi: Arc::new(|p| c((2.0 * PI).sqrt() * (-p * p / 2.0).exp())),
        hbar: 1.0,
        support: 40.0,
    };
    for x in [-2.0, -0.7, 0.0, 0.4, 1.6] {
        let r = quantum_riesz_apply(&f, 2.0, x, 1e-12).unwrap();
        let g = |y: f64| (-y * y / 2.0).exp();
        let fd = -five_point(g, x, 1e-2);
        assert!((r.value - fd).norm() < 1e-7, "x={x}: {} vs {fd}", r.value);
    }
}

#[test]
fn grid_riesz_on_a_compact_bump() {
    let h = 0.01;
    let bump = |x: f64| (-4.0 * x * x).exp();
    let f = GridFunction::sample_real(bump, -6.0, h, 1201).unwrap();
    let r = riesz_apply_grid(&f, 2.0, Boundary::Compact).unwrap();
    for k in (2..1199).step_by(37) {
        let x = f.point(k);
        let fd = five_point(bump, x, h);
        assert!((r.output.samples[k] - fd).norm() < 1e-6, "x={x}");
        let exact = (64.0 * x * x - 8.0) * bump(x);
        assert!((r.output.samples[k] - exact).norm() < 1e-6, "x={x}");
    }
    assert!(!r.aliasing_warning);
}

#[test]
fn caputo_of_t_and_t_squared() {
    let n = 10_000;
    let f = GridFunction::sample_real(|t| t, 0.0, 1.0 / (n - 1) as f64, n).unwrap();
    let v = caputo_derivative(&f, 0.5, 1.0).unwrap().value.re;
    assert!((v - 2.0 / PI.sqrt()).abs() < 1e-4);

    let g = GridFunction::sample_real(|t| t * t, 0.0, 1.0 / (n - 1) as f64, n).unwrap();
    let v = caputo_derivative(&g, 0.3, 1.0).unwrap().value.re;
    assert!((v - 2.0 / gamma(2.7).unwrap()).abs() < 1e-4);
}

#[test]
fn caputo_laplace_pairs() {
    let h = 0.01;
    let one = GridFunction::sample_real(|_| 1.0, 0.0, h, 2001).unwrap();
    assert!(caputo_laplace_check(&one, 0.4, c(1.5)).unwrap() <= 1e-8);
    let t = GridFunction::sample_real(|t| t, 0.0, h, 3001).unwrap();
    assert!(caputo_laplace_check(&t, 0.5, c(2.0)).unwrap() <= 1e-4);
    let e = GridFunction::sample_real(|t| (-t).exp(), 0.0, h, 4001).unwrap();
    assert!(caputo_laplace_check(&e, 0.3, Complex64::new(1.0, 1.0)).unwrap() <= 1e-3);
}

#[test]
fn laplace_check_needs_right_half_plane() {
    let f = GridFunction::sample_real(|t| t, 0.0, 0.1, 11).unwrap();
    assert!(caputo_laplace_check(&f, 0.5, c(-1.0)).is_err());
}
