use std::f64::consts::PI;

use fracqm::quadrature::integrate_to_infinity;
use fracqm::specfun::*;
use fracqm::Error;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn gamma_landmarks() {
    assert!((gamma_complex(c(1.0)).unwrap() - 1.0).norm() < 1e-15);
    assert!((gamma_complex(c(0.5)).unwrap() - PI.sqrt()).norm() < 1e-14);
}

#[test]
fn gamma_of_one_plus_i_by_two_routes() {
    let z = Complex64::new(1.0, 1.0);
    let g = gamma_complex(z).unwrap();
    // mpmath: gamma(1+1j)
    let frozen = Complex64::new(0.498_015_668_118_356_042_7, -0.154_949_828_301_810_685_1);
    assert!((g - frozen).norm() < 1e-13 * frozen.norm());
    let integral = integrate_to_infinity(|t| (-t).exp() * c(t).powc(z - 1.0), 0.0, 1e-12).unwrap();
    assert!((g - integral.value).norm() < 1e-10, "{g} vs {}", integral.value);
}

#[test]
fn gamma_pole_differs_from_overflow() {
    assert!(matches!(gamma_complex(c(-3.0)), Err(Error::GammaPole(_))));
    assert!(matches!(gamma_complex(c(200.0)), Err(Error::GammaOverflow(_))));
}

#[test]
fn mittag_leffler_landmarks() {
    assert_eq!(mittag_leffler(0.7, c(0.0)).unwrap().value, c(1.0));
    assert!((mittag_leffler(1.0, c(1.0)).unwrap().value - std::f64::consts::E).norm() < 1e-12);
    // mpmath, 50 digits: E_{1/2}(-1) = e erfc(1)
    let v = mittag_leffler(0.5, c(-1.0)).unwrap().value;
    assert!((v.re - 0.427_583_576_155_807_004_4).abs() < 1e-12);
}

#[test]
fn exponential_as_h_function() {
    let h = FoxHParams::real(1, 0, &[], &[(0.0, 1.0)]).unwrap();
    let v = foxh_eval(&h, c(1.0), &MellinBarnesConfig::default()).unwrap();
    assert!((v.value - (-1.0f64).exp()).norm() < 1e-12);
}

#[test]
fn mittag_leffler_kernel_at_order_one() {
    let h = FoxHParams::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
    let v = foxh_eval(&h, c(0.7), &MellinBarnesConfig::default()).unwrap();
    assert!((v.value - (-0.7f64).exp()).norm() < 1e-12);
}

#[test]
fn mittag_leffler_kernel_matches_frozen_values() {
    // mpmath series at 30 digits
    let frozen = [
        (0.3, 0.731_908_175_110_220_385_7),
        (1.0, 0.393_108_302_815_754_061_8),
        (2.5, 0.156_426_958_611_947_442_9),
    ];
    let h = FoxHParams::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, 0.75)]).unwrap();
    for (z, want) in frozen {
        let by_h = foxh_eval(&h, c(z), &MellinBarnesConfig::default()).unwrap().value;
        let by_ml = mittag_leffler(0.75, c(-z)).unwrap().value;
        assert!((by_h.re - want).abs() < 1e-8, "{z}: {by_h}");
        assert!((by_ml.re - want).abs() < 1e-10, "{z}: {by_ml}");
    }
}

#[test]
fn profile_of_the_free_particle_form() {
    for (a, b) in [(0.5, 1.5), (0.9, 1.8), (1.0, 1.2)] {
        let h = FoxHParams::real(1, 2, &[(0.5, b / 2.0), (0.0, 1.0), (0.0, b / 2.0)], &[(0.0, 1.0), (0.0, a)]).unwrap();
        let p = foxh_validate(&h).unwrap();
        assert!((p.mu - (a - b)).abs() < 1e-15);
        assert_eq!(p.analytic_domain, AnalyticDomain::Undetermined);
    }
    let e = foxh_validate(&FoxHParams::real(1, 0, &[], &[(0.0, 1.0)]).unwrap()).unwrap();
    assert_eq!(e.mu, 1.0);
    assert_eq!(e.analytic_domain, AnalyticDomain::AllNonzero);
}

#[test]
fn forced_coincidence_is_invalid() {
    let h = FoxHParams::real(1, 1, &[(1.0, 1.0)], &[(0.0, 1.0)]).unwrap();
    assert!(matches!(foxh_validate(&h), Err(Error::InvalidParameters(_))));
}

#[test]
fn contour_and_series_agree_when_mu_is_positive() {
    let cfg = MellinBarnesConfig::default();
    let h = FoxHParams::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, 0.75)]).unwrap();
    for k in 1..=10 {
        let z = c(0.5 * k as f64);
        let a = foxh_contour(&h, z, &cfg).unwrap();
        let b = foxh_series(&h, z, &cfg).unwrap();
        assert!((a.value - b.value).norm() <= 1e-12 + a.abs_err + b.abs_err, "z={z}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn inverse_laplace_of_reciprocal_shift() {
    let cfg = MellinBarnesConfig::default();
    let e = HTerm::new(FoxHParams::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, 1.0)]).unwrap(), c(1.0), 1.0);
    let image = e.laplace().unwrap();
    assert!((image.eval(c(2.0), &cfg).unwrap().value - 1.0 / 3.0).norm() < 1e-8);
    let back = image.inverse_laplace().unwrap();
    for x in [0.2, 1.0, 3.0, 4.5, 0.05] {
        assert!((back.eval(c(x), &cfg).unwrap().value - (-x).exp()).norm() < 1e-8);
    }
}

#[test]
fn transform_constraints() {
    let h = FoxHParams::real(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
    assert!(matches!(foxh_laplace(&h, c(1.0), -1.0, c(1.0)), Err(Error::ConstraintViolation(_))));
    assert!(matches!(foxh_inverse_laplace(&h, c(1.0), 0.0), Err(Error::ConstraintViolation(_))));
}

#[test]
fn derivative_of_z_times_exponential() {
    let cfg = MellinBarnesConfig::default();
    let h = FoxHParams::real(1, 0, &[], &[(0.0, 1.0)]).unwrap();
    let d = foxh_rl_derivative(&h, 1.0, 1.0, 1.0, 1.5).unwrap();
    let f = |z: f64| z * (-1.5 * z).exp();
    for z in [0.3, 0.9, 2.0] {
        let fd = (f(z + 1e-5) - f(z - 1e-5)) / 2e-5;
        assert!((d.eval(c(z), &cfg).unwrap().value - fd).norm() < 1e-6);
    }
}
