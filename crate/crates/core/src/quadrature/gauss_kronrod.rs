//! Globally adaptive 10/21-point Gauss-Kronrod integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::QuadResult;
use crate::error::{Error, Result};

// Kronrod abscissae in descending order; odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_345_064,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub(crate) const DEFAULT_MAX_SUBDIVISIONS: usize = 4000;

/// One application of the 21-point Kronrod rule on `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
    pub err: f64,
    pub depth: u32,
    /// True when the Gauss/Kronrod difference is below the rounding floor.
    pub at_precision: bool,
}

pub(crate) fn kronrod_panel<F>(f: &F, a: f64, b: f64, depth: u32) -> Panel
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        kronrod += pair * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let diff = ((kronrod - gauss) * half).norm();
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    let nan = !(value.re.is_finite() && value.im.is_finite());
    Panel {
        a,
        b,
        value,
        err: if nan { f64::INFINITY } else { diff.max(floor) },
        depth,
        at_precision: !nan && diff <= floor,
    }
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0.err == other.0.err
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.err.total_cmp(&other.0.err)
    }
}

/// Outcome of the adaptive loop before the public success contract is applied.
#[derive(Debug, Clone)]
pub(crate) struct AdaptiveOutcome {
    pub value: Complex64,
    pub abs_err: f64,
    pub max_depth: u32,
    pub hit_limit: bool,
    pub worst: (f64, f64),
}

/// Adaptive integration over consecutive cut points. Panels whose error is
/// pinned at the rounding floor are not split further.
pub(crate) fn adaptive_core<F>(f: &F, cuts: &[f64], tol: f64, max_subdivisions: usize) -> AdaptiveOutcome
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mut heap = BinaryHeap::new();
    let mut settled = Complex64::new(0.0, 0.0);
    let mut settled_err = 0.0;
    let mut max_depth = 0;
    for w in cuts.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        heap.push(ByError(kronrod_panel(f, w[0], w[1], 0)));
    }
    let mut panels = heap.len();
    let mut run_err: f64 = heap.iter().map(|p| p.0.err).sum();
    loop {
        let exact_totals = |heap: &BinaryHeap<ByError>| {
            heap.iter()
                .fold((settled, settled_err), |(v, e), p| (v + p.0.value, e + p.0.err))
        };
        let worst = match heap.peek() {
            Some(p) => p.0,
            None => {
                return AdaptiveOutcome {
                    value: settled,
                    abs_err: settled_err,
                    max_depth,
                    hit_limit: false,
                    worst: (0.0, 0.0),
                }
            }
        };
        if settled_err + run_err <= tol {
            let (total, total_err) = exact_totals(&heap);
            if total_err <= tol {
                return AdaptiveOutcome {
                    value: total,
                    abs_err: total_err,
                    max_depth,
                    hit_limit: false,
                    worst: (worst.a, worst.b),
                };
            }
            run_err = total_err - settled_err;
        }
        let width_floor = 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.at_precision || (worst.b - worst.a).abs() <= width_floor {
            let p = heap.pop().expect("peeked").0;
            settled += p.value;
            settled_err += p.err;
            run_err -= p.err;
            continue;
        }
        if panels >= max_subdivisions {
            let (total, total_err) = exact_totals(&heap);
            return AdaptiveOutcome {
                value: total,
                abs_err: total_err,
                max_depth,
                hit_limit: true,
                worst: (worst.a, worst.b),
            };
        }
        let p = heap.pop().expect("peeked").0;
        let mid = 0.5 * (p.a + p.b);
        let left = kronrod_panel(f, p.a, mid, p.depth + 1);
        let right = kronrod_panel(f, mid, p.b, p.depth + 1);
        max_depth = max_depth.max(p.depth + 1);
        run_err += left.err + right.err - p.err;
        heap.push(ByError(left));
        heap.push(ByError(right));
        panels += 1;
    }
}

/// Lenient variant used inside composite engines: reaching the rounding
/// floor counts as success and the honest error is reported.
pub(crate) fn integrate_lenient<F>(f: &F, cuts: &[f64], tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let out = adaptive_core(f, cuts, tol, DEFAULT_MAX_SUBDIVISIONS);
    if out.hit_limit || !out.abs_err.is_finite() {
        return Err(Error::non_convergence(
            format!("subdivision limit reached; worst subinterval [{}, {}]", out.worst.0, out.worst.1),
            out.value,
            out.abs_err,
        ));
    }
    Ok(QuadResult {
        value: out.value,
        abs_err_estimate: out.abs_err,
        refinement_levels: out.max_depth,
        converged: true,
    })
}

/// Adaptive integration of a complex-valued `f` over `[a, b]` to absolute
/// tolerance `tol`.
///
/// On success `abs_err_estimate <= tol`. When the subdivision budget runs
/// out, or the requested tolerance is below the rounding floor of the
/// integrand, the error names the worst subinterval.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_with_breakpoints(f, &[a, b], tol)
}

/// Like [`integrate_adaptive`] with interior break points where `f` has
/// kinks or integrable singularities. `points` must be sorted.
pub fn integrate_with_breakpoints<F>(f: F, points: &[f64], tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if points.len() < 2 || points.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("integration limits must be finite and increasing"));
    }
    let out = adaptive_core(&f, points, tol, DEFAULT_MAX_SUBDIVISIONS);
    if out.hit_limit || !(out.abs_err <= tol) {
        let reason = if out.hit_limit {
            format!("adaptive quadrature stalled; worst subinterval [{}, {}]", out.worst.0, out.worst.1)
        } else {
            format!("tolerance {tol:e} is below the rounding floor {:e} of the integrand", out.abs_err)
        };
        return Err(Error::non_convergence(reason, out.value, out.abs_err));
    }
    Ok(QuadResult {
        value: out.value,
        abs_err_estimate: out.abs_err,
        refinement_levels: out.max_depth,
        converged: true,
    })
}

/// Real-valued convenience wrapper around [`integrate_adaptive`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive(|x| Complex64::new(f(x), 0.0), a, b, tol)
}

/// `∫_a^∞ f(t) dt` through the map `t = a + u/(1-u)`, `u ∈ [0, 1)`.
pub fn integrate_to_infinity<F>(f: F, a: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    let mapped = |u: f64| {
        let v = 1.0 - u;
        let t = a + u / v;
        let w = f(t) / (v * v);
        if w.re.is_finite() && w.im.is_finite() {
            w
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    integrate_with_breakpoints(mapped, &[0.0, 0.5, 1.0], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_weights_integrate_constants() {
        let sum: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((sum - 2.0).abs() < 1e-15);
        let gsum: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((gsum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_high_degree_polynomials() {
        // K21 integrates degree 31 exactly on [-1, 1]
        for k in [2u32, 10, 20, 30] {
            let p = kronrod_panel(&|x: f64| Complex64::new(x.powi(k as i32), 0.0), -1.0, 1.0, 0);
            let exact = 2.0 / (k as f64 + 1.0);
            assert!((p.value.re - exact).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn polynomial_and_sine() {
        let r = integrate_real(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value.re - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.abs_err_estimate <= 1e-12);
        let r = integrate_real(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate_real(|x| x.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
        assert!(r.refinement_levels > 5);
    }

    #[test]
    fn budget_exhaustion_names_subinterval() {
        let err = integrate_real(|x| 1.0 / x, 0.0, 1.0, 1e-10).unwrap_err();
        match err {
            Error::NonConvergence { reason, .. } => assert!(reason.contains("worst subinterval")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unreachable_tolerance_names_the_floor() {
        let err = integrate_real(|x| x.cos(), 0.0, 3.0, 1e-17).unwrap_err();
        match err {
            Error::NonConvergence { reason, .. } => assert!(reason.contains("rounding floor"), "{reason}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(integrate_real(|x| x, 0.0, 1.0, 0.0).is_err());
    }
}
