//! Wynn's epsilon algorithm for accelerating slowly converging sequences.

use num_complex::Complex64;

/// Accelerated limit of the partial sums `seq` with an error estimate.
///
/// Every even column of the epsilon table is a candidate; the one whose two
/// newest entries agree best wins, and that disagreement is the estimate.
pub fn wynn_epsilon(seq: &[Complex64]) -> (Complex64, f64) {
    let n = seq.len();
    match n {
        0 => return (Complex64::new(0.0, 0.0), f64::INFINITY),
        1 => return (seq[0], f64::INFINITY),
        _ => {}
    }
    let mut best = (seq[n - 1], (seq[n - 1] - seq[n - 2]).norm());
    let scale = seq.iter().map(|s| s.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = seq.to_vec();
    for k in 1..n {
        let len = cur.len() - 1;
        let mut next = Vec::with_capacity(len);
        for j in 0..len {
            let d = cur[j + 1] - cur[j];
            if d.norm() <= 1e-3 * f64::EPSILON * scale {
                // exact convergence in this column: the table cannot go further
                return best;
            }
            next.push(prev[j + 1] + d.inv());
        }
        if k % 2 == 0 && next.len() >= 2 {
            let last = next[next.len() - 1];
            let err = (last - next[next.len() - 2]).norm();
            if last.re.is_finite() && last.im.is_finite() && err < best.1 {
                best = (last, err);
            }
        }
        prev = cur;
        cur = next;
        if cur.len() < 2 {
            break;
        }
    }
    best
}
