//! Sturm-sequence bisection for symmetric tridiagonal eigenvalues.
//!
//! Only the lowest few eigenvalues are ever needed here, so bisection on
//! the LDLᵀ negative-pivot count beats any full decomposition.

/// Number of eigenvalues strictly below `lambda`.
///
/// LDLᵀ sweep: each negative pivot counts one eigenvalue below the shift.
pub fn count_below(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let guard = 1e-300;
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let safe = if q.abs() < guard {
            guard.copysign(if q == 0.0 { 1.0 } else { q })
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `m` lowest eigenvalues, ascending, by bisection inside the
/// Gershgorin bounds.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], m: usize) -> Vec<f64> {
    let n = diag.len();
    assert!(m <= n, "cannot extract {m} eigenvalues from an {n}-matrix");
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 1e-3 * (hi - lo).abs().max(1.0);
    lo -= pad;
    hi += pad;

    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (b - a) <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if count_below(diag, off, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn counts_on_a_2x2() {
        // [[1, -1], [-1, 3]]: eigenvalues 2 ∓ √2 ≈ 0.586, 3.414
        let d = [1.0, 3.0];
        let e = [-1.0];
        assert_eq!(count_below(&d, &e, 0.0), 0);
        assert_eq!(count_below(&d, &e, 1.0), 1);
        assert_eq!(count_below(&d, &e, 4.0), 2);
    }

    #[test]
    fn chain_eigenvalues_match_closed_form() {
        // free chain: d = 2, e = -1 → λ_k = 2 − 2cos(kπ/(n+1))
        let n = 64;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let evals = lowest_eigenvalues(&d, &e, 5);
        for (k, ev) in evals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n as f64 + 1.0)).cos();
            assert!(
                (ev - exact).abs() < 1e-10,
                "k = {}: {} vs {}",
                k,
                ev,
                exact
            );
        }
    }

    #[test]
    fn eigenvalues_ascend() {
        let n = 100;
        let d: Vec<f64> = (0..n).map(|i| (i as f64 * 0.77).sin() * 3.0).collect();
        let e: Vec<f64> = (0..n - 1).map(|i| (i as f64 * 0.31).cos()).collect();
        let evals = lowest_eigenvalues(&d, &e, 10);
        for w in evals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
        // consistency with the counter
        for (k, &ev) in evals.iter().enumerate() {
            assert!(count_below(&d, &e, ev + 1e-8) >= k + 1);
            assert!(count_below(&d, &e, ev - 1e-8) <= k);
        }
    }
}
