//! Scalar root finding: safeguarded Brent iteration on a sign-change bracket.

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy)]
pub struct BracketedRoot {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("f(a) and f(b) have the same sign: f({a}) = {fa}, f({b}) = {fb}")]
    NotBracketed { a: f64, fa: f64, b: f64, fb: f64 },
    #[error("root iteration failed to converge")]
    NoConvergence,
}

/// Brent's method on `[a, b]` with `f(a)·f(b) ≤ 0`, to relative tolerance
/// `rel_tol` in `x` (floored at a few ulps).
///
/// Combines bisection safeguards with secant/inverse-quadratic steps; never
/// leaves the bracket.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<BracketedRoot, RootError> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(BracketedRoot { x: a, f: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(BracketedRoot { x: b, f: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed { a, fa, b, fb });
    }
    // c is the previous iterate; (b, fb) is the best root estimate.
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = b - a;
    for iter in 0..200 {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs().max(1.0) + 0.5 * rel_tol * b.abs().max(1.0);
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(BracketedRoot { x: b, f: fb, iterations: iter });
        }
        if e.abs() < tol || fa.abs() <= fb.abs() {
            d = m;
            e = m;
        } else {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant step
                (2.0 * m * s, 1.0 - s)
            } else {
                // inverse quadratic interpolation
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            e = b - a;
            d = e;
        }
    }
    Err(RootError::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
        let r = brent(|x| x.cos(), 0.0, 3.0, 1e-14).unwrap();
        assert!((r.x - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn handles_steep_functions() {
        // steep near the root: f = 1/sqrt(x) - 10
        let r = brent(|x: f64| 1.0 / x.sqrt() - 10.0, 1e-8, 1.0, 1e-14).unwrap();
        assert!((r.x - 0.01).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(RootError::NotBracketed { .. })
        ));
    }
}
