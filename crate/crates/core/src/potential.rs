//! Numeric potentials: closures for `U(x)` and `U'(x)` on an open domain.
//!
//! `EvaluablePotential` is the single numeric view shared by the period
//! quadrature, the trajectory integrator, and the cross-validation corpus.
//! It can be built from an exact rational potential, from one of the named
//! built-in test potentials, or from ad-hoc closures in tests.

use crate::classify::RationalPotential;
use std::fmt;
use std::sync::Arc;

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A potential that can be evaluated numerically on an open interval.
///
/// `domain` ends may be infinite; a finite end is either a pole of the
/// potential or a genuine boundary of its definition (the built-in algebraic
/// example stops at x = 1/4). `well_hint`, when present, is a point believed
/// to be inside the well of interest.
#[derive(Clone)]
pub struct EvaluablePotential {
    eval: EvalFn,
    deriv: EvalFn,
    domain: (f64, f64),
    well_hint: Option<f64>,
    label: String,
}

impl EvaluablePotential {
    pub fn from_fns<F, G>(
        label: impl Into<String>,
        eval: F,
        deriv: G,
        domain: (f64, f64),
        well_hint: Option<f64>,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        EvaluablePotential {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain,
            well_hint,
            label: label.into(),
        }
    }

    /// Numeric view of an exact rational potential.
    ///
    /// Poles are taken from the real roots of the denominator (exactly for
    /// perfect-square and low-degree denominators, by sign-change scanning
    /// otherwise); the domain is the interval between adjacent poles that
    /// contains `hint`, or the first pole-free interval in which a minimum
    /// can be found.
    pub fn from_rational(u: &RationalPotential, hint: Option<f64>) -> Self {
        let num = u.numerator().coeffs_f64();
        let den = u.denominator().coeffs_f64();
        let dnum = u.numerator().derivative().coeffs_f64();
        let dden = u.denominator().derivative().coeffs_f64();
        let label = format!("{}", u);

        let poles = real_denominator_roots(u);
        let eval = {
            let (num, den) = (num.clone(), den.clone());
            move |x: f64| horner(&num, x) / horner(&den, x)
        };
        let deriv = move |x: f64| {
            let q = horner(&den, x);
            (horner(&dnum, x) * q - horner(&num, x) * horner(&dden, x)) / (q * q)
        };

        let intervals = pole_intervals(&poles);
        let domain = match hint {
            Some(h) => intervals
                .iter()
                .copied()
                .find(|&(a, b)| a < h && h < b)
                .unwrap_or((f64::NEG_INFINITY, f64::INFINITY)),
            None => {
                // Prefer an interval where a confined minimum actually exists.
                let probe = |dom: (f64, f64)| {
                    let p = EvaluablePotential {
                        eval: Arc::new(eval.clone()),
                        deriv: Arc::new(deriv.clone()),
                        domain: dom,
                        well_hint: None,
                        label: String::new(),
                    };
                    !p.scan_minima().is_empty()
                };
                intervals
                    .iter()
                    .copied()
                    .find(|&dom| probe(dom))
                    .unwrap_or_else(|| *intervals.last().expect("at least one interval"))
            }
        };

        EvaluablePotential {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain,
            well_hint: hint,
            label,
        }
    }

    /// The isochronous potential defined implicitly by `(y + x)² = y`:
    /// the branch `U(x) = (1 − 2x − √(1−4x))/2` with its minimum at 0,
    /// defined for x ≤ 1/4.
    pub fn algebraic_example() -> Self {
        Self::from_fns(
            "algebraic_example",
            |x| 0.5 * (1.0 - 2.0 * x - (1.0 - 4.0 * x).sqrt()),
            |x| 1.0 / (1.0 - 4.0 * x).sqrt() - 1.0,
            (f64::NEG_INFINITY, 0.25),
            Some(0.0),
        )
    }

    /// `U = (x² − 1)²`: two wells at ±1 separated by a barrier of height 1.
    pub fn double_well() -> Self {
        Self::from_fns(
            "double_well",
            |x| {
                let y = x * x - 1.0;
                y * y
            },
            |x| 4.0 * x * (x * x - 1.0),
            (f64::NEG_INFINITY, f64::INFINITY),
            None,
        )
    }

    /// `U = x⁴`: the standard non-isochronous scaling example.
    pub fn quartic() -> Self {
        Self::from_fns(
            "quartic",
            |x| x.powi(4),
            |x| 4.0 * x.powi(3),
            (f64::NEG_INFINITY, f64::INFINITY),
            Some(0.0),
        )
    }

    /// `U = x² + x⁴`: a perturbed oscillator whose period drops with energy.
    pub fn anharmonic() -> Self {
        Self::from_fns(
            "anharmonic",
            |x| x * x + x.powi(4),
            |x| 2.0 * x + 4.0 * x.powi(3),
            (f64::NEG_INFINITY, f64::INFINITY),
            Some(0.0),
        )
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "algebraic_example" => Some(Self::algebraic_example()),
            "double_well" => Some(Self::double_well()),
            "quartic" => Some(Self::quartic()),
            "anharmonic" => Some(Self::anharmonic()),
            _ => None,
        }
    }

    pub fn with_hint(mut self, hint: f64) -> Self {
        self.well_hint = Some(hint);
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn well_hint(&self) -> Option<f64> {
        self.well_hint
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Maximum relative disagreement between `deriv` and a central finite
    /// difference of `eval` over `points`. Consistency guard for tests.
    pub fn derivative_consistency(&self, points: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for &x in points {
            let h = 1e-6 * x.abs().max(1.0);
            let fd = (self.eval(x + h) - self.eval(x - h)) / (2.0 * h);
            let d = self.deriv(x);
            // Floor the scale: near stationary points the truncation term of
            // the finite difference dominates any relative comparison.
            let scale = d.abs().max(fd.abs()).max(1e-3);
            worst = worst.max((fd - d).abs() / scale);
        }
        worst
    }

    /// Scans the domain for brackets where `U'` crosses from − to +.
    ///
    /// Returns one interior point per detected sign change; used both for
    /// hint-free well location and for choosing a domain interval.
    pub(crate) fn scan_minima(&self) -> Vec<(f64, f64)> {
        let (a, b) = self.domain;
        let margin = |end: f64| 1e-6 * (1.0 + end.abs());
        let reach = 40.0;
        let (lo, hi) = match (a.is_finite(), b.is_finite()) {
            (true, true) => (a + margin(a), b - margin(b)),
            (true, false) => (a + margin(a), a + reach),
            (false, true) => (b - reach, b - margin(b)),
            (false, false) => (-reach, reach),
        };
        if !(lo < hi) {
            return Vec::new();
        }
        let n = 4000;
        let step = (hi - lo) / n as f64;
        let mut brackets = Vec::new();
        let mut prev_x = lo;
        let mut prev_d = self.deriv(lo);
        for i in 1..=n {
            let x = lo + step * i as f64;
            let d = self.deriv(x);
            if prev_d.is_finite() && d.is_finite() && prev_d < 0.0 && d >= 0.0 {
                brackets.push((prev_x, x));
            }
            prev_x = x;
            prev_d = d;
        }
        brackets
    }
}

impl fmt::Debug for EvaluablePotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvaluablePotential")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("well_hint", &self.well_hint)
            .finish()
    }
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Real roots of the denominator, as pole locations in ascending order.
fn real_denominator_roots(u: &RationalPotential) -> Vec<f64> {
    let q = u.denominator();
    match q.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![-q.coeff(0).to_f64() / q.coeff(1).to_f64()],
        Some(2) => {
            // monic: x² + bx + c
            let b = q.coeff(1).to_f64();
            let c = q.coeff(0).to_f64();
            let disc = b * b - 4.0 * c;
            if disc < 0.0 {
                Vec::new()
            } else if disc == 0.0 {
                vec![-b / 2.0]
            } else {
                let r = disc.sqrt();
                let mut roots = vec![(-b - r) / 2.0, (-b + r) / 2.0];
                roots.sort_by(f64::total_cmp);
                roots
            }
        }
        Some(_) => {
            // Exact square detection first (covers (x−s)^{2k} denominators),
            // then a sign-change scan for odd-multiplicity roots.
            if let Some(r) = q.sqrt_exact() {
                let half =
                    RationalPotential::new(crate::poly::Polynomial::one(), r).expect("nonzero");
                return real_denominator_roots(&half);
            }
            let coeffs = q.coeffs_f64();
            let mut roots = Vec::new();
            let n = 8000;
            let (lo, hi) = (-100.0, 100.0);
            let step = (hi - lo) / n as f64;
            let mut prev_x = lo;
            let mut prev_v = horner(&coeffs, lo);
            for i in 1..=n {
                let x = lo + step * i as f64;
                let v = horner(&coeffs, x);
                if prev_v == 0.0 {
                    roots.push(prev_x);
                } else if prev_v.signum() != v.signum() && v != 0.0 {
                    if let Ok(r) = crate::roots::brent(|t| horner(&coeffs, t), prev_x, x, 1e-14) {
                        roots.push(r.x);
                    }
                }
                prev_x = x;
                prev_v = v;
            }
            roots
        }
    }
}

/// Open intervals between consecutive poles (whole line when no poles).
fn pole_intervals(poles: &[f64]) -> Vec<(f64, f64)> {
    if poles.is_empty() {
        return vec![(f64::NEG_INFINITY, f64::INFINITY)];
    }
    let mut intervals = Vec::with_capacity(poles.len() + 1);
    // Bounded gaps first, then the unbounded tails: bounded wells are the
    // interesting candidates when no hint disambiguates.
    for w in poles.windows(2) {
        intervals.push((w[0], w[1]));
    }
    intervals.push((*poles.last().unwrap(), f64::INFINITY));
    intervals.push((f64::NEG_INFINITY, poles[0]));
    intervals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    #[test]
    fn rational_eval_matches_direct_formula() {
        // U = (x⁴+1)/x² = x² + 1/x²
        let u = RationalPotential::new(
            Polynomial::from_ints(&[1, 0, 0, 0, 1]),
            Polynomial::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        let p = EvaluablePotential::from_rational(&u, None);
        for x in [0.3, 1.0, 2.5] {
            assert!((p.eval(x) - (x * x + 1.0 / (x * x))).abs() < 1e-12);
            assert!((p.deriv(x) - (2.0 * x - 2.0 / (x * x * x))).abs() < 1e-12);
        }
        // domain picked to the right of the double pole at 0
        assert_eq!(p.domain().0, 0.0);
        assert_eq!(p.domain().1, f64::INFINITY);
    }

    #[test]
    fn hint_selects_pole_interval() {
        let u = RationalPotential::new(
            Polynomial::from_ints(&[1, 0, 0, 0, 1]),
            Polynomial::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        let p = EvaluablePotential::from_rational(&u, Some(-1.0));
        assert_eq!(p.domain(), (f64::NEG_INFINITY, 0.0));
    }

    #[test]
    fn derivatives_are_consistent() {
        let pts_half_line = [0.4, 0.9, 1.7, 3.0];
        let pts_line = [-2.0, -0.5, 0.3, 1.8];
        assert!(EvaluablePotential::quartic().derivative_consistency(&pts_line) < 1e-6);
        assert!(EvaluablePotential::double_well().derivative_consistency(&pts_line) < 1e-6);
        assert!(EvaluablePotential::anharmonic().derivative_consistency(&pts_line) < 1e-6);
        let alg = EvaluablePotential::algebraic_example();
        assert!(alg.derivative_consistency(&[-3.0, -1.0, 0.0, 0.2]) < 1e-6);
        let u = RationalPotential::new(
            Polynomial::from_ints(&[1, 0, 0, 0, 1]),
            Polynomial::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        let p = EvaluablePotential::from_rational(&u, None);
        assert!(p.derivative_consistency(&pts_half_line) < 1e-6);
    }

    #[test]
    fn algebraic_example_satisfies_its_curve() {
        // (y + x)² = y along the branch
        let p = EvaluablePotential::algebraic_example();
        for x in [-2.0, -0.5, 0.0, 0.1, 0.24] {
            let y = p.eval(x);
            assert!(((y + x) * (y + x) - y).abs() < 1e-12, "x = {}", x);
        }
        assert_eq!(p.eval(0.0), 0.0);
    }

    #[test]
    fn double_well_scan_finds_both_minima() {
        let brackets = EvaluablePotential::double_well().scan_minima();
        assert_eq!(brackets.len(), 2);
        assert!(brackets[0].0 <= -1.0 && -1.0 <= brackets[0].1);
        assert!(brackets[1].0 <= 1.0 && 1.0 <= brackets[1].1);
    }
}
