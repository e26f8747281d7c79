//! Exact univariate polynomials over the rationals.
//!
//! Dense ascending-coefficient representation; degrees in this crate stay
//! small (≤ ~16), so no sparse machinery. The zero polynomial has an empty
//! coefficient vector and `degree() == None` — there is no `-1` arithmetic.

use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("exact division left a nonzero remainder")]
    NonExactDivision,
    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Univariate polynomial with exact rational coefficients, ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial::new(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero when above the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c.clone();
        }
        acc
    }

    /// Coefficients converted once to `f64`, for numeric Horner evaluation.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Rational::to_f64).collect()
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Rational::from_int(i as i64) * c.clone())
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Leading coefficient scaled to 1; zero polynomial is returned unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(lc) if !lc.is_zero() => {
                let inv = lc.recip().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        let d_deg = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let d_lc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d_deg)];
        while rem.len() > d_deg {
            let r_deg = rem.len() - 1;
            let factor = &rem[r_deg] / &d_lc;
            let shift = r_deg - d_deg;
            if !factor.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    let sub = dc * &factor;
                    rem[shift + i] -= sub;
                }
                quot[shift] = factor;
            }
            rem.pop();
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Division that must be exact; a nonzero remainder is an error.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NonExactDivision)
        }
    }

    /// Monic greatest common divisor; `gcd(a, 0)` is `monic(a)`.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::UndefinedGcd);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Taylor shift: returns `p(x + s)`, computed exactly by synthetic division.
    pub fn shift(&self, s: &Rational) -> Polynomial {
        if self.coeffs.len() <= 1 || s.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len() - 1;
        let mut a = self.coeffs.clone();
        for i in 0..n {
            for j in (i..n).rev() {
                let add = s * &a[j + 1];
                a[j] += add;
            }
        }
        Polynomial::new(a)
    }

    /// Exact square root with positive leading coefficient, if one exists.
    ///
    /// Checks the necessary conditions first (even degree, square leading
    /// coefficient), then recovers candidate coefficients top-down and
    /// verifies the full product.
    pub fn sqrt_exact(&self) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let deg = self.degree().unwrap();
        if deg % 2 != 0 {
            return None;
        }
        let half = deg / 2;
        let lc_sqrt = self.leading_coeff().unwrap().sqrt_exact()?;
        if lc_sqrt.is_zero() {
            return None;
        }
        let mut r = vec![Rational::zero(); half + 1];
        r[half] = lc_sqrt;
        let two_lc = Rational::from_int(2) * r[half].clone();
        for k in (0..half).rev() {
            // Match the coefficient of x^(half+k):
            //   p[half+k] = 2·r[half]·r[k] + Σ_{i+j=half+k, k<i,j<half} r_i·r_j
            let mut cross = Rational::zero();
            let mut i = k + 1;
            while i < half {
                let j = half + k - i;
                if j <= i {
                    break;
                }
                cross += Rational::from_int(2) * &r[i] * &r[j];
                i += 1;
            }
            if (half + k) % 2 == 0 {
                let mid = (half + k) / 2;
                if mid > k && mid < half {
                    cross += &r[mid] * &r[mid];
                }
            }
            r[k] = &(&self.coeff(half + k) - &cross) / &two_lc;
        }
        let candidate = Polynomial::new(r);
        if &candidate * &candidate == *self {
            Some(candidate)
        } else {
            None
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let show_coeff = i == 0 || mag != Rational::one();
            match (show_coeff, i) {
                (true, 0) => write!(f, "{}", mag)?,
                (true, 1) => write!(f, "{}*x", mag)?,
                (true, _) => write!(f, "{}*x^{}", mag, i)?,
                (false, 1) => write!(f, "x")?,
                (false, _) => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_ints(coeffs)
    }

    #[test]
    fn derivative_power_rule() {
        // d/dx (x^2 + 3x + 1) = 2x + 3
        assert_eq!(poly(&[1, 3, 1]).derivative(), poly(&[3, 2]));
        assert_eq!(poly(&[5]).derivative(), Polynomial::zero());
        assert_eq!(Polynomial::zero().derivative(), Polynomial::zero());
    }

    #[test]
    fn multiplication_identity() {
        // (x+1)(x-1) = x^2 - 1
        assert_eq!(&poly(&[1, 1]) * &poly(&[-1, 1]), poly(&[-1, 0, 1]));
    }

    #[test]
    fn exact_division_detects_remainder() {
        // (x^2 - 1) / (x + 2) has remainder 3
        assert_eq!(
            poly(&[-1, 0, 1]).exact_div(&poly(&[2, 1])),
            Err(PolyError::NonExactDivision)
        );
        // (x^2 - 1) / (x + 1) = x - 1
        assert_eq!(
            poly(&[-1, 0, 1]).exact_div(&poly(&[1, 1])).unwrap(),
            poly(&[-1, 1])
        );
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2-1, x^2+2x+1) = x+1
        assert_eq!(
            poly(&[-1, 0, 1]).gcd(&poly(&[1, 2, 1])).unwrap(),
            poly(&[1, 1])
        );
        // gcd(x^2, x^3) = x^2
        assert_eq!(
            poly(&[0, 0, 1]).gcd(&poly(&[0, 0, 0, 1])).unwrap(),
            poly(&[0, 0, 1])
        );
        // coprime inputs
        assert_eq!(poly(&[1, 1]).gcd(&poly(&[2, 1])).unwrap(), poly(&[1]));
        // gcd(a, 0) = monic(a)
        assert_eq!(
            poly(&[0, 2]).gcd(&Polynomial::zero()).unwrap(),
            poly(&[0, 1])
        );
        assert_eq!(
            Polynomial::zero().gcd(&Polynomial::zero()),
            Err(PolyError::UndefinedGcd)
        );
    }

    #[test]
    fn taylor_shift_examples() {
        // (x+1)^2 = x^2 + 2x + 1
        assert_eq!(
            poly(&[0, 0, 1]).shift(&Rational::from_int(1)),
            poly(&[1, 2, 1])
        );
        let p = poly(&[3, -2, 0, 5]);
        assert_eq!(p.shift(&Rational::zero()), p);
    }

    #[test]
    fn sqrt_exact_examples() {
        // x^4 + 2x^2 + 1 = (x^2+1)^2
        assert_eq!(
            poly(&[1, 0, 2, 0, 1]).sqrt_exact().unwrap(),
            poly(&[1, 0, 1])
        );
        // 4x^2 + 4x + 1 = (2x+1)^2
        assert_eq!(poly(&[1, 4, 4]).sqrt_exact().unwrap(), poly(&[1, 2]));
        assert_eq!(poly(&[1, 0, 1]).sqrt_exact(), None);
        // sign normalization: (-x-1)^2 has sqrt x+1
        let m = poly(&[-1, -1]);
        assert_eq!((&m * &m).sqrt_exact().unwrap(), poly(&[1, 1]));
    }

    #[test]
    fn eval_is_exact() {
        let p = poly(&[1, -3, 0, 2]); // 2x^3 - 3x + 1
        assert_eq!(p.eval(&Rational::ratio(1, 2)), Rational::ratio(-1, 4));
    }

    fn rational_strategy() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::ratio(n, d))
    }

    fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(rational_strategy(), 0..=max_deg + 1).prop_map(Polynomial::new)
    }

    proptest! {
        #[test]
        fn shift_round_trips(p in poly_strategy(8), s in rational_strategy()) {
            let back = p.shift(&s).shift(&(-&s));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn sqrt_recovers_square(p in poly_strategy(5)) {
            let sq = &p * &p;
            let r = sq.sqrt_exact();
            if p.is_zero() {
                prop_assert_eq!(r, Some(Polynomial::zero()));
            } else {
                // sqrt is sign-normalized to a positive leading coefficient
                let expect = if p.leading_coeff().unwrap().is_negative() { -&p } else { p };
                prop_assert_eq!(r, Some(expect.clone()));
                // odd-degree multiples are never squares
                let odd = &(&expect * &expect) * &Polynomial::from_ints(&[1, 1]);
                prop_assert_eq!(odd.sqrt_exact(), None);
            }
        }

        #[test]
        fn gcd_divides_both(a in poly_strategy(6), b in poly_strategy(6)) {
            if !(a.is_zero() && b.is_zero()) {
                let g = a.gcd(&b).unwrap();
                if !a.is_zero() {
                    prop_assert!(a.exact_div(&g).is_ok());
                }
                if !b.is_zero() {
                    prop_assert!(b.exact_div(&g).is_ok());
                }
            }
        }

        #[test]
        fn derivative_is_linear(a in poly_strategy(7), b in poly_strategy(7)) {
            let lhs = (&a + &b).derivative();
            let rhs = &a.derivative() + &b.derivative();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
