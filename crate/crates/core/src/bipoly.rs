//! Minimal exact bivariate polynomials in `(x, z)`.
//!
//! Only what the functional-equation identity check needs: embedding
//! univariate polynomials, the substitution `x -> x + c·z`, multiplication
//! by `z`, ring operations, and exact equality. No factorization.

use crate::poly::Polynomial;
use crate::rational::Rational;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Exact polynomial in two variables, keyed by `(degree_x, degree_z)`.
///
/// Zero coefficients are never stored, so map equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.terms.iter()
    }

    fn insert(&mut self, key: (usize, usize), value: Rational) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Embeds a univariate polynomial in `x`.
    pub fn from_poly_in_x(p: &Polynomial) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.insert((i, 0), c.clone());
        }
        out
    }

    /// Expands `p(x + c·z)` for a univariate `p`, via the binomial theorem.
    pub fn compose_x_plus_cz(p: &Polynomial, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // (x + c·z)^i = Σ_k C(i,k) x^(i-k) (c·z)^k
            let mut binom = Rational::one();
            let mut c_pow = Rational::one();
            for k in 0..=i {
                out.insert((i - k, k), a * &(&binom * &c_pow));
                if k < i {
                    binom = &(&binom * &Rational::from_int((i - k) as i64))
                        / &Rational::from_int((k + 1) as i64);
                    c_pow = &c_pow * c;
                }
            }
        }
        out
    }

    /// Multiplies by `z`, shifting every `z`-degree up by one.
    pub fn mul_z(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(dx, dz), c)| ((dx, dz + 1), c.clone()))
            .collect();
        BivariatePolynomial { terms }
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (key, value) in &rhs.terms {
            out.insert(*key, value.clone());
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (key, value) in &rhs.terms {
            out.insert(*key, -value);
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c)).collect();
        BivariatePolynomial { terms }
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dx, dz), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if dx > 0 {
                write!(f, "*x^{}", dx)?;
            }
            if dz > 0 {
                write!(f, "*z^{}", dz)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_expands_binomially() {
        // x^2 composed as (x+2z)^2 = x^2 + 4xz + 4z^2
        let p = Polynomial::from_ints(&[0, 0, 1]);
        let g = BivariatePolynomial::compose_x_plus_cz(&p, &Rational::from_int(2));
        let expect: Vec<((usize, usize), Rational)> = vec![
            ((0, 2), Rational::from_int(4)),
            ((1, 1), Rational::from_int(4)),
            ((2, 0), Rational::from_int(1)),
        ];
        let got: Vec<_> = g.terms().map(|(k, c)| (*k, c.clone())).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn embedding_and_subtraction_cancel() {
        let p = Polynomial::from_ints(&[3, -1, 5]);
        let a = BivariatePolynomial::from_poly_in_x(&p);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn mul_z_shifts_degrees() {
        let p = Polynomial::from_ints(&[1, 1]);
        let a = BivariatePolynomial::from_poly_in_x(&p).mul_z();
        let got: Vec<_> = a.terms().map(|(k, c)| (*k, c.clone())).collect();
        assert_eq!(
            got,
            vec![
                ((0, 1), Rational::one()),
                ((1, 1), Rational::one()),
            ]
        );
    }
}
