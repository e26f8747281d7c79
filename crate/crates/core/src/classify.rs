//! Exact decision procedure for rational isochronous potentials.
//!
//! A reduced rational potential `U = p/q` is either a shifted harmonic well
//! `½·ω²·(x−s)² + k`, a shifted singular well `⅛·ω²·(x−s)² + c²/(x−s)² + k`,
//! or not isochronous at all. The classifier pattern-matches those canonical
//! shapes exactly over the rationals and returns either the canonical
//! parameters or a typed refusal; no floating point is involved anywhere.
//!
//! The same module carries the exact identity checker for the functional
//! equation `α(x+2z) − β(x+2z)·z ≡ α(x) + β(x)·z` whose polynomial solutions
//! (β linear, α quadratic) generate exactly the canonical shapes via
//! `U = α²/β²`, which keeps the classifier testable against that route.

use crate::bipoly::BivariatePolynomial;
use crate::poly::Polynomial;
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PotentialError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("numerator and denominator share the factor {common}")]
    NotInLowestTerms { common: Polynomial },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReconstructError {
    #[error("cannot reconstruct a potential from a negative verdict")]
    NotReconstructible,
    #[error("verdict parameters violate positivity requirements")]
    InvalidParameters,
}

/// A rational potential `U(x) = p(x)/q(x)` in lowest terms with monic `q`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPotential {
    num: Polynomial,
    den: Polynomial,
}

impl RationalPotential {
    /// Builds a potential, rejecting inputs that are not in lowest terms.
    ///
    /// The denominator is made monic (the scale factor moves into the
    /// numerator); that normalization is silent because it does not change
    /// the function.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PotentialError> {
        if den.is_zero() {
            return Err(PotentialError::ZeroDenominator);
        }
        let g = num.gcd(&den).expect("den is nonzero");
        if g.degree() != Some(0) && !num.is_zero() {
            return Err(PotentialError::NotInLowestTerms { common: g });
        }
        Ok(Self::normalized(num, den))
    }

    /// Builds a potential, reducing to lowest terms if needed.
    ///
    /// Returns the potential together with a flag reporting whether a
    /// nontrivial reduction was performed.
    pub fn reduced(num: Polynomial, den: Polynomial) -> Result<(Self, bool), PotentialError> {
        if den.is_zero() {
            return Err(PotentialError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok((Self::normalized(num, den), false));
        }
        let g = num.gcd(&den).expect("den is nonzero");
        if g.degree() == Some(0) {
            return Ok((Self::normalized(num, den), false));
        }
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        Ok((Self::normalized(num, den), true))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading_coeff().expect("den is nonzero").clone();
        let inv = lc.recip().expect("leading coefficient is nonzero");
        RationalPotential {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Applies the substitution `x -> x + s` to both parts.
    pub fn shift(&self, s: &Rational) -> Self {
        RationalPotential {
            num: self.num.shift(s),
            den: self.den.shift(s),
        }
    }

    /// Adds a rational constant: `U + k = (p + k·q)/q`.
    pub fn add_constant(&self, k: &Rational) -> Self {
        RationalPotential {
            num: &self.num + &self.den.scale(k),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Why a rational potential fails to be isochronous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefusalReason {
    /// `deg q ≥ 3`: no canonical shape has a pole of that order.
    DenominatorDegree,
    /// `q` of degree 1 or 2 is not the exact square of a rational linear.
    DenominatorNotPerfectSquareOfLinear,
    /// Numerator degree is incompatible with the canonical shapes.
    NumeratorDegree,
    /// After shifting to the pole, the numerator has a nonzero odd coefficient.
    OddShiftedCoefficients,
    /// The quadratic/quartic leading term is not positive (no confining well).
    NonPositiveLeadingTerm,
    /// `c² ≤ 0`. `c² = 0` cannot occur in lowest terms (the pole factor
    /// would cancel), so in practice this marks `c² < 0`: no bounded well
    /// adjacent to the pole.
    NonPositiveCSquared,
}

/// Verdict of the exact decision procedure.
///
/// Positive verdicts carry exact canonical parameters; `omega_sq` relates to
/// the oscillation period by `T = 2π/√omega_sq` in both variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Classification {
    /// `U(x) = ½·omega_sq·(x−shift)² + offset`
    Harmonic {
        omega_sq: Rational,
        shift: Rational,
        offset: Rational,
    },
    /// `U(x) = ⅛·omega_sq·(x−shift)² + c_sq/(x−shift)² + offset`
    #[serde(rename = "singular")]
    SingularIsochronous {
        omega_sq: Rational,
        c_sq: Rational,
        shift: Rational,
        offset: Rational,
    },
    NotIsochronous { reason: RefusalReason },
}

impl Classification {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Classification::NotIsochronous { .. })
    }

    pub fn omega_sq(&self) -> Option<&Rational> {
        match self {
            Classification::Harmonic { omega_sq, .. }
            | Classification::SingularIsochronous { omega_sq, .. } => Some(omega_sq),
            Classification::NotIsochronous { .. } => None,
        }
    }
}

/// Decides whether `u` is isochronous and extracts exact canonical data.
///
/// This is a total function: every input gets a verdict, and refusals carry
/// an enumerated reason rather than free text.
pub fn classify(u: &RationalPotential) -> Classification {
    let two = Rational::from_int(2);
    match u.den.degree().expect("denominator nonzero") {
        0 => {
            // den is monic of degree 0, so it is exactly 1 and U = p.
            if u.num.degree() != Some(2) {
                return refuse(RefusalReason::NumeratorDegree);
            }
            let a = u.num.coeff(2);
            if !a.is_positive() {
                return refuse(RefusalReason::NonPositiveLeadingTerm);
            }
            // Vertex of A·x² + b·x + c sits at -b/(2A).
            let shift = -&(&u.num.coeff(1) / &(&two * &a));
            let offset = u.num.eval(&shift);
            Classification::Harmonic {
                omega_sq: &two * &a,
                shift,
                offset,
            }
        }
        1 | 2 => {
            let root = match u.den.sqrt_exact() {
                // deg q = 1 is never a square; deg q = 2 must be (x−s)².
                Some(linear) if linear.degree() == Some(1) => -&linear.coeff(0),
                _ => return refuse(RefusalReason::DenominatorNotPerfectSquareOfLinear),
            };
            let shifted = u.num.shift(&root);
            if shifted.degree() > Some(4) {
                return refuse(RefusalReason::NumeratorDegree);
            }
            if !shifted.coeff(1).is_zero() || !shifted.coeff(3).is_zero() {
                return refuse(RefusalReason::OddShiftedCoefficients);
            }
            let a = shifted.coeff(4);
            if !a.is_positive() {
                return refuse(RefusalReason::NonPositiveLeadingTerm);
            }
            let b = shifted.coeff(0);
            if !b.is_positive() {
                return refuse(RefusalReason::NonPositiveCSquared);
            }
            Classification::SingularIsochronous {
                omega_sq: Rational::from_int(8) * a,
                c_sq: b,
                shift: root,
                offset: shifted.coeff(2),
            }
        }
        _ => refuse(RefusalReason::DenominatorDegree),
    }
}

fn refuse(reason: RefusalReason) -> Classification {
    Classification::NotIsochronous { reason }
}

/// Rebuilds the exact potential from a positive verdict.
///
/// Inverse of [`classify`] on positive verdicts: the result is in lowest
/// terms and classifies back to the same parameters.
pub fn reconstruct(c: &Classification) -> Result<RationalPotential, ReconstructError> {
    match c {
        Classification::Harmonic {
            omega_sq,
            shift,
            offset,
        } => {
            if !omega_sq.is_positive() {
                return Err(ReconstructError::InvalidParameters);
            }
            let x_minus_s = Polynomial::new(vec![-shift, Rational::one()]);
            let sq = &x_minus_s * &x_minus_s;
            let num = &sq.scale(&(omega_sq / &Rational::from_int(2)))
                + &Polynomial::constant(offset.clone());
            Ok(RationalPotential::new(num, Polynomial::one()).expect("lowest terms"))
        }
        Classification::SingularIsochronous {
            omega_sq,
            c_sq,
            shift,
            offset,
        } => {
            if !omega_sq.is_positive() || !c_sq.is_positive() {
                return Err(ReconstructError::InvalidParameters);
            }
            let x_minus_s = Polynomial::new(vec![-shift, Rational::one()]);
            let sq = &x_minus_s * &x_minus_s;
            let quartic = &sq * &sq;
            let num = &(&quartic.scale(&(omega_sq / &Rational::from_int(8))) + &sq.scale(offset))
                + &Polynomial::constant(c_sq.clone());
            // num(shift) = c² ≠ 0, so num shares no factor with (x−s)².
            Ok(RationalPotential::new(num, sq).expect("lowest terms"))
        }
        Classification::NotIsochronous { .. } => Err(ReconstructError::NotReconstructible),
    }
}

/// Exact outcome of testing `α(x+2z) − β(x+2z)·z ≡ α(x) + β(x)·z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalEquationWitness {
    pub alpha: Polynomial,
    pub beta: Polynomial,
    /// True exactly when `residual` is the zero bivariate polynomial.
    pub holds: bool,
    /// Left side minus right side, as an exact bivariate polynomial.
    pub residual: BivariatePolynomial,
}

/// Builds both sides of the functional equation and compares them exactly.
pub fn check_functional_equation(
    alpha: &Polynomial,
    beta: &Polynomial,
) -> FunctionalEquationWitness {
    let two = Rational::from_int(2);
    let lhs = &BivariatePolynomial::compose_x_plus_cz(alpha, &two)
        - &BivariatePolynomial::compose_x_plus_cz(beta, &two).mul_z();
    let rhs = &BivariatePolynomial::from_poly_in_x(alpha)
        + &BivariatePolynomial::from_poly_in_x(beta).mul_z();
    let residual = &lhs - &rhs;
    FunctionalEquationWitness {
        alpha: alpha.clone(),
        beta: beta.clone(),
        holds: residual.is_zero(),
        residual,
    }
}

/// The full solution family of the functional equation:
/// `β(x) = C·x + C₁` and `α(x) = ½·C·x² + C₁·x + C₀`.
pub fn solve_functional_equation_family(
    c: &Rational,
    c1: &Rational,
    c0: &Rational,
) -> (Polynomial, Polynomial) {
    let alpha = Polynomial::new(vec![
        c0.clone(),
        c1.clone(),
        c / &Rational::from_int(2),
    ]);
    let beta = Polynomial::new(vec![c1.clone(), c.clone()]);
    (alpha, beta)
}

/// The exact `U − k₀ = α̃²/β̃²` representation behind a positive verdict.
///
/// For `Harmonic{ω², s, k}` this is `α̃ = √(ω²/2)·(x−s)`, `β̃ = 1`, `k₀ = k`;
/// for `SingularIsochronous{ω², c², s, k}` it is `α̃ = √(ω²/8)·(x−s)² + √(c²)`,
/// `β̃ = x−s`, `k₀ = k − 2·√(ω²/8 · c²)`. The representation lives over the
/// rationals only when the needed square roots are rational; otherwise it
/// exists over a quadratic extension and `None` is returned here.
pub fn square_representation(
    c: &Classification,
) -> Option<(Polynomial, Polynomial, Rational)> {
    match c {
        Classification::Harmonic {
            omega_sq,
            shift,
            offset,
        } => {
            let lam = (omega_sq / &Rational::from_int(2)).sqrt_exact()?;
            let alpha = Polynomial::new(vec![-&(&lam * shift), lam]);
            Some((alpha, Polynomial::one(), offset.clone()))
        }
        Classification::SingularIsochronous {
            omega_sq,
            c_sq,
            shift,
            offset,
        } => {
            let a_sqrt = (omega_sq / &Rational::from_int(8)).sqrt_exact()?;
            let b_sqrt = c_sq.sqrt_exact()?;
            let beta = Polynomial::new(vec![-shift, Rational::one()]);
            let alpha = &(&beta * &beta).scale(&a_sqrt) + &Polynomial::constant(b_sqrt.clone());
            let k0 = offset - &(&Rational::from_int(2) * &(&a_sqrt * &b_sqrt));
            Some((alpha, beta, k0))
        }
        Classification::NotIsochronous { .. } => None,
    }
}
