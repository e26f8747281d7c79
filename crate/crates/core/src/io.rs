//! Input/output contracts shared by the CLI and the corpus harness:
//! the potential-spec JSON format and fixed-width float text.

use crate::classify::{PotentialError, RationalPotential};
use crate::poly::Polynomial;
use crate::potential::EvaluablePotential;
use serde::{Deserialize, Serialize};

/// A potential as it crosses the tool boundary.
///
/// Rational potentials carry exact coefficients (arrays of rational strings,
/// ascending degree); built-ins are named test potentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    Rational { num: Polynomial, den: Polynomial },
    Builtin { name: String },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("unknown builtin potential {0:?} (expected algebraic_example, double_well, quartic or anharmonic)")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("builtin potentials have no exact rational form")]
    UnsupportedForExactClassification,
}

impl PotentialSpec {
    pub fn rational(num: Polynomial, den: Polynomial) -> Self {
        PotentialSpec::Rational { num, den }
    }

    pub fn builtin(name: &str) -> Self {
        PotentialSpec::Builtin { name: name.into() }
    }

    /// The exact rational potential, reduced to lowest terms.
    ///
    /// Returns the reduction flag so callers can report a nontrivial
    /// reduction; built-ins are refused.
    pub fn to_rational(&self) -> Result<(RationalPotential, bool), SpecError> {
        match self {
            PotentialSpec::Rational { num, den } => {
                Ok(RationalPotential::reduced(num.clone(), den.clone())?)
            }
            PotentialSpec::Builtin { .. } => Err(SpecError::UnsupportedForExactClassification),
        }
    }

    /// The numeric view, for the quadrature and trajectory oracles.
    pub fn to_evaluable(&self, hint: Option<f64>) -> Result<EvaluablePotential, SpecError> {
        match self {
            PotentialSpec::Rational { .. } => {
                let (rp, _) = self.to_rational()?;
                Ok(EvaluablePotential::from_rational(&rp, hint))
            }
            PotentialSpec::Builtin { name } => {
                let p = EvaluablePotential::by_name(name)
                    .ok_or_else(|| SpecError::UnknownBuiltin(name.clone()))?;
                Ok(match hint {
                    Some(h) => p.with_hint(h),
                    None => p,
                })
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            PotentialSpec::Rational { num, den } => format!("({}) / ({})", num, den),
            PotentialSpec::Builtin { name } => name.clone(),
        }
    }

    /// Stable content hash used to order corpus report rows.
    pub fn hash(&self) -> u64 {
        let json = serde_json::to_string(self).expect("spec serializes");
        fnv1a(json.as_bytes())
    }
}

/// FNV-1a: tiny, stable across platforms and runs.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Fixed 17-significant-digit decimal, the float text format of every CSV
/// emitted by this crate. Deterministic and round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        (if x > 0.0 { "inf" } else { "-inf" }).to_string()
    } else {
        format!("{:.16e}", x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_round_trip() {
        let spec = PotentialSpec::rational(
            Polynomial::from_ints(&[1, 0, 0, 0, 1]),
            Polynomial::from_ints(&[0, 0, 1]),
        );
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"rational","num":["1","0","0","0","1"],"den":["0","0","1"]}"#
        );
        let back: PotentialSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);

        let b = PotentialSpec::builtin("quartic");
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, r#"{"kind":"builtin","name":"quartic"}"#);
    }

    #[test]
    fn rational_specs_reduce_on_load() {
        let spec = PotentialSpec::rational(
            Polynomial::from_ints(&[0, 0, 0, 0, 1]),
            Polynomial::from_ints(&[0, 0, 1]),
        );
        let (rp, reduced) = spec.to_rational().unwrap();
        assert!(reduced);
        assert_eq!(rp.numerator(), &Polynomial::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn builtins_resolve_and_refuse_exact_classification() {
        let spec = PotentialSpec::builtin("double_well");
        assert!(spec.to_evaluable(None).is_ok());
        assert_eq!(
            spec.to_rational(),
            Err(SpecError::UnsupportedForExactClassification)
        );
        let bad = PotentialSpec::builtin("nonexistent");
        assert!(matches!(
            bad.to_evaluable(None),
            Err(SpecError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn float_format_is_17_digits() {
        assert_eq!(fmt_f64(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        // round trip
        let x = 0.1 + 0.2;
        let s = fmt_f64(x);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn spec_hash_is_stable() {
        let spec = PotentialSpec::builtin("quartic");
        assert_eq!(spec.hash(), spec.hash());
        let other = PotentialSpec::builtin("anharmonic");
        assert_ne!(spec.hash(), other.hash());
    }
}
