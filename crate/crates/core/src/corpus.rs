//! Seeded corpus generation and the classifier-vs-quadrature cross check.
//!
//! Three strata in ratio 1:1:2 — exact canonical-family members, family
//! members with a small odd perturbation, and fully random rational
//! potentials — so both verdict polarities are exercised on every run. A row
//! agrees when the exact verdict and the measured period spread point the
//! same way; a passing corpus has zero disagreements.

use crate::classify::{classify, reconstruct, Classification};
use crate::io::PotentialSpec;
use crate::period::{find_well, isochronicity_scan, PeriodError};
use crate::poly::Polynomial;
use crate::rational::Rational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

/// Spread at or below this is numerically isochronous; the quadrature is
/// three orders tighter, so the margin absorbs scan-range variation.
pub const SPREAD_THRESHOLD: f64 = 1e-6;

/// Perturbation coefficient for the perturbed-family stratum (`+x³/1000`).
pub const PERTURBATION: (i64, i64) = (1, 1000);

#[derive(Debug, Clone, Serialize)]
pub struct CorpusRow {
    pub spec: PotentialSpec,
    pub verdict: Classification,
    /// Measured period spread; absent when no well was found.
    pub spread: Option<f64>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRow>,
    pub total: usize,
    pub positive_verdicts: usize,
    pub wells_found: usize,
    /// Indices into `rows` of every disagreement; empty on a passing run.
    pub disagreements: Vec<usize>,
}

fn pick<'a, T>(rng: &mut StdRng, choices: &'a [T]) -> &'a T {
    &choices[rng.random_range(0..choices.len())]
}

fn rational_grid() -> (Vec<Rational>, Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let omega_sq = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (4, 1), (9, 2), (8, 1), (9, 1)]
        .map(|(n, d)| Rational::ratio(n, d))
        .to_vec();
    let c_sq = [(1, 4), (1, 2), (1, 1), (2, 1), (4, 1), (7, 1)]
        .map(|(n, d)| Rational::ratio(n, d))
        .to_vec();
    let shift = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (3, 2), (2, 1)]
        .map(|(n, d)| Rational::ratio(n, d))
        .to_vec();
    let offset = [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1), (5, 1)]
        .map(|(n, d)| Rational::ratio(n, d))
        .to_vec();
    (omega_sq, c_sq, shift, offset)
}

/// A random exact canonical-family member (harmonic or singular).
pub fn random_family_member(rng: &mut StdRng) -> Classification {
    let (omega_sq, c_sq, shift, offset) = rational_grid();
    if rng.random_bool(0.4) {
        Classification::Harmonic {
            omega_sq: pick(rng, &omega_sq).clone(),
            shift: pick(rng, &shift).clone(),
            offset: pick(rng, &offset).clone(),
        }
    } else {
        Classification::SingularIsochronous {
            omega_sq: pick(rng, &omega_sq).clone(),
            c_sq: pick(rng, &c_sq).clone(),
            shift: pick(rng, &shift).clone(),
            offset: pick(rng, &offset).clone(),
        }
    }
}

fn random_coeff(rng: &mut StdRng) -> Rational {
    Rational::ratio(rng.random_range(-6..=6), rng.random_range(1..=4))
}

/// A random rational potential outside the canonical families.
///
/// Shapes: polynomial over 1 with degree ≥ 3 (cannot be harmonic), or a
/// degree-≤-4 numerator over a rational double pole with a forced nonzero
/// odd shifted coefficient (cannot be the singular form).
pub fn random_outsider(rng: &mut StdRng, max_deg: usize) -> PotentialSpec {
    let max_deg = max_deg.clamp(3, 8);
    if rng.random_bool(0.5) {
        // polynomial: even degree with positive leading term has a well
        let deg = *pick(rng, &[3usize, 4, 4, 5, 6]);
        let deg = deg.min(max_deg);
        let mut coeffs: Vec<Rational> = (0..deg).map(|_| random_coeff(rng)).collect();
        let lead = Rational::ratio(rng.random_range(1..=3), rng.random_range(1..=2));
        coeffs.push(lead);
        PotentialSpec::rational(Polynomial::new(coeffs), Polynomial::one())
    } else {
        // p(x) / (x−s)²: force the shifted x³ or x¹ coefficient nonzero so
        // the singular canonical shape is impossible
        let s = Rational::ratio(rng.random_range(-2..=2), rng.random_range(1..=2));
        let mut shifted: Vec<Rational> = (0..5).map(|_| random_coeff(rng)).collect();
        if shifted[1].is_zero() && shifted[3].is_zero() {
            shifted[3] = Rational::ratio(rng.random_range(1..=3), 1);
        }
        // keep a positive value at the pole so the pole confines a well
        if !shifted[0].is_positive() {
            shifted[0] = Rational::ratio(rng.random_range(1..=4), rng.random_range(1..=2));
        }
        if !shifted[4].is_positive() {
            shifted[4] = Rational::ratio(rng.random_range(1..=2), 1);
        }
        let p = Polynomial::new(shifted).shift(&-&s);
        let linear = Polynomial::new(vec![-&s, Rational::one()]);
        PotentialSpec::rational(p, &linear * &linear)
    }
}

/// One generated corpus entry.
pub fn generate_spec(rng: &mut StdRng, index: usize, max_deg: usize) -> PotentialSpec {
    match index % 4 {
        0 => {
            let member = random_family_member(rng);
            let u = reconstruct(&member).expect("family members reconstruct");
            PotentialSpec::rational(u.numerator().clone(), u.denominator().clone())
        }
        1 => {
            let member = random_family_member(rng);
            let u = reconstruct(&member).expect("family members reconstruct");
            let eps = Rational::ratio(PERTURBATION.0, PERTURBATION.1);
            let bump = Polynomial::monomial(eps, 3);
            PotentialSpec::rational(u.numerator() + &bump, u.denominator().clone())
        }
        _ => random_outsider(rng, max_deg),
    }
}

/// Scan range for the numeric oracle: up to four decades above the well
/// floor, capped under any barrier, at least one decade wide.
fn scan_range(u_min: f64, e_max: f64) -> (f64, f64) {
    let mut delta = 0.05f64.max(0.05 * u_min.abs());
    let mut hi = u_min + 1e4 * delta;
    if e_max.is_finite() {
        hi = hi.min(u_min + 0.8 * (e_max - u_min));
        if hi < u_min + 10.0 * delta {
            delta = (hi - u_min) / 100.0;
        }
    }
    (u_min + delta, hi)
}

/// Runs the numeric oracle on one spec: period spread over the scan range,
/// or `None` when no well can be located.
pub fn numeric_spread(spec: &PotentialSpec) -> Option<f64> {
    let evaluable = spec.to_evaluable(None).ok()?;
    let well = match find_well(&evaluable) {
        Ok(w) => w,
        Err(_) => return None,
    };
    let (lo, hi) = scan_range(well.u_min, well.e_max);
    match isochronicity_scan(&evaluable, &well, lo, hi, 14) {
        Ok(scan) => Some(scan.max_rel_period_spread),
        Err(PeriodError::EnergyOutOfRange { .. }) => None,
        Err(_) => Some(f64::INFINITY),
    }
}

fn row_agrees(verdict: &Classification, spread: Option<f64>) -> bool {
    match (verdict.is_positive(), spread) {
        (true, Some(s)) => s <= SPREAD_THRESHOLD,
        (true, None) => false,
        (false, Some(s)) => s > SPREAD_THRESHOLD,
        (false, None) => true,
    }
}

/// Generates `count` potentials from `seed` and cross-validates the exact
/// classifier against the quadrature oracle on every one of them.
pub fn cross_validate(count: usize, seed: u64, max_deg: usize) -> CorpusReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut specs: Vec<PotentialSpec> = (0..count)
        .map(|i| generate_spec(&mut rng, i, max_deg))
        .collect();
    // order-stable report: rows sorted by content hash
    specs.sort_by_key(|s| s.hash());

    let rows: Vec<CorpusRow> = std::thread::scope(|scope| {
        let workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(4)
            .min(specs.len().max(1));
        let chunk = specs.len().div_ceil(workers);
        let handles: Vec<_> = specs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|spec| {
                            let (rp, _) = spec.to_rational().expect("corpus specs are rational");
                            let verdict = classify(&rp);
                            let spread = numeric_spread(spec);
                            let agree = row_agrees(&verdict, spread);
                            CorpusRow {
                                spec: spec.clone(),
                                verdict,
                                spread,
                                agree,
                            }
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    });

    let positive_verdicts = rows.iter().filter(|r| r.verdict.is_positive()).count();
    let wells_found = rows.iter().filter(|r| r.spread.is_some()).count();
    let disagreements = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.agree)
        .map(|(i, _)| i)
        .collect();
    CorpusReport {
        total: rows.len(),
        positive_verdicts,
        wells_found,
        disagreements,
        rows,
    }
}

/// Single-potential oracle comparison, exposed for targeted tests.
pub fn validate_spec(spec: &PotentialSpec) -> CorpusRow {
    let (rp, _) = spec.to_rational().expect("rational spec");
    let verdict = classify(&rp);
    let spread = numeric_spread(spec);
    let agree = row_agrees(&verdict, spread);
    CorpusRow {
        spec: spec.clone(),
        verdict,
        spread,
        agree,
    }
}

/// Re-exported for deterministic corpus draws in tests and the CLI.
pub fn corpus_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
