//! Spectra of `L = −d²/dx² + A·x² + B/x²` on the half-line, two ways:
//! finite differences with Sturm bisection (trusted for `B ≥ 0`) and a
//! Prüfer-phase shooting method that also handles `−1/4 < B < 0`.
//!
//! For `−1/4 < B < 0` the boundary condition at the origin is fixed by
//! selecting the `x^κ` behavior with `κ = ½(1 + √(1+4B))` — the Friedrichs
//! choice, which continuously matches the `B ≥ 0` family.

use crate::ode::{self, OdeOptions};
use crate::roots::brent;
use crate::tridiag;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("parameters out of range: {0}")]
    ParameterRange(String),
    #[error("finite differences require B ≥ 0 (got {b}); use shooting")]
    NegativeBNeedsShooting { b: f64 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("domain cutoff too small: u(x_max) = {u_at_cutoff:.3} vs top eigenvalue {top:.3}")]
    DomainTooSmall { u_at_cutoff: f64, top: f64 },
    #[error("asymptotic cutoff too large: √A·x_max² = {0:.1} exceeds the decay scale f64 can represent")]
    AsymptoticCutoffTooLarge(f64),
    #[error("could not bracket eigenvalue {index} (scanned up to E = {e_max:.3})")]
    MatchingFailure { index: usize, e_max: f64 },
}

/// `u(x) = A·x² + B/x²` with `A > 0` and `B > −1/4`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuantumPotential {
    a: f64,
    b: f64,
}

impl QuantumPotential {
    pub fn new(a: f64, b: f64) -> Result<Self, QuantumError> {
        if !(a > 0.0) {
            return Err(QuantumError::ParameterRange(format!(
                "A must be positive, got {a}"
            )));
        }
        if !(b > -0.25) {
            return Err(QuantumError::ParameterRange(format!(
                "B must be greater than -1/4, got {b}"
            )));
        }
        Ok(QuantumPotential { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.a * x * x + self.b / (x * x)
    }

    /// Indicial exponent of the regular solution at the origin.
    pub fn kappa(&self) -> f64 {
        0.5 * (1.0 + (1.0 + 4.0 * self.b).sqrt())
    }
}

/// How a spectrum was computed; carried for report grouping and ladders.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Discretization {
    FiniteDifference {
        n_points: usize,
        x_max: f64,
        x_lo: f64,
    },
    Shooting {
        x_max: f64,
        tol: f64,
    },
}

/// The lowest part of a spectrum with its gap statistics.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub label: String,
    pub eigenvalues: Vec<f64>,
    pub gaps: Vec<f64>,
    /// `max_k |gap_k − mean gap| / mean gap`.
    pub max_gap_deviation: f64,
    pub discretization: Discretization,
}

impl SpectrumResult {
    fn from_eigenvalues(label: String, eigenvalues: Vec<f64>, d: Discretization) -> Self {
        let gaps: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;
        let max_gap_deviation = gaps
            .iter()
            .map(|g| (g - mean).abs() / mean)
            .fold(0.0, f64::max);
        SpectrumResult {
            label,
            eigenvalues,
            gaps,
            max_gap_deviation,
            discretization: d,
        }
    }

    pub fn mean_gap(&self) -> f64 {
        self.gaps.iter().sum::<f64>() / self.gaps.len().max(1) as f64
    }
}

/// Lowest `m` eigenvalues by symmetric second-order finite differences on a
/// uniform grid over `(0, x_max]` with Dirichlet ends, eigenvalues by Sturm
/// bisection. `B ≥ 0` only: the Dirichlet wall at the first grid point is
/// not a faithful boundary condition for an attractive inverse-square tail.
pub fn spectrum_fd(
    qp: &QuantumPotential,
    m: usize,
    x_max: f64,
    n_points: usize,
) -> Result<SpectrumResult, QuantumError> {
    if qp.b < 0.0 {
        return Err(QuantumError::NegativeBNeedsShooting { b: qp.b });
    }
    let label = format!("A={},B={}", qp.a, qp.b);
    let qp = *qp;
    spectrum_fd_custom(move |x| qp.eval(x), label, m, x_max, n_points)
}

/// The finite-difference path for an arbitrary confining potential on the
/// half-line (test hook for non-family potentials).
pub fn spectrum_fd_custom<U: Fn(f64) -> f64>(
    u: U,
    label: String,
    m: usize,
    x_max: f64,
    n_points: usize,
) -> Result<SpectrumResult, QuantumError> {
    if m < 2 {
        return Err(QuantumError::ParameterRange(
            "need at least 2 eigenvalues for gap statistics".into(),
        ));
    }
    if m > n_points / 10 {
        return Err(QuantumError::GridTooCoarse(format!(
            "{m} eigenvalues need at least {} grid points",
            m * 10
        )));
    }
    let solve = |n: usize| -> Vec<f64> {
        let h = x_max / n as f64;
        let inv_h2 = 1.0 / (h * h);
        // interior points i·h, i = 1..n−1; ψ(0) = ψ(x_max) = 0
        let diag: Vec<f64> = (1..n).map(|i| 2.0 * inv_h2 + u(i as f64 * h)).collect();
        let off = vec![-inv_h2; n - 2];
        tridiag::lowest_eigenvalues(&diag, &off, m)
    };
    let coarse = solve(n_points);
    let fine = solve(2 * n_points);
    let mean_gap = (fine[m - 1] - fine[0]) / (m - 1) as f64;
    // Richardson consistency: the h² error must be subdominant to the gaps
    for k in 0..m {
        if (coarse[k] - fine[k]).abs() > 0.25 * mean_gap {
            return Err(QuantumError::GridTooCoarse(format!(
                "eigenvalue {k} moves by {:.3e} between n and 2n (mean gap {:.3e})",
                (coarse[k] - fine[k]).abs(),
                mean_gap
            )));
        }
    }
    let top = coarse[m - 1];
    let u_at_cutoff = u(x_max);
    if u_at_cutoff <= 3.0 * top {
        return Err(QuantumError::DomainTooSmall { u_at_cutoff, top });
    }
    Ok(SpectrumResult::from_eigenvalues(
        label,
        coarse,
        Discretization::FiniteDifference {
            n_points,
            x_max,
            x_lo: x_max / n_points as f64,
        },
    ))
}

/// Lowest `m` eigenvalues by two-sided Prüfer-phase shooting.
///
/// The regular solution leaves the origin as `x^κ` (the boundary-condition
/// choice for `B < 0`); the decaying solution leaves `x_max` with the
/// Gaussian-type logarithmic derivative `−√A·x + (E/(2√A) − ½)/x`. Writing
/// `ψ = r sin θ`, `ψ′ = r cos θ` turns both into phase equations, and the
/// mismatch `D(E) = θ_out(x_m) − θ_in(x_m)` is strictly increasing in `E`
/// with eigenvalues exactly at `D = kπ` — the Prüfer index `k` is the node
/// count, which is what orders the eigenvalues.
pub fn spectrum_shooting(
    qp: &QuantumPotential,
    m: usize,
    x_max: f64,
    tol: f64,
) -> Result<SpectrumResult, QuantumError> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(QuantumError::ParameterRange(format!(
            "shooting tolerance {tol:e} outside [1e-12, 1e-6]"
        )));
    }
    let sqrt_a = qp.a.sqrt();
    if sqrt_a * x_max * x_max > 1400.0 {
        return Err(QuantumError::AsymptoticCutoffTooLarge(sqrt_a * x_max * x_max));
    }

    let mut eigenvalues = Vec::with_capacity(m);
    let mut e_lo_prev = f64::MIN_POSITIVE;
    for k in 0..m {
        let target = k as f64 * PI;
        // bracket D(E) = kπ by doubling; D is strictly increasing in E
        let mut e_lo = e_lo_prev;
        let mut d_lo = phase_mismatch(qp, e_lo, x_max, tol) - target;
        if d_lo >= 0.0 {
            // the previous eigenvalue interval already passed kπ; restart low
            e_lo = f64::MIN_POSITIVE;
            d_lo = phase_mismatch(qp, e_lo, x_max, tol) - target;
        }
        let mut e_hi = sqrt_a.max(1.0);
        let mut d_hi = phase_mismatch(qp, e_hi, x_max, tol) - target;
        let mut grow = 0;
        while d_hi < 0.0 {
            e_hi *= 2.0;
            d_hi = phase_mismatch(qp, e_hi, x_max, tol) - target;
            grow += 1;
            if grow > 60 {
                return Err(QuantumError::MatchingFailure {
                    index: k,
                    e_max: e_hi,
                });
            }
        }
        if d_lo >= 0.0 {
            return Err(QuantumError::MatchingFailure {
                index: k,
                e_max: e_hi,
            });
        }
        let root = brent(
            |e| phase_mismatch(qp, e, x_max, tol) - target,
            e_lo,
            e_hi,
            tol,
        )
        .map_err(|_| QuantumError::MatchingFailure {
            index: k,
            e_max: e_hi,
        })?;
        eigenvalues.push(root.x);
        e_lo_prev = root.x * (1.0 + 16.0 * tol);
    }
    Ok(SpectrumResult::from_eigenvalues(
        format!("A={},B={}", qp.a, qp.b),
        eigenvalues,
        Discretization::Shooting { x_max, tol },
    ))
}

/// `D(E) = θ_out(x_match) − θ_in(x_match)` for the Prüfer phases.
fn phase_mismatch(qp: &QuantumPotential, energy: f64, x_max: f64, tol: f64) -> f64 {
    let kappa = qp.kappa();
    // inner cutoff: the next series term of ψ ~ x^κ(1 + a₂x² + …) has
    // a₂ = −E/(4κ+2); choose x₀ with |a₂|x₀² below the boundary budget.
    let boundary_budget = (tol * 1e-2).max(1e-14);
    let x0 = (boundary_budget * (4.0 * kappa + 2.0) / energy.abs().max(1.0))
        .sqrt()
        .min(1e-3);
    let sqrt_a = qp.a.sqrt();
    let x_match = (energy / (2.0 * qp.a))
        .sqrt()
        .clamp(4.0 * x0, 0.5 * x_max);

    let opts = OdeOptions {
        rel_tol: (tol * 1e-2).max(1e-13),
        abs_tol: (tol * 1e-2).max(1e-13),
        ..Default::default()
    };

    // outward phase from the regular solution: tan θ₀ = x₀/κ
    let qp_out = *qp;
    let theta_out = {
        let rhs = move |x: f64, y: &[f64], dy: &mut [f64]| {
            let (s, c) = y[0].sin_cos();
            dy[0] = c * c + (energy - qp_out.eval(x)) * s * s;
        };
        let theta0 = (x0 / kappa).atan();
        ode::integrate(rhs, x0, &[theta0], x_match, &opts)
            .map(|sol| sol.last().y[0])
            .unwrap_or(f64::NAN)
    };

    // inward phase from the decaying asymptotics, integrated in s = x_max − x
    let qp_in = *qp;
    let theta_in = {
        let rhs = move |s: f64, y: &[f64], dy: &mut [f64]| {
            let x = x_max - s;
            let (sn, cs) = y[0].sin_cos();
            dy[0] = -(cs * cs + (energy - qp_in.eval(x)) * sn * sn);
        };
        let lambda = -sqrt_a * x_max + (energy / (2.0 * sqrt_a) - 0.5) / x_max;
        // ψ > 0 decaying, ψ′ < 0: phase in (π/2, π)
        let phi0 = 1.0f64.atan2(lambda).rem_euclid(PI);
        ode::integrate(rhs, 0.0, &[phi0], x_max - x_match, &opts)
            .map(|sol| sol.last().y[0])
            .unwrap_or(f64::NAN)
    };

    theta_out - theta_in
}

/// Gap-statistics trend across a discretization ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationTrend {
    TowardZero,
    NotImproving,
    InsufficientData,
}

/// Per-potential summary in an equidistance report.
#[derive(Debug, Clone, Serialize)]
pub struct EquidistanceMember {
    pub label: String,
    /// Mean gap of the finest (or Richardson-extrapolated) spectrum.
    pub mean_gap: f64,
    /// Gap deviation after Richardson extrapolation across the two finest
    /// grids (or the single best deviation when no ladder exists).
    pub extrapolated_deviation: f64,
    pub ground_state: f64,
    pub trend: DeviationTrend,
    /// Deviation per discretization, in ladder order.
    pub deviations: Vec<f64>,
    /// Set when the extrapolated deviation does not tend to zero.
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistanceReport {
    pub members: Vec<EquidistanceMember>,
    pub flagged_labels: Vec<String>,
}

/// Deviation threshold above which a member is flagged as non-equidistant.
pub const EQUIDISTANCE_FLAG_THRESHOLD: f64 = 1e-3;

/// Aggregates spectra (grouped by label) into per-potential equidistance
/// verdicts with Richardson extrapolation across finite-difference ladders.
pub fn equidistance_report(results: &[SpectrumResult]) -> EquidistanceReport {
    let mut order: Vec<&str> = Vec::new();
    for r in results {
        if !order.contains(&r.label.as_str()) {
            order.push(&r.label);
        }
    }
    let mut members = Vec::new();
    for label in order {
        let mut group: Vec<&SpectrumResult> = results.iter().filter(|r| r.label == label).collect();
        group.sort_by_key(|r| match r.discretization {
            Discretization::FiniteDifference { n_points, .. } => n_points,
            Discretization::Shooting { .. } => usize::MAX,
        });
        let deviations: Vec<f64> = group.iter().map(|r| r.max_gap_deviation).collect();
        let fd_pair: Vec<&&SpectrumResult> = group
            .iter()
            .filter(|r| matches!(r.discretization, Discretization::FiniteDifference { .. }))
            .collect();
        let (eigen, trend) = if fd_pair.len() >= 2 {
            let coarse = fd_pair[fd_pair.len() - 2];
            let fine = fd_pair[fd_pair.len() - 1];
            let (nc, nf) = match (&coarse.discretization, &fine.discretization) {
                (
                    Discretization::FiniteDifference { n_points: nc, .. },
                    Discretization::FiniteDifference { n_points: nf, .. },
                ) => (*nc as f64, *nf as f64),
                _ => unreachable!(),
            };
            // second-order method: λ(h) = λ* + c·h²
            let r2 = (nf / nc) * (nf / nc);
            let eigen: Vec<f64> = coarse
                .eigenvalues
                .iter()
                .zip(&fine.eigenvalues)
                .map(|(lc, lf)| (r2 * lf - lc) / (r2 - 1.0))
                .collect();
            let improving = coarse.max_gap_deviation >= fine.max_gap_deviation
                || fine.max_gap_deviation < EQUIDISTANCE_FLAG_THRESHOLD;
            (
                eigen,
                if improving {
                    DeviationTrend::TowardZero
                } else {
                    DeviationTrend::NotImproving
                },
            )
        } else {
            (
                group.last().unwrap().eigenvalues.clone(),
                DeviationTrend::InsufficientData,
            )
        };
        let gaps: Vec<f64> = eigen.windows(2).map(|w| w[1] - w[0]).collect();
        let mean_gap = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;
        let extrapolated_deviation = gaps
            .iter()
            .map(|g| (g - mean_gap).abs() / mean_gap)
            .fold(0.0, f64::max);
        let flagged = extrapolated_deviation > EQUIDISTANCE_FLAG_THRESHOLD
            || trend == DeviationTrend::NotImproving;
        members.push(EquidistanceMember {
            label: label.to_string(),
            mean_gap,
            extrapolated_deviation,
            ground_state: eigen[0],
            trend,
            deviations,
            flagged,
        });
    }
    let flagged_labels = members
        .iter()
        .filter(|m| m.flagged)
        .map(|m| m.label.clone())
        .collect();
    EquidistanceReport {
        members,
        flagged_labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form oracle `E_n = √A·(4n + 2 + √(1+4B))`, verified against
    /// both solvers before anything relies on it.
    fn oracle(a: f64, b: f64, n: usize) -> f64 {
        a.sqrt() * (4.0 * n as f64 + 2.0 + (1.0 + 4.0 * b).sqrt())
    }

    #[test]
    fn parameter_validation() {
        assert!(QuantumPotential::new(1.0, -0.25).is_err());
        assert!(QuantumPotential::new(0.0, 1.0).is_err());
        assert!(QuantumPotential::new(1.0, -0.1875).is_ok());
    }

    #[test]
    fn fd_matches_oracle_b2() {
        // A = 1, B = 2: eigenvalues 5, 9, 13, 17, 21
        let qp = QuantumPotential::new(1.0, 2.0).unwrap();
        let r = spectrum_fd(&qp, 5, 12.0, 2400).unwrap();
        for (n, ev) in r.eigenvalues.iter().enumerate() {
            let exact = oracle(1.0, 2.0, n);
            assert!(
                (ev - exact).abs() < 5e-3,
                "n = {}: {} vs {}",
                n,
                ev,
                exact
            );
        }
        assert!((r.mean_gap() - 4.0).abs() < 5e-3);
    }

    #[test]
    fn fd_matches_oracle_b0() {
        // A = 1, B = 0: half-line states 3, 7, 11, 15
        let qp = QuantumPotential::new(1.0, 0.0).unwrap();
        let r = spectrum_fd(&qp, 4, 10.0, 2000).unwrap();
        for (n, ev) in r.eigenvalues.iter().enumerate() {
            assert!((ev - oracle(1.0, 0.0, n)).abs() < 5e-3);
        }
    }

    #[test]
    fn fd_second_order_convergence() {
        // doubling the grid shrinks the eigenvalue error ~4×
        let qp = QuantumPotential::new(1.0, 2.0).unwrap();
        let exact = oracle(1.0, 2.0, 0);
        let e1 = (spectrum_fd(&qp, 3, 10.0, 500).unwrap().eigenvalues[0] - exact).abs();
        let e2 = (spectrum_fd(&qp, 3, 10.0, 1000).unwrap().eigenvalues[0] - exact).abs();
        let ratio = e1 / e2;
        assert!((2.5..6.0).contains(&ratio), "convergence ratio {}", ratio);
    }

    #[test]
    fn fd_rejects_negative_b_and_bad_grids() {
        let qp = QuantumPotential::new(1.0, -0.1).unwrap();
        assert!(matches!(
            spectrum_fd(&qp, 3, 10.0, 1000),
            Err(QuantumError::NegativeBNeedsShooting { .. })
        ));
        let qp = QuantumPotential::new(1.0, 2.0).unwrap();
        assert!(matches!(
            spectrum_fd(&qp, 30, 10.0, 200),
            Err(QuantumError::GridTooCoarse(_))
        ));
        // x_max = 4 puts u(x_max) = 16.125 below 3× the 5th eigenvalue
        assert!(matches!(
            spectrum_fd(&qp, 5, 4.0, 2000),
            Err(QuantumError::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn shooting_handles_negative_b() {
        // A = 1, B = −3/16: κ = 3/4, eigenvalues 2.5, 6.5, 10.5
        let qp = QuantumPotential::new(1.0, -0.1875).unwrap();
        assert!((qp.kappa() - 0.75).abs() < 1e-15);
        let r = spectrum_shooting(&qp, 3, 9.0, 1e-9).unwrap();
        for (n, ev) in r.eigenvalues.iter().enumerate() {
            let exact = oracle(1.0, -0.1875, n);
            assert!(
                (ev - exact).abs() < 1e-6,
                "n = {}: {} vs {}",
                n,
                ev,
                exact
            );
        }
        assert!((r.mean_gap() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn shooting_cross_checks_fd() {
        let qp = QuantumPotential::new(1.0, 2.0).unwrap();
        let shoot = spectrum_shooting(&qp, 4, 9.0, 1e-9).unwrap();
        for (n, ev) in shoot.eigenvalues.iter().enumerate() {
            let exact = oracle(1.0, 2.0, n);
            assert!(
                (ev - exact).abs() / exact < 1e-7,
                "n = {}: {} vs {}",
                n,
                ev,
                exact
            );
        }
    }

    #[test]
    fn gap_scaling_with_a() {
        // A = 4 doubles the gap to 8
        let qp = QuantumPotential::new(4.0, 2.0).unwrap();
        let r = spectrum_shooting(&qp, 3, 7.0, 1e-9).unwrap();
        assert!((r.mean_gap() - 8.0).abs() < 1e-5, "gap {}", r.mean_gap());
    }

    #[test]
    fn report_flags_non_family_potential() {
        let qp = QuantumPotential::new(1.0, 2.0).unwrap();
        let ladder = vec![
            spectrum_fd(&qp, 5, 12.0, 1000).unwrap(),
            spectrum_fd(&qp, 5, 12.0, 2000).unwrap(),
        ];
        let quartic = vec![
            spectrum_fd_custom(|x| x * x + x.powi(4), "x^2+x^4".into(), 5, 8.0, 1000).unwrap(),
            spectrum_fd_custom(|x| x * x + x.powi(4), "x^2+x^4".into(), 5, 8.0, 2000).unwrap(),
        ];
        let mut all = ladder;
        all.extend(quartic);
        let report = equidistance_report(&all);
        assert_eq!(report.members.len(), 2);
        let family = &report.members[0];
        assert!(!family.flagged, "family member flagged: {:?}", family);
        assert!((family.mean_gap - 4.0).abs() < 1e-4);
        assert!(family.extrapolated_deviation < 1e-4);
        let odd = &report.members[1];
        assert!(odd.flagged, "perturbed oscillator not flagged: {:?}", odd);
        assert!(odd.extrapolated_deviation > 1e-2);
        assert_eq!(report.flagged_labels, vec!["x^2+x^4".to_string()]);
    }

    #[test]
    fn report_single_result_is_insufficient_data() {
        let qp = QuantumPotential::new(1.0, 0.0).unwrap();
        let single = vec![spectrum_fd(&qp, 3, 10.0, 1500).unwrap()];
        let report = equidistance_report(&single);
        assert_eq!(report.members[0].trend, DeviationTrend::InsufficientData);
    }

    #[test]
    fn ground_state_monotone_in_b() {
        let mut prev = f64::MIN;
        for b in [-0.1875, 0.0, 2.0, 6.0] {
            let qp = QuantumPotential::new(1.0, b).unwrap();
            let r = spectrum_shooting(&qp, 2, 9.0, 1e-9).unwrap();
            assert!(r.eigenvalues[0] > prev, "E0({b}) = {}", r.eigenvalues[0]);
            prev = r.eigenvalues[0];
        }
    }
}
