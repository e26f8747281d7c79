//! The period function `T(E)` by singular quadrature, and the criteria
//! built on it: turning points, the branch-difference test, isochronicity
//! scans over energy decades, and divergence probes at barriers.
//!
//! `T = √2 ∫ dx / √(E − U(x))` between the turning points. The integrand is
//! singular at both ends; the substitution `x(φ) = x₁ + (x₂−x₁)(1+sin φ)/2`
//! over `φ ∈ [−π/2, π/2]` cancels the square-root endpoint singularity at
//! simple turning points, leaving a bounded integrand that ordinary adaptive
//! quadrature handles reliably.

use crate::potential::EvaluablePotential;
use crate::quad;
use crate::roots::{brent, RootError};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Root-refinement tolerance (relative in x).
pub const ROOT_REL_TOL: f64 = 1e-13;
/// Quadrature tolerance (absolute and relative).
pub const QUAD_TOL: f64 = 1e-10;
/// Turning-point residual contract: |U(xᵢ) − E| ≤ 1e−12·max(1, |E|).
pub const TURNING_RESIDUAL_TOL: f64 = 1e-12;
/// Subdivision budget per period integral.
const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeriodError {
    #[error("no single minimum found by scanning; provide a well hint")]
    NoMinimumFound,
    #[error("the located stationary point at x = {x} is not a minimum")]
    NotAMinimum { x: f64 },
    #[error("energy {energy} outside the oscillatory range ({lo}, {hi})")]
    EnergyOutOfRange { energy: f64, lo: f64, hi: f64 },
    #[error("quadrature budget exhausted away from any barrier (E = {energy})")]
    QuadratureBudgetExceeded { energy: f64 },
    #[error("no barrier: the well supports oscillation at every energy")]
    NoBarrier,
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
}

/// How one side of a well is closed off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WellSide {
    /// A local maximum of U at `x`, with barrier energy `value`.
    Barrier { x: f64, value: f64 },
    /// A finite domain end where U stays bounded (value = sup of U there).
    DomainEnd { x: f64, value: f64 },
    /// A pole of U at finite `x` with `U → +∞`.
    Pole { x: f64 },
    /// `U → +∞` as `x → ±∞`.
    Unbounded,
}

impl WellSide {
    fn limit(&self, sign: f64) -> f64 {
        match *self {
            WellSide::Barrier { x, .. } | WellSide::DomainEnd { x, .. } | WellSide::Pole { x } => x,
            WellSide::Unbounded => sign * f64::INFINITY,
        }
    }

    fn escape_energy(&self) -> f64 {
        match *self {
            WellSide::Barrier { value, .. } | WellSide::DomainEnd { value, .. } => value,
            WellSide::Pole { .. } | WellSide::Unbounded => f64::INFINITY,
        }
    }
}

/// A well: a strict local minimum plus the boundaries that confine it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Well {
    pub x_min: f64,
    pub u_min: f64,
    pub left: WellSide,
    pub right: WellSide,
    /// Boundary abscissa on the left (−∞ when unbounded).
    pub left_limit: f64,
    /// Boundary abscissa on the right (+∞ when unbounded).
    pub right_limit: f64,
    /// Supremum of energies with bounded oscillation (+∞ when unconfined).
    pub e_max: f64,
}

/// Both solutions of `U(x) = energy` adjacent to the minimum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TurningPair {
    pub x1: f64,
    pub x2: f64,
    pub energy: f64,
}

/// One row of a period scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PeriodSample {
    pub energy: f64,
    /// `+∞` when `diverged` is set.
    pub period: f64,
    pub err_estimate: f64,
    pub diverged: bool,
}

/// Locates the well of `u`: its minimum and the confining boundaries.
///
/// With a `well_hint`, the minimum is bracketed by walking outward from the
/// hint; without one the domain is scanned, and the scan must find exactly
/// one minimum (several wells without a hint is refused rather than guessed).
pub fn find_well(u: &EvaluablePotential) -> Result<Well, PeriodError> {
    let bracket = match u.well_hint() {
        Some(hint) => bracket_from_hint(u, hint)?,
        None => {
            let brackets = u.scan_minima();
            match brackets.len() {
                1 => brackets[0],
                _ => return Err(PeriodError::NoMinimumFound),
            }
        }
    };
    let root = brent(|x| u.deriv(x), bracket.0, bracket.1, ROOT_REL_TOL)?;
    let x_min = root.x;
    // Strictness check: U' changes sign − to + across the located point.
    let probe = 1e-7 * (1.0 + x_min.abs());
    let (lo, hi) = u.domain();
    let left_probe = (x_min - probe).max(lo + 0.25 * (x_min - lo).abs() * f64::EPSILON);
    let right_probe = (x_min + probe).min(hi - 0.25 * (hi - x_min).abs() * f64::EPSILON);
    if !(u.deriv(left_probe) < 0.0 && u.deriv(right_probe) > 0.0) {
        return Err(PeriodError::NotAMinimum { x: x_min });
    }
    let u_min = u.eval(x_min);

    let left = explore_side(u, x_min, u_min, -1.0)?;
    let right = explore_side(u, x_min, u_min, 1.0)?;
    Ok(Well {
        x_min,
        u_min,
        left,
        right,
        left_limit: left.limit(-1.0),
        right_limit: right.limit(1.0),
        e_max: left.escape_energy().min(right.escape_energy()),
    })
}

fn bracket_from_hint(u: &EvaluablePotential, hint: f64) -> Result<(f64, f64), PeriodError> {
    let (lo, hi) = u.domain();
    if !(lo < hint && hint < hi) {
        return Err(PeriodError::NoMinimumFound);
    }
    let d0 = u.deriv(hint);
    if d0 == 0.0 {
        // stationary exactly at the hint; synthesize a tiny bracket
        let h = 1e-7 * (1.0 + hint.abs());
        return Ok((hint - h, hint + h));
    }
    // walk downhill: U' < 0 means the minimum lies to the right
    let dir = if d0 < 0.0 { 1.0 } else { -1.0 };
    let mut step = 1e-3 * (1.0 + hint.abs());
    let mut prev = hint;
    for _ in 0..200 {
        let mut next = prev + dir * step;
        // approach finite domain ends geometrically instead of crossing them
        if dir > 0.0 && next >= hi {
            next = prev + 0.5 * (hi - prev);
        } else if dir < 0.0 && next <= lo {
            next = prev - 0.5 * (prev - lo);
        }
        let d = u.deriv(next);
        if d.is_finite() && d.signum() != d0.signum() {
            return Ok(if dir > 0.0 { (prev, next) } else { (next, prev) });
        }
        prev = next;
        step *= 1.6;
    }
    Err(PeriodError::NoMinimumFound)
}

/// Walks outward from the minimum to find what confines that side.
fn explore_side(
    u: &EvaluablePotential,
    x_min: f64,
    u_min: f64,
    dir: f64,
) -> Result<WellSide, PeriodError> {
    let (lo, hi) = u.domain();
    let boundary = if dir > 0.0 { hi } else { lo };
    let huge = 1e14 * (1.0 + u_min.abs());
    let mut step = 1e-3 * (1.0 + x_min.abs());
    let mut prev = x_min + dir * step;
    for _ in 0..400 {
        let mut next = prev + dir * step;
        if boundary.is_finite() && (next - boundary) * dir >= 0.0 {
            // halve the gap instead of stepping past the boundary
            next = boundary - dir * 0.5 * (boundary - prev).abs();
        }
        let d = u.deriv(next);
        if d.is_finite() && d * dir < 0.0 {
            // U' flipped: a local maximum lies between prev and next
            let (a, b) = if dir > 0.0 { (prev, next) } else { (next, prev) };
            let top = brent(|x| u.deriv(x), a, b, ROOT_REL_TOL)?;
            return Ok(WellSide::Barrier {
                x: top.x,
                value: u.eval(top.x),
            });
        }
        let value = u.eval(next);
        if value > huge {
            return Ok(if boundary.is_finite() {
                WellSide::Pole { x: boundary }
            } else {
                WellSide::Unbounded
            });
        }
        if boundary.is_finite() && (boundary - next).abs() <= 1e-12 * (1.0 + boundary.abs()) {
            // reached a finite end with U still bounded
            let end_value = u.eval(boundary);
            let value = if end_value.is_finite() { end_value } else { value };
            return Ok(WellSide::DomainEnd {
                x: boundary,
                value,
            });
        }
        prev = next;
        step *= 1.6;
    }
    // monotone growth past the walk horizon: treat as unbounded confinement
    Ok(WellSide::Unbounded)
}

/// Solves `U(x) = energy` on each side of the minimum.
///
/// Brackets against the well boundary, refines with Brent to 1e−13 relative,
/// then polishes with Newton steps until the residual contract
/// `|U(xᵢ) − E| ≤ 1e−12·max(1, |E|)` holds.
pub fn turning_points(
    u: &EvaluablePotential,
    w: &Well,
    energy: f64,
) -> Result<TurningPair, PeriodError> {
    check_energy(w, energy)?;
    let x2 = one_turning_point(u, w, energy, 1.0)?;
    let x1 = one_turning_point(u, w, energy, -1.0)?;
    Ok(TurningPair { x1, x2, energy })
}

fn check_energy(w: &Well, energy: f64) -> Result<(), PeriodError> {
    if !(w.u_min < energy && energy < w.e_max) {
        return Err(PeriodError::EnergyOutOfRange {
            energy,
            lo: w.u_min,
            hi: w.e_max,
        });
    }
    Ok(())
}

fn one_turning_point(
    u: &EvaluablePotential,
    w: &Well,
    energy: f64,
    dir: f64,
) -> Result<f64, PeriodError> {
    let side = if dir > 0.0 { w.right } else { w.left };
    let f = |x: f64| u.eval(x) - energy;
    // find an outer point with f > 0
    let outer = match side {
        WellSide::Barrier { x, .. } | WellSide::DomainEnd { x, .. } => x,
        WellSide::Pole { x: pole } => {
            let mut t = w.x_min + 0.9 * (pole - w.x_min);
            let mut found = None;
            for _ in 0..600 {
                if f(t) > 0.0 {
                    found = Some(t);
                    break;
                }
                t = pole - 0.25 * (pole - t);
            }
            found.ok_or(PeriodError::EnergyOutOfRange {
                energy,
                lo: w.u_min,
                hi: w.e_max,
            })?
        }
        WellSide::Unbounded => {
            let mut step = 1.0 + w.x_min.abs();
            let mut t = w.x_min + dir * step;
            let mut found = None;
            for _ in 0..200 {
                if f(t) > 0.0 {
                    found = Some(t);
                    break;
                }
                step *= 2.0;
                t = w.x_min + dir * step;
            }
            found.ok_or(PeriodError::EnergyOutOfRange {
                energy,
                lo: w.u_min,
                hi: w.e_max,
            })?
        }
    };
    let (a, b) = if dir > 0.0 {
        (w.x_min, outer)
    } else {
        (outer, w.x_min)
    };
    let root = brent(f, a, b, ROOT_REL_TOL)?;
    let mut x = root.x;
    // Newton polish enforces the residual contract even on steep flanks.
    let target = TURNING_RESIDUAL_TOL * energy.abs().max(1.0);
    for _ in 0..12 {
        let fx = f(x);
        if fx.abs() <= 0.5 * target {
            break;
        }
        let dx = u.deriv(x);
        if dx == 0.0 || !dx.is_finite() {
            break;
        }
        let next = x - fx / dx;
        if next > a && next < b {
            x = next;
        } else {
            break;
        }
    }
    Ok(x)
}

/// One evaluation of the period integral at a fixed energy.
///
/// Budget exhaustion close under a finite barrier is the physical divergence
/// of `T(E)` and comes back as `diverged = true`; the same exhaustion with no
/// barrier present is a numerical failure and becomes an error.
pub fn period_at(
    u: &EvaluablePotential,
    w: &Well,
    energy: f64,
) -> Result<PeriodSample, PeriodError> {
    check_energy(w, energy)?;
    let tp = turning_points(u, w, energy)?;
    let (x1, x2) = (tp.x1, tp.x2);
    let width = x2 - x1;
    let slope1 = u.deriv(x1).abs();
    let slope2 = u.deriv(x2).abs();
    // Endpoint residuals r = E − U(xᵢ) are ~1e−12 after polishing, but the
    // period depends on them through a square root: an unremoved residual r
    // costs O(√r) ≈ 1e−6 in T. Subtracting their linear interpolant pins the
    // integrand's zeros exactly at x₁ and x₂, reducing the effect to O(r).
    let r1 = energy - u.eval(x1);
    let r2 = energy - u.eval(x2);
    // Below this distance `x1 + d` can no longer resolve d: the potential
    // must be replaced by its tangent at the turning point or the computed
    // gap is pure cancellation noise.
    let tiny_d = 64.0 * f64::EPSILON * x1.abs().max(x2.abs()).max(width);
    let integrand = move |phi: f64| {
        let c = phi.cos();
        // distances to the endpoints, exact in phi:
        // x − x₁ = Δ·cos²(π/4 − φ/2), x₂ − x = Δ·sin²(π/4 − φ/2)
        let half = FRAC_PI_2 / 2.0 - phi / 2.0;
        let d1 = width * half.cos().powi(2);
        let d2 = width * half.sin().powi(2);
        let dmin = d1.min(d2);
        let mut s = if dmin < tiny_d {
            if d1 < d2 {
                slope1 * d1
            } else {
                slope2 * d2
            }
        } else {
            energy - u.eval(x1 + d1) - (r1 * d2 + r2 * d1) / width
        };
        if s <= 0.0 {
            // round-off at the edges: fall back to the linearized gap
            s = if d1 < d2 { slope1 * d1 } else { slope2 * d2 };
            if s <= 0.0 {
                return 0.0;
            }
        }
        std::f64::consts::SQRT_2 * 0.5 * width * c / s.sqrt()
    };
    // Graded seed partition toward both endpoints: turning-point boundary
    // layers (e.g. just under a barrier) must be visible to the rule from
    // the start, or coarse-interval error estimates cannot be trusted.
    let mut breaks = Vec::with_capacity(24);
    for j in 1..=12 {
        let off = std::f64::consts::PI * 0.5f64.powi(j + 1);
        breaks.push(-FRAC_PI_2 + off);
        breaks.push(FRAC_PI_2 - off);
    }
    let q = quad::integrate_with_breakpoints(
        integrand,
        -FRAC_PI_2,
        FRAC_PI_2,
        &breaks,
        QUAD_TOL,
        QUAD_TOL,
        MAX_INTERVALS,
    );
    // A stalled result is round-off-saturated, not divergent: the value is
    // final and its (slightly larger than requested) error bound is honest.
    let acceptable_stall = q.stalled && q.err_estimate <= 1e-6 * q.value.abs().max(1.0);
    if q.converged || acceptable_stall {
        Ok(PeriodSample {
            energy,
            period: q.value,
            err_estimate: q.err_estimate,
            diverged: false,
        })
    } else if w.e_max.is_finite() {
        Ok(PeriodSample {
            energy,
            period: f64::INFINITY,
            err_estimate: q.err_estimate,
            diverged: true,
        })
    } else {
        Err(PeriodError::QuadratureBudgetExceeded { energy })
    }
}

/// The branch-difference criterion at one energy.
///
/// Returns `(delta, delta_harmonic)`: the actual turning-point separation
/// and the separation a harmonic oscillator of period `t_target` would have
/// at the same energy above the minimum. Equality of the two for all
/// energies is equivalent to isochronicity with period `t_target`; under
/// the normalization `T = √2·π`, `u_min = 0` it reads `Δ(y) = 2√y`.
pub fn delta_criterion(
    u: &EvaluablePotential,
    w: &Well,
    energy: f64,
    t_target: f64,
) -> Result<(f64, f64), PeriodError> {
    let tp = turning_points(u, w, energy)?;
    let delta = tp.x2 - tp.x1;
    let delta_harmonic = t_target / std::f64::consts::PI * (2.0 * (energy - w.u_min)).sqrt();
    Ok((delta, delta_harmonic))
}

/// A scan of the period function over `[e_lo, e_hi]`.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub samples: Vec<PeriodSample>,
    /// `max_E |T(E) − T(E₀)| / T(E₀)`; +∞ if any sample diverged.
    pub max_rel_period_spread: f64,
}

/// Samples `n` energies across `[e_lo, e_hi]` and measures the period spread.
///
/// Energies are log-spaced relative to the well minimum when the range spans
/// at least a decade, linear otherwise.
pub fn isochronicity_scan(
    u: &EvaluablePotential,
    w: &Well,
    e_lo: f64,
    e_hi: f64,
    n: usize,
) -> Result<ScanResult, PeriodError> {
    assert!(n >= 3, "a scan needs at least 3 energies");
    check_energy(w, e_lo)?;
    check_energy(w, e_hi)?;
    assert!(e_lo < e_hi, "empty energy range");
    let ratio = (e_hi - w.u_min) / (e_lo - w.u_min);
    let energies: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if ratio >= 10.0 {
                w.u_min + (e_lo - w.u_min) * ratio.powf(t)
            } else {
                e_lo + (e_hi - e_lo) * t
            }
        })
        .collect();
    let mut samples = Vec::with_capacity(n);
    for e in energies {
        samples.push(period_at(u, w, e)?);
    }
    let t0 = samples[0].period;
    let spread = samples
        .iter()
        .map(|s| {
            if s.diverged || !t0.is_finite() {
                f64::INFINITY
            } else {
                (s.period - t0).abs() / t0
            }
        })
        .fold(0.0f64, f64::max);
    Ok(ScanResult {
        samples,
        max_rel_period_spread: spread,
    })
}

/// Periods at energies approaching a finite barrier: `E_k` has
/// `(e_max − E_k)/(e_max − u_min) = 10⁻ᵏ` for `k = 1..k_max`.
///
/// The returned periods grow without bound as the barrier is approached;
/// callers assert the strict increase.
pub fn divergence_probe(
    u: &EvaluablePotential,
    w: &Well,
    k_max: usize,
) -> Result<Vec<(f64, f64)>, PeriodError> {
    if !w.e_max.is_finite() {
        return Err(PeriodError::NoBarrier);
    }
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let eps = 10f64.powi(-(k as i32));
        let energy = w.e_max * (1.0 - eps) + w.u_min * eps;
        let sample = period_at(u, w, energy)?;
        out.push((eps, sample.period));
    }
    Ok(out)
}
