//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4)).
//!
//! Explicit 7-stage pair with FSAL; accepted steps are stored with their
//! derivatives so trajectories support cubic Hermite interpolation between
//! nodes, which is what the crossing-time refinement in `dynamics` uses.

/// Dormand–Prince coefficient tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights (identical to the last `A` row; FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (forced below {h_min})")]
    StepUnderflow { t: f64, h_min: f64 },
    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("exceeded {0} integration steps")]
    MaxSteps(usize),
}

/// One accepted step node: state and derivative at time `t`.
#[derive(Debug, Clone)]
pub struct StepNode {
    pub t: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

/// Dense trajectory of accepted steps from `t0` to `t_end`.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub nodes: Vec<StepNode>,
    pub rhs_evaluations: usize,
    pub rejected_steps: usize,
}

impl OdeSolution {
    pub fn last(&self) -> &StepNode {
        self.nodes.last().expect("solution has at least one node")
    }

    /// Cubic Hermite interpolation of component `k` at time `t` within the
    /// step that brackets it.
    pub fn sample_component(&self, t: f64, k: usize) -> f64 {
        let idx = match self.nodes.binary_search_by(|n| n.t.total_cmp(&t)) {
            Ok(i) => return self.nodes[i].y[k],
            Err(i) => i.clamp(1, self.nodes.len() - 1),
        };
        let (lo, hi) = (&self.nodes[idx - 1], &self.nodes[idx]);
        hermite(lo.t, lo.y[k], lo.dy[k], hi.t, hi.y[k], hi.dy[k], t)
    }
}

/// Cubic Hermite value at `t` given endpoint values and derivatives.
pub fn hermite(t0: f64, y0: f64, d0: f64, t1: f64, y1: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub h_initial: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_steps: 4_000_000,
            h_initial: None,
        }
    }
}

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t_end` (forward only).
///
/// Standard embedded error control: a step is accepted when the RMS of the
/// componentwise scaled 5th−4th difference is ≤ 1, and the next step size
/// follows the 1/5-power law with a 0.9 safety factor.
pub fn integrate<F>(
    rhs: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<OdeSolution, OdeError>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = y0.len();
    let span = t_end - t0;
    assert!(span > 0.0, "integration runs forward");
    let h_min = 1e-15 * span;
    let mut h = opts.h_initial.unwrap_or(1e-3 * span).min(span);
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut dy = vec![0.0; dim];
    rhs(t, &y, &mut dy);
    let mut evals = 1;
    let mut rejected = 0;

    let mut nodes = Vec::new();
    nodes.push(StepNode {
        t,
        y: y.clone(),
        dy: dy.clone(),
    });

    let mut k = vec![vec![0.0; dim]; 7];
    let mut y_stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(OdeSolution {
                nodes,
                rhs_evaluations: evals,
                rejected_steps: rejected,
            });
        }
        h = h.min(t_end - t);
        if h < h_min {
            // either within rounding of the end, or the step has died
            if t_end - t <= 4.0 * f64::EPSILON * t_end.abs().max(1.0) {
                return Ok(OdeSolution {
                    nodes,
                    rhs_evaluations: evals,
                    rejected_steps: rejected,
                });
            }
            return Err(OdeError::StepUnderflow { t, h_min });
        }

        // FSAL: k1 is the derivative at the current point.
        k[0].copy_from_slice(&dy);
        for stage in 0..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    acc += A[stage][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (_, tail) = k.split_at_mut(stage + 1);
            rhs(t + C[stage] * h, &y_stage, &mut tail[0]);
            evals += 1;
        }

        let mut err_norm = 0.0;
        for i in 0..dim {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc5 += B5[j] * kj[i];
                acc4 += B4[j] * kj[i];
            }
            y5[i] = y[i] + h * acc5;
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            let e = h * (acc5 - acc4) / scale;
            err_norm += e * e;
        }
        err_norm = (err_norm / dim as f64).sqrt();

        if !err_norm.is_finite() {
            return Err(OdeError::NonFiniteState { t });
        }

        if err_norm <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            // k7 is the derivative at the accepted point (FSAL)
            dy.copy_from_slice(&k[6]);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(OdeError::NonFiniteState { t });
            }
            nodes.push(StepNode {
                t,
                y: y.clone(),
                dy: dy.clone(),
            });
        } else {
            rejected += 1;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Err(OdeError::MaxSteps(opts.max_steps))
}
