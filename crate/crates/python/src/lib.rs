//! Python extension module over the isochrony core.
//!
//! The exact side (polynomials, rational potentials, classification) is
//! exposed as classes holding exact values as decimal strings; the numeric
//! oracles come through as plain functions returning floats.

use isochrony::classify;
use isochrony::corpus;
use isochrony::dynamics;
use isochrony::io::PotentialSpec;
use isochrony::period;
use isochrony::quantum;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn parse_poly(coeffs: Vec<String>) -> PyResult<isochrony::Polynomial> {
    let parsed: Result<Vec<isochrony::Rational>, _> =
        coeffs.iter().map(|s| s.parse()).collect();
    parsed
        .map(isochrony::Polynomial::new)
        .map_err(|e| PyValueError::new_err(format!("bad rational coefficient: {e}")))
}

fn poly_strings(p: &isochrony::Polynomial) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// Exact univariate polynomial; coefficients are rational strings in
/// ascending degree order.
#[pyclass(name = "Polynomial", from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: isochrony::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(coeffs: Vec<String>) -> PyResult<Self> {
        Ok(PyPolynomial {
            inner: parse_poly(coeffs)?,
        })
    }

    fn coeffs(&self) -> Vec<String> {
        poly_strings(&self.inner)
    }

    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn derivative(&self) -> PyPolynomial {
        PyPolynomial {
            inner: self.inner.derivative(),
        }
    }

    fn shift(&self, s: &str) -> PyResult<PyPolynomial> {
        let s: isochrony::Rational = s
            .parse()
            .map_err(|e| PyValueError::new_err(format!("bad rational: {e}")))?;
        Ok(PyPolynomial {
            inner: self.inner.shift(&s),
        })
    }

    fn eval(&self, x: &str) -> PyResult<String> {
        let x: isochrony::Rational = x
            .parse()
            .map_err(|e| PyValueError::new_err(format!("bad rational: {e}")))?;
        Ok(self.inner.eval(&x).to_string())
    }

    fn eval_f64(&self, x: f64) -> f64 {
        self.inner
            .coeffs_f64()
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// Exact rational potential U = p/q in lowest terms.
#[pyclass(name = "RationalPotential", from_py_object)]
#[derive(Clone)]
struct PyRationalPotential {
    inner: classify::RationalPotential,
}

#[pymethods]
impl PyRationalPotential {
    /// Builds U = num/den, reducing to lowest terms when necessary.
    #[new]
    fn new(num: Vec<String>, den: Vec<String>) -> PyResult<Self> {
        let (inner, _) = classify::RationalPotential::reduced(parse_poly(num)?, parse_poly(den)?)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyRationalPotential { inner })
    }

    fn numerator(&self) -> Vec<String> {
        poly_strings(self.inner.numerator())
    }

    fn denominator(&self) -> Vec<String> {
        poly_strings(self.inner.denominator())
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// Classification verdict with exact parameters as rational strings.
#[pyclass(name = "Classification", from_py_object)]
#[derive(Clone)]
struct PyClassification {
    inner: classify::Classification,
}

#[pymethods]
impl PyClassification {
    /// "harmonic", "singular" or "not_isochronous".
    fn verdict(&self) -> &'static str {
        match self.inner {
            classify::Classification::Harmonic { .. } => "harmonic",
            classify::Classification::SingularIsochronous { .. } => "singular",
            classify::Classification::NotIsochronous { .. } => "not_isochronous",
        }
    }

    fn is_isochronous(&self) -> bool {
        self.inner.is_positive()
    }

    fn omega_sq(&self) -> Option<String> {
        self.inner.omega_sq().map(|r| r.to_string())
    }

    fn c_sq(&self) -> Option<String> {
        match &self.inner {
            classify::Classification::SingularIsochronous { c_sq, .. } => Some(c_sq.to_string()),
            _ => None,
        }
    }

    fn shift(&self) -> Option<String> {
        match &self.inner {
            classify::Classification::Harmonic { shift, .. }
            | classify::Classification::SingularIsochronous { shift, .. } => {
                Some(shift.to_string())
            }
            _ => None,
        }
    }

    fn offset(&self) -> Option<String> {
        match &self.inner {
            classify::Classification::Harmonic { offset, .. }
            | classify::Classification::SingularIsochronous { offset, .. } => {
                Some(offset.to_string())
            }
            _ => None,
        }
    }

    fn reason(&self) -> Option<String> {
        match &self.inner {
            classify::Classification::NotIsochronous { reason } => Some(format!("{:?}", reason)),
            _ => None,
        }
    }

    /// The oscillation period 2π/√(omega_sq) for positive verdicts.
    fn period(&self) -> Option<f64> {
        self.inner
            .omega_sq()
            .map(|w| 2.0 * std::f64::consts::PI / w.to_f64().sqrt())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    fn __repr__(&self) -> String {
        self.to_json()
    }
}

/// Exact decision: is U isochronous, and with which canonical parameters?
#[pyfunction]
fn classify_potential(potential: &PyRationalPotential) -> PyClassification {
    PyClassification {
        inner: classify::classify(&potential.inner),
    }
}

/// Rebuilds the exact potential from a positive verdict.
#[pyfunction]
fn reconstruct(classification: &PyClassification) -> PyResult<PyRationalPotential> {
    classify::reconstruct(&classification.inner)
        .map(|inner| PyRationalPotential { inner })
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Checks α(x+2z) − β(x+2z)·z ≡ α(x) + β(x)·z exactly.
/// Returns (holds, residual_repr).
#[pyfunction]
fn check_functional_equation(alpha: &PyPolynomial, beta: &PyPolynomial) -> (bool, String) {
    let w = classify::check_functional_equation(&alpha.inner, &beta.inner);
    (w.holds, format!("{}", w.residual))
}

/// The solved family β = C·x + C₁, α = ½C·x² + C₁·x + C₀.
#[pyfunction]
fn solve_functional_equation_family(
    c: &str,
    c1: &str,
    c0: &str,
) -> PyResult<(PyPolynomial, PyPolynomial)> {
    let parse = |s: &str| -> PyResult<isochrony::Rational> {
        s.parse()
            .map_err(|e| PyValueError::new_err(format!("bad rational: {e}")))
    };
    let (alpha, beta) =
        classify::solve_functional_equation_family(&parse(c)?, &parse(c1)?, &parse(c0)?);
    Ok((PyPolynomial { inner: alpha }, PyPolynomial { inner: beta }))
}

fn evaluable(
    spec_json: &str,
    hint: Option<f64>,
) -> PyResult<isochrony::potential::EvaluablePotential> {
    let spec: PotentialSpec = serde_json::from_str(spec_json)
        .map_err(|e| PyValueError::new_err(format!("bad potential spec: {e}")))?;
    spec.to_evaluable(hint)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Period T(E) of the well of the potential described by `spec_json`
/// ({"kind":"rational",...} or {"kind":"builtin","name":...}).
#[pyfunction]
#[pyo3(signature = (spec_json, energy, hint=None))]
fn period_at(spec_json: &str, energy: f64, hint: Option<f64>) -> PyResult<f64> {
    let u = evaluable(spec_json, hint)?;
    let w = period::find_well(&u).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let s =
        period::period_at(&u, &w, energy).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(s.period)
}

/// Max relative period spread over [emin, emax]; ~0 means isochronous.
#[pyfunction]
#[pyo3(signature = (spec_json, emin, emax, n=12, hint=None))]
fn period_spread(
    spec_json: &str,
    emin: f64,
    emax: f64,
    n: usize,
    hint: Option<f64>,
) -> PyResult<f64> {
    let u = evaluable(spec_json, hint)?;
    let w = period::find_well(&u).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let scan = period::isochronicity_scan(&u, &w, emin, emax, n)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(scan.max_rel_period_spread)
}

/// Branch-difference criterion: returns (delta, delta_harmonic).
#[pyfunction]
#[pyo3(signature = (spec_json, energy, t_target, hint=None))]
fn delta_criterion(
    spec_json: &str,
    energy: f64,
    t_target: f64,
    hint: Option<f64>,
) -> PyResult<(f64, f64)> {
    let u = evaluable(spec_json, hint)?;
    let w = period::find_well(&u).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    period::delta_criterion(&u, &w, energy, t_target)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Measured oscillation period from a 1-D trajectory through the well.
#[pyfunction]
#[pyo3(signature = (spec_json, q0, p0=0.0, t_end=40.0, tol=1e-10))]
fn trajectory_period(spec_json: &str, q0: f64, p0: f64, t_end: f64, tol: f64) -> PyResult<f64> {
    let u = evaluable(spec_json, Some(q0))?;
    let traj = dynamics::integrate_1d(&u, &dynamics::State1D::new(q0, p0), t_end, tol)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let section = period::find_well(&u).map(|w| w.x_min).unwrap_or(q0);
    dynamics::measure_period(&traj, section).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Phase-space return distance of the n-particle chain after `t_end`.
#[pyfunction]
#[pyo3(signature = (n, omega, c, x0, p0, t_end, tol=1e-10))]
fn chain_return_distance(
    n: usize,
    omega: f64,
    c: f64,
    x0: Vec<f64>,
    p0: Vec<f64>,
    t_end: f64,
    tol: f64,
) -> PyResult<f64> {
    let sys =
        dynamics::CMSystem::new(n, omega, c).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let s0 = dynamics::StateND::new(x0, p0).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let traj = dynamics::integrate_cm(&sys, &s0, t_end, tol)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(dynamics::return_distance(&traj, &s0.x, &s0.p))
}

/// The planar-oscillator reduction: returns (effective_c_sq, period of r(t)).
#[pyfunction]
#[pyo3(signature = (omega, angular_momentum, tol=1e-11))]
fn isotropic_reduction(
    omega: f64,
    angular_momentum: f64,
    tol: f64,
) -> PyResult<(f64, Option<f64>)> {
    let demo = dynamics::isotropic_oscillator_reduction(omega, angular_momentum, None, tol)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((demo.effective_c_sq, demo.measured_period))
}

/// Lowest eigenvalues of −d²/dx² + A·x² + B/x² on the half-line.
#[pyfunction]
#[pyo3(signature = (a, b, m=5, method="fd", x_max=None, n_points=3000, tol=1e-9))]
fn spectrum(
    a: f64,
    b: f64,
    m: usize,
    method: &str,
    x_max: Option<f64>,
    n_points: usize,
    tol: f64,
) -> PyResult<Vec<f64>> {
    let qp =
        quantum::QuantumPotential::new(a, b).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let e_top = a.sqrt() * (4.0 * m as f64 + 2.0 + (1.0 + 4.0 * b.max(0.0)).sqrt());
    let x_max = x_max.unwrap_or(2.3 * (e_top / a).sqrt());
    let result = match method {
        "fd" => quantum::spectrum_fd(&qp, m, x_max, n_points),
        "shooting" => quantum::spectrum_shooting(&qp, m, x_max, tol),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown method {other:?}: expected \"fd\" or \"shooting\""
            )))
        }
    }
    .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(result.eigenvalues)
}

/// Seeded classifier-vs-quadrature cross-validation.
/// Returns (total, positive_verdicts, disagreement_count).
#[pyfunction]
#[pyo3(signature = (count=50, seed=7, max_deg=6))]
fn cross_validate(count: usize, seed: u64, max_deg: usize) -> (usize, usize, usize) {
    let report = corpus::cross_validate(count, seed, max_deg);
    (
        report.total,
        report.positive_verdicts,
        report.disagreements.len(),
    )
}

#[pymodule]
fn isochrony_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyRationalPotential>()?;
    m.add_class::<PyClassification>()?;
    m.add_function(wrap_pyfunction!(classify_potential, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(check_functional_equation, m)?)?;
    m.add_function(wrap_pyfunction!(solve_functional_equation_family, m)?)?;
    m.add_function(wrap_pyfunction!(period_at, m)?)?;
    m.add_function(wrap_pyfunction!(period_spread, m)?)?;
    m.add_function(wrap_pyfunction!(delta_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(trajectory_period, m)?)?;
    m.add_function(wrap_pyfunction!(chain_return_distance, m)?)?;
    m.add_function(wrap_pyfunction!(isotropic_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    Ok(())
}
