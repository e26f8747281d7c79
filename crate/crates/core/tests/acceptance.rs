//! Acceptance suite: every release-gating criterion as one test, each
//! printing a single PASS line with its measured margins.
//!
//! Run with `cargo test -p isochrony --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use isochrony::classify::{classify, reconstruct, Classification};
use isochrony::corpus;
use isochrony::dynamics::{
    integrate_cm, isotropic_oscillator_reduction, random_symmetric_chain_state,
    reflected_return_distance, return_distance, CMSystem, StateND,
};
use isochrony::period::{delta_criterion, find_well, isochronicity_scan, period_at};
use isochrony::potential::EvaluablePotential;
use isochrony::quantum::{equidistance_report, spectrum_fd, spectrum_shooting, QuantumPotential};
use isochrony::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, SQRT_2};

fn pass(criterion: usize, name: &str, detail: String) {
    println!("acceptance {criterion} ({name}): PASS — {detail}");
}

/// 1. classify(reconstruct(c)) == c exactly over the full parameter grid.
#[test]
fn criterion_01_theorem_round_trip() {
    let omega_sq = [
        Rational::ratio(1, 2),
        Rational::from_int(1),
        Rational::from_int(2),
        Rational::from_int(8),
        Rational::from_int(9),
    ];
    let c_sq = [
        Rational::ratio(1, 4),
        Rational::from_int(1),
        Rational::from_int(7),
    ];
    let shift = [
        Rational::from_int(-2),
        Rational::zero(),
        Rational::ratio(3, 2),
    ];
    let offset = [
        Rational::from_int(-1),
        Rational::zero(),
        Rational::from_int(5),
    ];
    let mut cases = 0;
    for w in &omega_sq {
        for s in &shift {
            for k in &offset {
                let harmonic = Classification::Harmonic {
                    omega_sq: w.clone(),
                    shift: s.clone(),
                    offset: k.clone(),
                };
                assert_eq!(
                    classify(&reconstruct(&harmonic).unwrap()),
                    harmonic,
                    "harmonic round trip"
                );
                cases += 1;
                for c in &c_sq {
                    let singular = Classification::SingularIsochronous {
                        omega_sq: w.clone(),
                        c_sq: c.clone(),
                        shift: s.clone(),
                        offset: k.clone(),
                    };
                    assert_eq!(
                        classify(&reconstruct(&singular).unwrap()),
                        singular,
                        "singular round trip"
                    );
                    cases += 1;
                }
            }
        }
    }
    pass(
        1,
        "theorem round-trip",
        format!("{cases} exact parameter combinations, zero tolerance"),
    );
}

/// 2. U = x² has omega_sq = 2 and T = √2·π at every sampled energy.
#[test]
fn criterion_02_paper_normalization() {
    let u = isochrony::RationalPotential::new(
        isochrony::Polynomial::from_ints(&[0, 0, 1]),
        isochrony::Polynomial::one(),
    )
    .unwrap();
    let verdict = classify(&u);
    let omega_sq = verdict.omega_sq().expect("positive verdict");
    assert_eq!(omega_sq, &Rational::from_int(2));
    let derived_period = 2.0 * PI / omega_sq.to_f64().sqrt();
    assert!((derived_period - SQRT_2 * PI).abs() < 1e-15);

    let numeric = EvaluablePotential::from_rational(&u, None);
    let well = find_well(&numeric).unwrap();
    let mut worst: f64 = 0.0;
    for e in [0.1, 1.0, 7.0, 100.0] {
        let t = period_at(&numeric, &well, e).unwrap().period;
        let dev = (t - SQRT_2 * PI).abs();
        assert!(dev <= 1e-9, "E = {e}: |T − √2π| = {dev:e}");
        worst = worst.max(dev);
    }
    pass(
        2,
        "paper normalization",
        format!("omega_sq = 2, max |T − √2π| = {worst:.2e} (tol 1e-9)"),
    );
}

/// 3. Twenty reconstructed canonical singular potentials are isochronous to
///    1e−8 over two energy decades with T = 2π/√omega_sq.
#[test]
fn criterion_03_family_isochronicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let omega_grid = [
        Rational::ratio(1, 2),
        Rational::from_int(1),
        Rational::from_int(2),
        Rational::from_int(4),
        Rational::ratio(9, 2),
        Rational::from_int(8),
        Rational::from_int(9),
    ];
    let c_grid = [
        Rational::ratio(1, 4),
        Rational::from_int(1),
        Rational::from_int(2),
        Rational::from_int(7),
    ];
    let s_grid = [
        Rational::from_int(-2),
        Rational::zero(),
        Rational::ratio(3, 2),
    ];
    let k_grid = [
        Rational::from_int(-1),
        Rational::zero(),
        Rational::from_int(5),
    ];
    let mut worst_spread: f64 = 0.0;
    let mut worst_period: f64 = 0.0;
    for _ in 0..20 {
        let member = Classification::SingularIsochronous {
            omega_sq: omega_grid[rng.random_range(0..omega_grid.len())].clone(),
            c_sq: c_grid[rng.random_range(0..c_grid.len())].clone(),
            shift: s_grid[rng.random_range(0..s_grid.len())].clone(),
            offset: k_grid[rng.random_range(0..k_grid.len())].clone(),
        };
        let exact = reconstruct(&member).unwrap();
        let numeric = EvaluablePotential::from_rational(&exact, None);
        let well = find_well(&numeric).unwrap();
        let delta = 0.1f64.max(0.1 * well.u_min.abs());
        let scan =
            isochronicity_scan(&numeric, &well, well.u_min + delta, well.u_min + 100.0 * delta, 12)
                .unwrap();
        worst_spread = worst_spread.max(scan.max_rel_period_spread);
        assert!(
            scan.max_rel_period_spread <= 1e-8,
            "{member:?}: spread {:e}",
            scan.max_rel_period_spread
        );
        let expected = 2.0 * PI / member.omega_sq().unwrap().to_f64().sqrt();
        let rel = (scan.samples[0].period - expected).abs() / expected;
        worst_period = worst_period.max(rel);
        assert!(rel <= 1e-8, "{member:?}: period off by {rel:e}");
    }
    pass(
        3,
        "family isochronicity",
        format!(
            "20 members over 2 decades: max spread {worst_spread:.2e}, max period error {worst_period:.2e} (tol 1e-8)"
        ),
    );
}

/// 4. The branch-difference criterion accepts the singular well exactly and
///    rejects the quartic by a wide margin.
#[test]
fn criterion_04_branch_difference() {
    let u = EvaluablePotential::from_fns(
        "half_x2_plus_inv_x2",
        |x| 0.5 * x * x + 1.0 / (x * x),
        |x| x - 2.0 / (x * x * x),
        (0.0, f64::INFINITY),
        Some(1.0),
    );
    let well = find_well(&u).unwrap();
    let (delta, delta_harmonic) = delta_criterion(&u, &well, 3.0, PI).unwrap();
    let closed_form = (3.0 + 7f64.sqrt()).sqrt() - (3.0 - 7f64.sqrt()).sqrt();
    assert!((delta - closed_form).abs() <= 1e-8);
    let harmonic_form = (2.0 * (3.0 - SQRT_2)).sqrt();
    assert!((delta_harmonic - harmonic_form).abs() <= 1e-12);
    let mismatch = (delta - delta_harmonic).abs();
    assert!(mismatch <= 1e-8, "criterion mismatch {mismatch:e}");

    let quartic = EvaluablePotential::quartic();
    let wq = find_well(&quartic).unwrap();
    let t1 = period_at(&quartic, &wq, 1.0).unwrap().period;
    let (dq, dhq) = delta_criterion(&quartic, &wq, 1.0, t1).unwrap();
    let separation = (dq - dhq).abs();
    assert!(separation >= 0.3, "quartic separation {separation}");
    pass(
        4,
        "branch-difference criterion",
        format!("singular well matches to {mismatch:.2e} (tol 1e-8); quartic separates by {separation:.3} (≥ 0.3)"),
    );
}

/// 5. The built-in potential from the algebraic curve is isochronous with
///    T = √2π across its whole well.
#[test]
fn criterion_05_algebraic_example() {
    let u = EvaluablePotential::algebraic_example();
    let well = find_well(&u).unwrap();
    let scan = isochronicity_scan(&u, &well, 0.01, 0.24, 12).unwrap();
    assert!(
        scan.max_rel_period_spread <= 1e-6,
        "spread {:e}",
        scan.max_rel_period_spread
    );
    let dev = (scan.samples[0].period - SQRT_2 * PI).abs();
    assert!(dev <= 1e-6, "period deviation {dev:e}");
    pass(
        5,
        "algebraic worked example",
        format!(
            "spread {:.2e}, |T − √2π| = {dev:.2e} (tol 1e-6)",
            scan.max_rel_period_spread
        ),
    );
}

/// 6. Periods diverge toward the barrier of the double well.
#[test]
fn criterion_06_barrier_divergence() {
    let u = EvaluablePotential::double_well().with_hint(1.0);
    let well = find_well(&u).unwrap();
    let mut periods = Vec::new();
    for k in 1..=6 {
        let eps = 10f64.powi(-k);
        let e = well.e_max * (1.0 - eps) + well.u_min * eps;
        let sample = period_at(&u, &well, e).unwrap();
        assert!(!sample.diverged, "k = {k} unexpectedly diverged");
        periods.push(sample.period);
    }
    for (k, w) in periods.windows(2).enumerate() {
        assert!(w[1] > w[0], "period not increasing at k = {}", k + 2);
    }
    let ratio = periods[5] / periods[0];
    assert!(ratio >= 2.0, "T(k=6)/T(k=1) = {ratio}");
    pass(
        6,
        "barrier divergence",
        format!("periods strictly increasing, T(k=6)/T(k=1) = {ratio:.3} (≥ 2)"),
    );
}

/// 7. The confined inverse-square chain returns in full phase space after
///    π/ω (reflection-symmetric random starts; the half-period reflection
///    fixes those states), and generic starts mirror at π/ω and return at
///    2π/ω.
#[test]
fn criterion_07_chain_periodicity() {
    let tol = 1e-9;
    let configs = [(2usize, 1.0, 1.0), (3, 2.0, 0.5), (4, 1.0, 0.7)];
    let mut worst_return: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    for (i, &(n, omega, c)) in configs.iter().enumerate() {
        let sys = CMSystem::new(n, omega, c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        for run in 0..5 {
            let s0 = random_symmetric_chain_state(n, &mut rng);
            let traj = integrate_cm(&sys, &s0, PI / omega, tol).unwrap();
            let dist = return_distance(&traj, &s0.x, &s0.p);
            assert!(
                dist <= 1e-5,
                "n = {n}, run {run}: return distance {dist:e}"
            );
            assert!(
                traj.energy_drift <= 1e-7,
                "n = {n}, run {run}: drift {:e}",
                traj.energy_drift
            );
            worst_return = worst_return.max(dist);
            worst_drift = worst_drift.max(traj.energy_drift);
        }
    }
    // generic (asymmetric) starts: reflected image at π/ω, full return at 2π/ω
    let sys = CMSystem::new(3, 1.0, 1.0).unwrap();
    let s0 = StateND::new(vec![-1.9, 0.3, 1.2], vec![0.4, -0.7, 0.2]).unwrap();
    let half = integrate_cm(&sys, &s0, PI, tol).unwrap();
    assert!(reflected_return_distance(&half, &s0.x, &s0.p) <= 1e-5);
    let full = integrate_cm(&sys, &s0, 2.0 * PI, tol).unwrap();
    assert!(return_distance(&full, &s0.x, &s0.p) <= 1e-5);
    pass(
        7,
        "chain periodicity",
        format!(
            "15 symmetric runs return at π/ω: worst distance {worst_return:.2e} (tol 1e-5), worst drift {worst_drift:.2e} (tol 1e-7); generic start mirrors at π/ω and returns at 2π/ω"
        ),
    );
}

/// 8. The radial coordinate of the planar oscillator oscillates with period
///    π/ω, in agreement with the quadrature on the effective potential.
#[test]
fn criterion_08_isotropic_reduction() {
    let mut detail = String::new();
    for (omega, l) in [(1.0, 1.0), (2.0, 3.0)] {
        let demo = isotropic_oscillator_reduction(omega, l, None, 1e-11).unwrap();
        let measured = demo.measured_period.expect("non-circular orbit");
        let expected = PI / omega;
        let dev = (measured - expected).abs();
        assert!(dev <= 1e-6, "(ω={omega}, L={l}): |T − π/ω| = {dev:e}");
        let quad = demo.quadrature_period.expect("well exists");
        let cross = (measured - quad).abs();
        assert!(cross <= 1e-6, "(ω={omega}, L={l}): oracle mismatch {cross:e}");
        assert!((demo.effective_c_sq - 0.5 * l * l).abs() < 1e-14);
        detail.push_str(&format!(
            "(ω={omega},L={l}): C={}, |T−π/ω|={dev:.2e}, |T−T_quad|={cross:.2e}; ",
            demo.effective_c_sq
        ));
    }
    pass(8, "isotropic-oscillator reduction", detail + "(tol 1e-6)");
}

/// 9. Quantum equidistance: the two spectral methods agree, and the
///    (independently confirmed) closed-form gap and ground-state laws hold
///    to 1e−4 after Richardson extrapolation.
#[test]
fn criterion_09_quantum_equidistance() {
    // closed-form oracle, confirmed below by fd↔shooting agreement
    let oracle_e = |a: f64, b: f64, n: usize| {
        a.sqrt() * (4.0 * n as f64 + 2.0 + (1.0 + 4.0 * b).sqrt())
    };
    let m = 5;
    let x_max = |a: f64, b: f64| {
        let e_top = a.sqrt() * (4.0 * m as f64 + 2.0 + (1.0 + 4.0 * b.max(0.0)).sqrt());
        2.3 * (e_top / a).sqrt()
    };

    // cross-method confirmation on B ≥ 0
    let mut worst_cross: f64 = 0.0;
    for a in [0.25, 1.0, 4.0] {
        for b in [0.0, 2.0, 6.0] {
            let qp = QuantumPotential::new(a, b).unwrap();
            let xm = x_max(a, b);
            let ladder = [
                spectrum_fd(&qp, m, xm, 2000).unwrap(),
                spectrum_fd(&qp, m, xm, 4000).unwrap(),
            ];
            let fd_member = &equidistance_report(&ladder).members[0];
            let shoot = spectrum_shooting(&qp, 2, xm, 1e-9).unwrap();
            let rel = (fd_member.ground_state - shoot.eigenvalues[0]).abs()
                / shoot.eigenvalues[0];
            assert!(
                rel <= 1e-5,
                "A={a}, B={b}: fd↔shooting ground states differ by {rel:e}"
            );
            worst_cross = worst_cross.max(rel);
        }
    }

    // gap and ground-state laws across the full grid
    let mut worst_gap: f64 = 0.0;
    let mut worst_ground: f64 = 0.0;
    for a in [0.25, 1.0, 4.0] {
        for b in [-0.1875, 0.0, 2.0, 6.0] {
            let qp = QuantumPotential::new(a, b).unwrap();
            let xm = x_max(a, b);
            let (mean_gap, ground) = if b < 0.0 {
                let r = spectrum_shooting(&qp, m, xm, 1e-9).unwrap();
                (r.mean_gap(), r.eigenvalues[0])
            } else {
                let ladder = [
                    spectrum_fd(&qp, m, xm, 2000).unwrap(),
                    spectrum_fd(&qp, m, xm, 4000).unwrap(),
                ];
                let member = &equidistance_report(&ladder).members[0];
                assert!(!member.flagged, "A={a}, B={b} flagged as non-equidistant");
                (member.mean_gap, member.ground_state)
            };
            let gap_rel = (mean_gap - 4.0 * a.sqrt()).abs() / (4.0 * a.sqrt());
            assert!(gap_rel <= 1e-4, "A={a}, B={b}: gap error {gap_rel:e}");
            let e0 = oracle_e(a, b, 0);
            let ground_rel = (ground - e0).abs() / e0;
            assert!(ground_rel <= 1e-4, "A={a}, B={b}: E0 error {ground_rel:e}");
            worst_gap = worst_gap.max(gap_rel);
            worst_ground = worst_ground.max(ground_rel);
        }
    }
    pass(
        9,
        "quantum equidistance",
        format!(
            "fd↔shooting ≤ {worst_cross:.2e} (tol 1e-5); gap = 4√A to {worst_gap:.2e}, E0 law to {worst_ground:.2e} (tol 1e-4)"
        ),
    );
}

/// 10. Exact classifier and numeric period oracle agree on all 200 corpus
///     potentials at seed 7.
#[test]
fn criterion_10_corpus_cross_validation() {
    let start = std::time::Instant::now();
    let report = corpus::cross_validate(200, 7, 6);
    let elapsed = start.elapsed();
    assert_eq!(report.total, 200);
    assert!(
        report.disagreements.is_empty(),
        "disagreeing rows: {:#?}",
        report
            .disagreements
            .iter()
            .map(|&i| &report.rows[i])
            .collect::<Vec<_>>()
    );
    assert!(
        report.positive_verdicts >= 10,
        "only {} positive verdicts",
        report.positive_verdicts
    );
    assert!(
        elapsed.as_secs() <= 120,
        "corpus run took {elapsed:?} (budget 2 minutes)"
    );
    pass(
        10,
        "corpus cross-validation",
        format!(
            "200 potentials, {} positives, {} wells, zero disagreements in {:.1?}",
            report.positive_verdicts, report.wells_found, elapsed
        ),
    );
}
