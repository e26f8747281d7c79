//! Command-line frontend: classification, period scans, simulations,
//! spectra, and the exact-vs-numeric cross-validation harness.
//!
//! Exit codes: 0 success (including negative classification verdicts),
//! 1 I/O, parse or internal errors, 2 no usable well, 3 integrator failure,
//! 4 spectrum parameter range, and 1 for a cross-validation run with
//! disagreements.

use clap::{Parser, Subcommand, ValueEnum};
use isochrony::classify::classify;
use isochrony::corpus;
use isochrony::dynamics::{
    self, integrate_1d, integrate_cm, measure_period, CMSystem, State1D, StateND,
};
use isochrony::io::{fmt_f64, PotentialSpec};
use isochrony::period::{
    delta_criterion, find_well, isochronicity_scan, period_at, PeriodError, PeriodSample, Well,
};
use isochrony::potential::EvaluablePotential;
use isochrony::quantum::{
    equidistance_report, spectrum_fd, spectrum_shooting, QuantumPotential, SpectrumResult,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "isochrony",
    about = "Exact classification of rational isochronous potentials with numeric cross-checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the summary JSON to this path (it is always printed to stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write CSV output to this path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Suppress informational messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact classification of a rational potential.
    Classify {
        /// Potential spec JSON file ({"kind":"rational","num":[...],"den":[...]}).
        input: PathBuf,
    },
    /// Period function scan (or barrier divergence probe) of a potential.
    Scan {
        /// Potential spec JSON file (rational or builtin).
        input: PathBuf,
        #[arg(long)]
        emin: Option<f64>,
        #[arg(long)]
        emax: Option<f64>,
        /// Number of sampled energies.
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Point believed to lie inside the well of interest.
        #[arg(long, allow_hyphen_values = true)]
        well_hint: Option<f64>,
    },
    /// Branch-difference criterion at one energy.
    Delta {
        input: PathBuf,
        #[arg(long)]
        energy: f64,
        /// Reference period; defaults to the measured period at --energy.
        #[arg(long)]
        t_target: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        well_hint: Option<f64>,
    },
    /// Hamiltonian trajectory of a 1-D potential or the n-particle chain.
    Simulate {
        /// Potential spec JSON file (1-D mode).
        #[arg(long, conflicts_with = "cm")]
        potential: Option<PathBuf>,
        /// Chain parameters: n omega C.
        #[arg(long, num_args = 3, value_names = ["N", "OMEGA", "C"])]
        cm: Option<Vec<String>>,
        /// Initial position (1-D mode).
        #[arg(long, allow_hyphen_values = true)]
        q0: Option<f64>,
        /// Initial momentum (1-D mode).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        p0: f64,
        /// Initial positions, comma separated (chain mode).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        /// Initial momenta, comma separated (chain mode).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mom0: Option<Vec<f64>>,
        #[arg(long)]
        tend: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, allow_hyphen_values = true)]
        well_hint: Option<f64>,
    },
    /// Spectrum of -d²/dx² + A·x² + B/x² on the half-line.
    Spectrum {
        #[arg(long = "A")]
        a: f64,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: f64,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, value_enum)]
        method: Method,
        /// Domain cutoff (defaults to a size fitted to A, B and m).
        #[arg(long)]
        x_max: Option<f64>,
        /// Grid points for the finite-difference method.
        #[arg(long)]
        n_points: Option<usize>,
        /// Eigenvalue tolerance for the shooting method.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Cross-validate the exact classifier against the period oracle on a
    /// seeded random corpus.
    Crossvalidate {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fd,
    Shooting,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    match &cli.command {
        Command::Classify { input } => cmd_classify(cli, input),
        Command::Scan {
            input,
            emin,
            emax,
            n,
            well_hint,
        } => cmd_scan(cli, input, *emin, *emax, *n, *well_hint),
        Command::Delta {
            input,
            energy,
            t_target,
            well_hint,
        } => cmd_delta(cli, input, *energy, *t_target, *well_hint),
        Command::Simulate {
            potential,
            cm,
            q0,
            p0,
            x0,
            mom0,
            tend,
            tol,
            well_hint,
        } => cmd_simulate(
            cli, potential, cm, *q0, *p0, x0, mom0, *tend, *tol, *well_hint,
        ),
        Command::Spectrum {
            a,
            b,
            m,
            method,
            x_max,
            n_points,
            tol,
        } => cmd_spectrum(cli, *a, *b, *m, *method, *x_max, *n_points, *tol),
        Command::Crossvalidate {
            count,
            seed,
            max_deg,
        } => cmd_crossvalidate(cli, *count, *seed, *max_deg),
    }
}

fn load_spec(path: &Path) -> Result<PotentialSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {}", path.display(), e)))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new(1, format!("cannot parse {}: {}", path.display(), e)))
}

fn emit_json(cli: &Cli, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    println!("{}", text);
    if let Some(path) = &cli.json {
        std::fs::write(path, text.as_bytes())
            .map_err(|e| Failure::new(1, format!("cannot write {}: {}", path.display(), e)))?;
    }
    Ok(())
}

fn emit_csv(cli: &Cli, header: &str, rows: &[String]) -> Result<(), Failure> {
    if let Some(path) = &cli.csv {
        let mut text = String::from(header);
        text.push('\n');
        for row in rows {
            text.push_str(row);
            text.push('\n');
        }
        std::fs::write(path, text.as_bytes())
            .map_err(|e| Failure::new(1, format!("cannot write {}: {}", path.display(), e)))?;
    }
    Ok(())
}

fn note(cli: &Cli, message: impl AsRef<str>) {
    if !cli.quiet {
        eprintln!("{}", message.as_ref());
    }
}

fn cmd_classify(cli: &Cli, input: &Path) -> Result<ExitCode, Failure> {
    let spec = load_spec(input)?;
    let (rational, reduced) = spec
        .to_rational()
        .map_err(|e| Failure::new(1, e.to_string()))?;
    if reduced {
        note(cli, format!("input reduced to lowest terms: {}", rational));
    }
    let verdict = classify(&rational);
    let value = serde_json::to_value(&verdict).expect("serializable");
    emit_json(cli, &value)?;
    // any verdict is a successful classification
    Ok(ExitCode::SUCCESS)
}

fn well_or_exit2(u: &EvaluablePotential) -> Result<Well, Failure> {
    find_well(u).map_err(|e| match e {
        PeriodError::NoMinimumFound | PeriodError::NotAMinimum { .. } => {
            Failure::new(2, e.to_string())
        }
        other => Failure::new(1, other.to_string()),
    })
}

fn sample_csv_row(s: &PeriodSample) -> String {
    format!(
        "{},{},{},{}",
        fmt_f64(s.energy),
        fmt_f64(s.period),
        fmt_f64(s.err_estimate),
        s.diverged
    )
}

fn cmd_scan(
    cli: &Cli,
    input: &Path,
    emin: Option<f64>,
    emax: Option<f64>,
    n: usize,
    well_hint: Option<f64>,
) -> Result<ExitCode, Failure> {
    let spec = load_spec(input)?;
    let u = spec
        .to_evaluable(well_hint)
        .map_err(|e| Failure::new(1, e.to_string()))?;
    let well = well_or_exit2(&u)?;

    if emin.is_none() && emax.is_none() && well.e_max.is_finite() {
        // barrier-bounded well with no requested range: probe the divergence
        let mut rows = Vec::new();
        let mut samples = Vec::new();
        for k in 1..=6 {
            let eps = 10f64.powi(-k);
            let energy = well.e_max * (1.0 - eps) + well.u_min * eps;
            let sample =
                period_at(&u, &well, energy).map_err(|e| Failure::new(1, e.to_string()))?;
            rows.push(sample_csv_row(&sample));
            samples.push(sample);
        }
        emit_csv(cli, "energy,period,err_estimate,diverged", &rows)?;
        let increasing = samples.windows(2).all(|w| w[1].period > w[0].period);
        let value = json!({
            "mode": "divergence_probe",
            "well": well,
            "periods_strictly_increasing": increasing,
            "samples": samples,
        });
        emit_json(cli, &value)?;
        return Ok(ExitCode::SUCCESS);
    }

    let scale = 1.0f64.max(well.u_min.abs());
    let lo = emin.unwrap_or(well.u_min + 0.1 * scale);
    let hi = emax.unwrap_or_else(|| {
        let cap = if well.e_max.is_finite() {
            well.u_min + 0.9 * (well.e_max - well.u_min)
        } else {
            f64::INFINITY
        };
        (well.u_min + (lo - well.u_min) * 100.0).min(cap)
    });
    let scan = isochronicity_scan(&u, &well, lo, hi, n.max(3))
        .map_err(|e| Failure::new(1, e.to_string()))?;
    let rows: Vec<String> = scan.samples.iter().map(sample_csv_row).collect();
    emit_csv(cli, "energy,period,err_estimate,diverged", &rows)?;
    let value = json!({
        "mode": "isochronicity_scan",
        "well": well,
        "e_lo": lo,
        "e_hi": hi,
        "n": scan.samples.len(),
        "max_rel_period_spread": scan.max_rel_period_spread,
        "first_period": scan.samples[0].period,
    });
    emit_json(cli, &value)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_delta(
    cli: &Cli,
    input: &Path,
    energy: f64,
    t_target: Option<f64>,
    well_hint: Option<f64>,
) -> Result<ExitCode, Failure> {
    let spec = load_spec(input)?;
    let u = spec
        .to_evaluable(well_hint)
        .map_err(|e| Failure::new(1, e.to_string()))?;
    let well = well_or_exit2(&u)?;
    let t_target = match t_target {
        Some(t) => t,
        None => {
            period_at(&u, &well, energy)
                .map_err(|e| Failure::new(1, e.to_string()))?
                .period
        }
    };
    let (delta, delta_harmonic) = delta_criterion(&u, &well, energy, t_target)
        .map_err(|e| Failure::new(1, e.to_string()))?;
    let value = json!({
        "energy": energy,
        "t_target": t_target,
        "delta": delta,
        "delta_harmonic": delta_harmonic,
        "difference": delta - delta_harmonic,
    });
    emit_json(cli, &value)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cli: &Cli,
    potential: &Option<PathBuf>,
    cm: &Option<Vec<String>>,
    q0: Option<f64>,
    p0: f64,
    x0: &Option<Vec<f64>>,
    mom0: &Option<Vec<f64>>,
    tend: f64,
    tol: f64,
    well_hint: Option<f64>,
) -> Result<ExitCode, Failure> {
    match (potential, cm) {
        (Some(path), None) => {
            let spec = load_spec(path)?;
            let q0 = q0.ok_or_else(|| Failure::new(1, "--q0 is required in 1-D mode"))?;
            let u = spec
                .to_evaluable(well_hint.or(Some(q0)))
                .map_err(|e| Failure::new(1, e.to_string()))?;
            let traj = integrate_1d(&u, &State1D::new(q0, p0), tend, tol)
                .map_err(|e| Failure::new(3, e.to_string()))?;
            let rows: Vec<String> = traj
                .samples()
                .map(|(t, y)| format!("{},{},{}", fmt_f64(t), fmt_f64(y[0]), fmt_f64(y[1])))
                .collect();
            emit_csv(cli, "t,q,p", &rows)?;
            let section = find_well(&u).map(|w| w.x_min).unwrap_or(q0);
            let measured = measure_period(&traj, section).ok();
            let value = json!({
                "mode": "1d",
                "energy_drift": traj.energy_drift,
                "measured_period": measured,
                "section": section,
                "steps": traj.solution.nodes.len(),
            });
            emit_json(cli, &value)?;
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(args)) => {
            let n: usize = args[0]
                .parse()
                .map_err(|_| Failure::new(1, format!("bad particle count {:?}", args[0])))?;
            let omega: f64 = args[1]
                .parse()
                .map_err(|_| Failure::new(1, format!("bad omega {:?}", args[1])))?;
            let c: f64 = args[2]
                .parse()
                .map_err(|_| Failure::new(1, format!("bad coupling {:?}", args[2])))?;
            let sys = CMSystem::new(n, omega, c).map_err(|e| Failure::new(1, e.to_string()))?;
            let x0 = x0
                .clone()
                .ok_or_else(|| Failure::new(1, "--x0 is required in chain mode"))?;
            let mom0 = mom0
                .clone()
                .ok_or_else(|| Failure::new(1, "--mom0 is required in chain mode"))?;
            if x0.len() != n || mom0.len() != n {
                return Err(Failure::new(
                    1,
                    format!("expected {} positions and momenta", n),
                ));
            }
            let s0 = StateND::new(x0, mom0).map_err(|e| Failure::new(1, e.to_string()))?;
            let traj =
                integrate_cm(&sys, &s0, tend, tol).map_err(|e| Failure::new(3, e.to_string()))?;
            let header = {
                let xs: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
                let ps: Vec<String> = (1..=n).map(|i| format!("p{}", i)).collect();
                format!("t,{},{}", xs.join(","), ps.join(","))
            };
            let rows: Vec<String> = traj
                .samples()
                .map(|(t, y)| {
                    let mut row = fmt_f64(t);
                    for v in y {
                        row.push(',');
                        row.push_str(&fmt_f64(*v));
                    }
                    row
                })
                .collect();
            emit_csv(cli, &header, &rows)?;
            let value = json!({
                "mode": "cm",
                "energy_drift": traj.energy_drift,
                "return_distance": dynamics::return_distance(&traj, &s0.x, &s0.p),
                "reflected_return_distance":
                    dynamics::reflected_return_distance(&traj, &s0.x, &s0.p),
                "steps": traj.solution.nodes.len(),
            });
            emit_json(cli, &value)?;
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(Failure::new(
            1,
            "exactly one of --potential or --cm must be given",
        )),
    }
}

fn cmd_spectrum(
    cli: &Cli,
    a: f64,
    b: f64,
    m: usize,
    method: Method,
    x_max: Option<f64>,
    n_points: Option<usize>,
    tol: f64,
) -> Result<ExitCode, Failure> {
    let qp = QuantumPotential::new(a, b).map_err(|e| Failure::new(4, e.to_string()))?;
    if matches!(method, Method::Fd) && b < 0.0 {
        return Err(Failure::new(
            4,
            "the finite-difference method requires B >= 0; use --method shooting",
        ));
    }
    // domain sizing heuristic: reach ~2.3× past the top classical turning
    // point so the eigenfunction tail is negligible at the cutoff
    let e_top_guess = a.sqrt() * (4.0 * m as f64 + 2.0 + (1.0 + 4.0 * b.max(0.0)).sqrt());
    let default_x_max = 2.3 * (e_top_guess / a).sqrt();
    let x_max = x_max.unwrap_or(default_x_max);

    let results: Vec<SpectrumResult> = match method {
        Method::Fd => {
            let n = n_points.unwrap_or(3000);
            vec![
                spectrum_fd(&qp, m, x_max, n).map_err(|e| Failure::new(4, e.to_string()))?,
                spectrum_fd(&qp, m, x_max, 2 * n).map_err(|e| Failure::new(4, e.to_string()))?,
            ]
        }
        Method::Shooting => vec![
            spectrum_shooting(&qp, m, x_max, tol).map_err(|e| Failure::new(4, e.to_string()))?,
        ],
    };

    let finest = results.last().expect("at least one result");
    let mut rows = Vec::with_capacity(finest.eigenvalues.len());
    for (i, ev) in finest.eigenvalues.iter().enumerate() {
        let gap = if i == 0 {
            String::new()
        } else {
            fmt_f64(finest.gaps[i - 1])
        };
        rows.push(format!("{},{},{}", i, fmt_f64(*ev), gap));
    }
    emit_csv(cli, "n,eigenvalue,gap", &rows)?;

    let report = equidistance_report(&results);
    let value = json!({
        "spectra": results,
        "report": report,
    });
    emit_json(cli, &value)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_crossvalidate(
    cli: &Cli,
    count: usize,
    seed: u64,
    max_deg: usize,
) -> Result<ExitCode, Failure> {
    if count < 1 {
        return Err(Failure::new(1, "--count must be at least 1"));
    }
    let report = corpus::cross_validate(count, seed, max_deg);
    let value = serde_json::to_value(&report).expect("serializable");
    emit_json(cli, &value)?;
    if report.disagreements.is_empty() {
        note(
            cli,
            format!(
                "{} potentials, {} positive verdicts, no disagreements",
                report.total, report.positive_verdicts
            ),
        );
        Ok(ExitCode::SUCCESS)
    } else {
        note(
            cli,
            format!(
                "{} disagreements out of {} rows",
                report.disagreements.len(),
                report.total
            ),
        );
        Ok(ExitCode::FAILURE)
    }
}
