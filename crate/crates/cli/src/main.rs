//! Command-line front end: config ingestion, subcommands mapping onto the
//! library operations, CSV/JSON emission.
//!
//! Exit codes: 0 success, 2 config error, 3 solver found no solution,
//! 4 oracle-validation failure.

mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use cavity_squeeze_core::cavity::{
    self, AtomParams, CavityParams, ProbePoint,
};
use cavity_squeeze_core::fourlevel::{
    compensation_detuning, fl_squeeze, fl_transmission, per_photon, two_color_solve,
    FourLevelPoint, RamanModel,
};
use cavity_squeeze_core::gaussian;
use cavity_squeeze_core::oracle;
use cavity_squeeze_core::qfi::{self, Chirp, DetectionSetup, TTotMode};
use cavity_squeeze_core::spinlight::{self, BudgetSpec};
use cavity_squeeze_core::sweep::{
    detection_scan, optimize_gain, scaling_fit, wineland_scan, ModelKind, ScanContext, ScanSpec,
    ScanVariable,
};
use cavity_squeeze_core::Error as CoreError;

use config::RunConfig;
use emit::Document;

#[derive(Parser)]
#[command(name = "cavity-squeeze", version, about = "Cavity spin-squeezing numerics")]
struct Cli {
    /// Path to the TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Emit one JSON document instead of CSV.
    #[arg(long, global = true)]
    json: bool,

    /// Write output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cavity transmission versus probe detuning (scan over x_a).
    Spectrum,
    /// One-pulse squeezing outcome at the configured probe point.
    Squeeze,
    /// Wineland-parameter scan over the configured scan variable.
    WinelandScan,
    /// Joint photon-number/detuning optimum of the Wineland parameter.
    Optimize,
    /// Optimal gain versus atom number with power-law fits (scan over
    /// n_atoms).
    Scaling,
    /// Readout variance versus detected photon number (scan over n_d).
    DetectionScan,
    /// Two-color compensation: red-pulse detuning and power ratio.
    TwoColor {
        /// Blue-pulse detuning from atomic resonance, as f in 2*pi x f MHz.
        #[arg(long, default_value_t = 7.333)]
        omega_l1_mhz: f64,
    },
    /// Lossless-network coefficients equivalent to the lossy cavity.
    MapLossless,
    /// Run the exact-oracle validation suite and print a pass/fail table.
    Validate,
}

/// CLI failure carrying its exit code.
enum CliError {
    /// Exit 2: configuration or usage problem.
    Config(String),
    /// Exit 3: a solver found no solution.
    NoSolution(String),
    /// Exit 4: oracle validation failed.
    Validation(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoSolution(m) => CliError::NoSolution(format!("no solution: {m}")),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("CAVITY_SQUEEZE_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("config error: CAVITY_SQUEEZE_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
        Err(CliError::NoSolution(m)) => {
            eprintln!("{m}");
            ExitCode::from(3)
        }
        Err(CliError::Validation(m)) => {
            eprintln!("{m}");
            ExitCode::from(4)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| {
        CliError::Config("config error: this subcommand requires --config PATH".into())
    })?;
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("config error: cannot read {}: {e}", path.display()))
    })?;
    Ok(RunConfig::from_toml(&text)?)
}

fn require_scan_variable(cfg: &RunConfig, expected: &str) -> Result<Vec<f64>, CliError> {
    let scan = cfg.scan.as_ref().ok_or_else(|| {
        CliError::Config(format!(
            "config error: scan section with variable = {expected:?} is required"
        ))
    })?;
    if scan.variable != expected {
        return Err(CliError::Config(format!(
            "config error: scan.variable: expected {expected:?}, got {:?}",
            scan.variable
        )));
    }
    Ok(cfg.grid().unwrap())
}

fn scan_context(cfg: &RunConfig) -> ScanContext {
    ScanContext {
        cav: cfg.cavity_params(),
        atoms: cfg.atom_params(),
        n_atoms: cfg.probe.n_atoms,
        budget: cfg.budget_spec(),
        tau: cfg.tau(),
        curvature: cfg.probe.curvature,
        model: if cfg.probe.model == "four_level" {
            ModelKind::FourLevel
        } else {
            ModelKind::ThreeLevel
        },
        x_a: cfg.probe.x_a,
        x_c: cfg.probe.x_c,
    }
}

fn emit(doc: &Document, cli: &Cli) -> Result<(), CliError> {
    doc.emit(cli.json, cli.out.as_deref())
        .map_err(|e| CliError::Config(format!("config error: cannot write output: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Spectrum => cmd_spectrum(cli),
        Cmd::Squeeze => cmd_squeeze(cli),
        Cmd::WinelandScan => cmd_wineland_scan(cli),
        Cmd::Optimize => cmd_optimize(cli),
        Cmd::Scaling => cmd_scaling(cli),
        Cmd::DetectionScan => cmd_detection_scan(cli),
        Cmd::TwoColor { omega_l1_mhz } => cmd_two_color(cli, *omega_l1_mhz),
        Cmd::MapLossless => cmd_map_lossless(cli),
        Cmd::Validate => cmd_validate(),
    }
}

fn cmd_spectrum(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let grid = require_scan_variable(&cfg, "x_a")?;
    let cav = cfg.cavity_params();
    let atoms = cfg.atom_params();
    let kappa = cav.kappa().map_err(CliError::from)?;
    let mut doc = Document::new(
        "spectrum",
        Some(&cfg),
        &["x_a", "x_c", "transmission_t0", "transmission_t"],
    );
    for &x_a in &grid {
        let x_c = cfg
            .probe
            .x_c
            .unwrap_or(x_a * atoms.gamma / kappa);
        let (t0, t) = if cfg.probe.model == "four_level" {
            let flp = FourLevelPoint::equator(&atoms, cfg.probe.n_atoms, x_a, x_c);
            fl_transmission(&cav, &flp)
        } else {
            let p = ProbePoint::new(x_a, x_c, cfg.probe.n_atoms / 2.0, cfg.budget_spec(), cfg.tau());
            cavity::transmission(&cav, &atoms, &p)
        };
        doc.push(vec![x_a, x_c, t0, t]);
    }
    emit(&doc, cli)
}

fn cmd_squeeze(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let cav = cfg.cavity_params();
    let atoms = cfg.atom_params();
    let kappa = cav.kappa().map_err(CliError::from)?;
    let x_a = cfg.probe.x_a;
    let x_c = cfg.probe.x_c.unwrap_or(x_a * atoms.gamma / kappa);
    let n = cfg.probe.n_atoms;
    let (q, f, delta_phi, n_in, n_t, n_sc) = if cfg.probe.model == "four_level" {
        let flp = FourLevelPoint::equator(&atoms, n, x_a, x_c);
        let pp = per_photon(&cav, &flp);
        let sc = pp.n_sc_up + pp.n_sc_down;
        let n_in = match cfg.budget_spec() {
            BudgetSpec::NIn(v) => v,
            BudgetSpec::NT(v) => v / pp.n_t,
            BudgetSpec::NSc(v) if sc > 0.0 => v / sc,
            BudgetSpec::NSc(v) if v == 0.0 => 0.0,
            _ => {
                return Err(CliError::Config(
                    "config error: probe.budget: four-level squeeze supports n_in, n_t \
                     or n_sc"
                        .into(),
                ))
            }
        };
        let (dphi, q, f) = fl_squeeze(&cav, &flp, n_in);
        (q, f, dphi, n_in, pp.n_t * n_in, sc * n_in)
    } else {
        let p = ProbePoint::new(x_a, x_c, n / 2.0, cfg.budget_spec(), cfg.tau());
        let b = spinlight::photon_budget(&cav, &atoms, &p)?;
        let eff = spinlight::shearing(&cav, &atoms, &p, &b)?;
        let f = qfi::total_f(&cav, &atoms, &p, &b);
        let dphi = spinlight::phase_shift(&cav, &atoms, &p, &b)?;
        (eff.q, f, dphi, b.n_in, b.n_t, b.n_sc)
    };
    let outcome = gaussian::squeeze_outcome(q, f, delta_phi, n_sc, n, cfg.probe.curvature)?;
    let mut doc = Document::new(
        "squeeze",
        Some(&cfg),
        &[
            "q",
            "f",
            "delta_phi_rad",
            "contrast",
            "xi2_ku",
            "xi2_wineland",
            "n_in",
            "n_t",
            "n_sc",
        ],
    );
    doc.push(vec![
        outcome.q,
        outcome.f,
        outcome.delta_phi,
        outcome.contrast,
        outcome.xi2_ku,
        outcome.xi2_wineland,
        n_in,
        n_t,
        n_sc,
    ]);
    emit(&doc, cli)
}

fn cmd_wineland_scan(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let scan = cfg.scan.as_ref().ok_or_else(|| {
        CliError::Config("config error: wineland-scan requires a scan section".into())
    })?;
    let variable = match scan.variable.as_str() {
        "x_a" => ScanVariable::XA,
        "n_sc" => ScanVariable::NSc,
        "n_atoms" => ScanVariable::NAtoms,
        other => {
            return Err(CliError::Config(format!(
                "config error: scan.variable: wineland-scan supports x_a, n_sc or \
                 n_atoms, got {other:?}"
            )))
        }
    };
    let spec = ScanSpec {
        variable,
        grid: cfg.grid().unwrap(),
        context: scan_context(&cfg),
    };
    let result = wineland_scan(&spec)?;
    let mut doc = Document::new(
        "wineland-scan",
        Some(&cfg),
        &[
            &scan.variable,
            "q",
            "f",
            "delta_phi_rad",
            "contrast",
            "xi2_ku",
            "xi2_wineland",
            "n_t",
            "n_sc",
        ],
    );
    for r in &result.rows {
        doc.push(vec![
            r.value, r.q, r.f, r.delta_phi, r.contrast, r.xi2_ku, r.xi2, r.n_t, r.n_sc,
        ]);
    }
    emit(&doc, cli)
}

fn cmd_optimize(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let cav = cfg.cavity_params();
    let atoms = cfg.atom_params();
    let opt = optimize_gain(&cav, &atoms, cfg.probe.n_atoms, cfg.probe.curvature)?;
    let mut doc = Document::new(
        "optimize",
        Some(&cfg),
        &["n_atoms", "x_a_opt", "n_sc_opt", "p_opt", "xi2_opt", "gain_opt"],
    );
    doc.push(vec![
        cfg.probe.n_atoms,
        opt.x_a,
        opt.n_sc,
        opt.p,
        opt.xi2,
        1.0 / opt.xi2,
    ]);
    emit(&doc, cli)
}

fn cmd_scaling(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let grid = require_scan_variable(&cfg, "n_atoms")?;
    let cav = cfg.cavity_params();
    let atoms = cfg.atom_params();
    let mut doc = Document::new(
        "scaling",
        Some(&cfg),
        &["n_atoms", "x_a_opt", "n_sc_opt", "p_opt", "xi2_opt", "gain_opt"],
    );
    let mut gain_pts = Vec::with_capacity(grid.len());
    let mut xa_pts = Vec::with_capacity(grid.len());
    for &n in &grid {
        let opt = optimize_gain(&cav, &atoms, n, cfg.probe.curvature)?;
        doc.push(vec![n, opt.x_a, opt.n_sc, opt.p, opt.xi2, 1.0 / opt.xi2]);
        gain_pts.push((n, 1.0 / opt.xi2));
        xa_pts.push((n, opt.x_a));
    }
    let (g_slope, g_err) = scaling_fit(&gain_pts)?;
    let (x_slope, x_err) = scaling_fit(&xa_pts)?;
    doc.meta.insert("gain_exponent".into(), g_slope);
    doc.meta.insert("gain_exponent_stderr".into(), g_err);
    doc.meta.insert("x_a_exponent".into(), x_slope);
    doc.meta.insert("x_a_exponent_stderr".into(), x_err);
    emit(&doc, cli)
}

fn cmd_detection_scan(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let grid = require_scan_variable(&cfg, "n_d")?;
    let cav = cfg.cavity_params();
    let atoms = cfg.atom_params();
    let kappa = cav.kappa().map_err(CliError::from)?;
    let n = cfg.probe.n_atoms;
    // Compensated carrier: x_c = 0, x_a at the light-shift-cancelling
    // detuning, chirp sidebands at the vacuum Rabi frequency.
    let delta_c = if atoms.eta_down > 0.0 {
        compensation_detuning(&cav, &atoms, n / 2.0)?
    } else {
        0.0
    };
    let g = (atoms.eta_up * kappa * atoms.gamma).sqrt() / 2.0;
    let omega_m = g * (n / 2.0).sqrt();
    let carrier = ProbePoint::new(
        -2.0 * delta_c / atoms.gamma,
        cfg.probe.x_c.unwrap_or(0.0),
        n / 2.0,
        BudgetSpec::NIn(1.0),
        cfg.tau(),
    );
    let setup = DetectionSetup {
        t_tot_mode: TTotMode::TransmissionReflection,
        q_eff: cfg.probe.q_eff,
        chirp: Some(Chirp { omega_m }),
    };
    let raman = RamanModel {
        rate_down_up: None,
        branching: cfg.atoms.branching,
    };
    let result = detection_scan(&cav, &atoms, &carrier, &setup, &raman, &grid)?;
    let mut doc = Document::new(
        "detection-scan",
        Some(&cfg),
        &["n_d", "n_in", "sigma_sq_sql", "sigma_sq_db"],
    );
    for r in &result.rows {
        doc.push(vec![r.n_d, r.n_in, r.sigma_sq, r.db]);
    }
    let min = result.rows[result.min_index];
    doc.meta.insert("carrier_x_a".into(), carrier.x_a);
    doc.meta.insert("omega_m_2pi_mhz".into(), omega_m);
    doc.meta.insert("min_n_d".into(), min.n_d);
    doc.meta.insert("min_sigma_sq_db".into(), min.db);
    emit(&doc, cli)
}

fn cmd_two_color(cli: &Cli, omega_l1_mhz: f64) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let cav = cfg.cavity_params();
    let atoms = cfg.atom_params();
    // Internal frequencies are numerically the MHz value of 2*pi x f.
    let pulse = two_color_solve(&cav, &atoms, cfg.probe.n_atoms, omega_l1_mhz, None)?;
    let mut doc = Document::new(
        "two-color",
        Some(&cfg),
        &[
            "omega_l1_2pi_mhz",
            "omega_l2_2pi_mhz",
            "gamma_ratio",
            "q_hat_1",
            "q_hat_2",
            "f_hat_1",
            "f_hat_2",
            "dphi_hat_1",
            "dphi_hat_2",
            "combined_q_over_f",
        ],
    );
    doc.push(vec![
        pulse.omega_l1,
        pulse.omega_l2,
        pulse.gamma_ratio,
        pulse.q_hat[0],
        pulse.q_hat[1],
        pulse.f_hat[0],
        pulse.f_hat[1],
        pulse.dphi_hat[0],
        pulse.dphi_hat[1],
        pulse.combined_q_over_f(),
    ]);
    emit(&doc, cli)
}

fn cmd_map_lossless(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let cav = cfg.cavity_params();
    let map = cavity::map_lossless(&cav)?;
    let mut doc = Document::new(
        "map-lossless",
        Some(&cfg),
        &[
            "t1_star",
            "t2_star",
            "t3_star",
            "t4_star",
            "t5_star",
            "r1_star",
            "r2_star",
        ],
    );
    // Power coefficients (squares of the amplitude coefficients).
    doc.push(vec![
        map.t1s * map.t1s,
        map.t2s * map.t2s,
        map.t3s * map.t3s,
        map.t4s * map.t4s,
        map.t5s * map.t5s,
        map.r1s * map.r1s,
        map.r2s * map.r2s,
    ]);
    emit(&doc, cli)
}

/// Oracle validation suite: each check compares a closed-form quantity
/// against an independent exact or finite-difference computation.
fn cmd_validate() -> Result<(), CliError> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| {
        if ok {
            println!("PASS {name}: {detail}");
        } else {
            println!("FAIL {name}: {detail}");
            failures += 1;
        }
    };

    // Dicke coherent state: unit norm, zero Sz, maximal total spin.
    {
        let n = 400usize;
        let s = oracle::css(n, std::f64::consts::FRAC_PI_2, 0.0)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let spin = n as f64 / 2.0;
        let ok = (s.norm_sqr() - 1.0).abs() < 1e-9
            && s.sz_mean().abs() < 1e-9
            && (s.total_spin_sq() - spin * (spin + 1.0)).abs() < 1e-6 * spin * spin;
        check(
            "dicke-css",
            ok,
            format!("norm {:.3e}, <Sz> {:.3e}", s.norm_sqr() - 1.0, s.sz_mean()),
        );
    }

    // Squeezed variance: dense angle scan vs closed form.
    {
        let (q, f) = (5.0, 10.0);
        let (min, _, _) = oracle::variance_alpha_scan(q, f, 4000)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let ku = gaussian::xi2_ku(q, f).map_err(|e| CliError::Validation(e.to_string()))?;
        let err = (min - ku.minus).abs() / ku.minus;
        check("alpha-scan", err < 1e-4, format!("relative error {err:.3e}"));
    }

    // Coherent-state QFI vs fidelity finite difference.
    {
        let v = Complex64::new(1.0, 2.0);
        let alpha = move |x: f64| Complex64::new(0.7, -0.3) + v * x;
        let exact = qfi::coherent_qfi(v);
        let fid = oracle::fidelity_qfi(alpha, 0.1, 1e-4)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let err = (fid - exact).abs() / exact;
        check("fidelity-qfi", err < 1e-6, format!("relative error {err:.3e}"));
    }

    // Poisson counting Fisher information vs amplitude QFI.
    {
        let alpha = |x: f64| Complex64::new(2.0 + 0.7 * x, 0.0);
        let lambda = |x: f64| alpha(x).norm_sqr();
        let split = qfi::qfi_split(alpha(0.0), Complex64::new(0.7, 0.0));
        let fc = oracle::poisson_fisher(lambda, 0.0, 1e-6)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let err = (fc - split.amplitude).abs() / split.amplitude;
        check("poisson-fisher", err < 1e-5, format!("relative error {err:.3e}"));
    }

    // Gaussian Bloch contrast vs exact one-axis-twisting contrast.
    {
        let n = 100usize;
        let q = (2.0 * n as f64).sqrt() * 0.5;
        let exact = oracle::oat_exact_contrast(n, q)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let gauss = gaussian::contrast(q, 0.0, n as f64)
            .map_err(|e| CliError::Validation(e.to_string()))?
            .bloch;
        let err = (gauss - exact).abs() / exact.abs();
        check("oat-contrast", err < 0.05, format!("relative error {err:.3e}"));
    }

    // Microscopic effective detuning vs -Omega * n_c.
    {
        let (kappa, gamma) = (0.52, 0.184);
        let cav = CavityParams::lossless(30e-6, 453.3e-6, kappa);
        let atoms = AtomParams::three_level(gamma, 1.8);
        let g = (atoms.eta * kappa * gamma).sqrt() / 2.0;
        let inp = oracle::EffectiveDetuningInput {
            g,
            kappa,
            gamma,
            t1: cav.t1,
            t2: cav.t2,
            n_up: 500.0,
            x_a: 30.0,
            x_c: 5.0,
            beta_sq: 100.0,
        };
        let d = oracle::effective_detuning(&inp)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let p = ProbePoint::new(30.0, 5.0, 500.0, BudgetSpec::NIn(100.0), 1.0);
        let b = spinlight::photon_budget(&cav, &atoms, &p)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let omega = spinlight::light_shift_per_photon(&cav, &atoms, &p)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let expect = -omega * b.n_c;
        let err = (d.delta_eff - expect).abs() / expect.abs();
        check("effective-detuning", err < 1e-6, format!("relative error {err:.3e}"));
    }

    if failures > 0 {
        Err(CliError::Validation(format!(
            "oracle validation: {failures} check(s) failed"
        )))
    } else {
        println!("oracle validation: all checks passed");
        Ok(())
    }
}
