//! The `coherent-clock` command line: overlaps, figure traces, clock traces,
//! symbol tables and the property suite.

pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classical::ClassicalConfig;
use crate::clock::{
    amplitude_correlation_in_chart, classical_limit_check, clock_symbol_q1, default_amplitude_sweep,
    default_phase_sweep, deparameterize, oscillator_energies, phase_correlation, Chart, CorrelationTrace,
};
use crate::coherent::{overlap, sample_xi, ReducedLabel};
use crate::quadrature::{GaugeGrid, RadialGrid};
use crate::symbols::{
    project_lower_symbol, radial_grid_for, reconstruct_operator, s3_lower_symbol, spin_symbols_closed_form, spin_symbols_from_matrices,
    upper_symbol, FullLowerSymbol,
};
use config::{RunConfig, Settings};
use output::{metadata, Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] crate::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Parser)]
#[command(name = "coherent-clock", version, about = "Coherent-state quantization of the constrained double oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML file with defaults for any of the flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// ⟨ξ′|ξ⟩ for one pair, a sweep of ξ′ (re|im|abs|arg), or --pairs random pairs
    Overlap,
    /// Correlation traces: 1 = amplitude ratio (sweep theta), 2 = phase (sweep dphi)
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Clock symbol against the classical trajectory over a tau grid
    ClockTrace,
    /// Upper and lower symbols at ξ or along a sweep of ξ (re|im|abs|arg)
    Symbols,
    /// Run the property suite; exit status 2 if anything fails
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Overlap => "overlap",
            Command::Figure { which: 1 } => "figure-1",
            Command::Figure { .. } => "figure-2",
            Command::ClockTrace => "clock-trace",
            Command::Symbols => "symbols",
            Command::Verify => "verify",
        }
    }
}

/// A rendered result plus whether it counts as success.
pub struct Report {
    pub text: String,
    pub rows: usize,
    pub passed: bool,
}

/// Parses `args` (program name first), runs, writes output, and returns the
/// exit status: 0 success, 1 usage error, 2 verification failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let file = match &cli.config {
        Some(path) => Settings::from_toml_file(path)?,
        None => Settings::default(),
    };
    let cfg = RunConfig::resolve(cli.settings.clone().over(file))?;
    let started = Instant::now();
    let report = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| render(&cli.command, &cfg))?,
        None => render(&cli.command, &cfg)?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, &report.text)?,
        None => std::io::stdout().lock().write_all(report.text.as_bytes())?,
    }
    eprintln!(
        "{}: {} rows in {:.3} s{}",
        cli.command.name(),
        report.rows,
        started.elapsed().as_secs_f64(),
        if report.passed { "" } else { ", FAILED" }
    );
    Ok(if report.passed { 0 } else { 2 })
}

/// Runs one command to its rendered output without touching the filesystem.
pub fn render(command: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    let (table, extra, passed) = match command {
        Command::Overlap => (cmd_overlap(cfg)?, Value::Null, true),
        Command::Figure { which: 1 } => {
            let (t, e) = cmd_figure_amplitude(cfg)?;
            (t, e, true)
        }
        Command::Figure { .. } => {
            let (t, e) = cmd_figure_phase(cfg)?;
            (t, e, true)
        }
        Command::ClockTrace => {
            let (t, e) = cmd_clock_trace(cfg)?;
            (t, e, true)
        }
        Command::Symbols => (cmd_symbols(cfg)?, Value::Null, true),
        Command::Verify => cmd_verify(cfg)?,
    };
    let text = table.render(cfg.format, metadata(command.name(), cfg, extra))?;
    Ok(Report {
        text,
        rows: table.len(),
        passed,
    })
}

fn vary(base: Complex64, var: &str, value: f64) -> Complex64 {
    match var {
        "re" => Complex64::new(value, base.im),
        "im" => Complex64::new(base.re, value),
        "abs" => Complex64::from_polar(value, base.arg()),
        "arg" => Complex64::from_polar(base.norm(), value),
        _ => unreachable!("sweep variable validated before use"),
    }
}

const XI_VARS: [&str; 4] = ["re", "im", "abs", "arg"];

fn cmd_overlap(cfg: &RunConfig) -> Result<Table, CliError> {
    let spin = cfg.spin();
    let xi = cfg.xi_or(Complex64::new(0.0, 0.0));
    let xi_prime = cfg.xi_prime_or(xi);
    let pairs: Vec<(Complex64, Complex64)> = if let Some(n) = cfg.pairs {
        if cfg.sweep.is_some() {
            return Err(CliError::Usage("--pairs and --sweep are exclusive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..n).map(|_| (sample_xi(&mut rng), sample_xi(&mut rng))).collect()
    } else if let Some(spec) = &cfg.sweep {
        spec.expect_var(&XI_VARS)?;
        spec.values().into_iter().map(|v| (xi, vary(xi_prime, &spec.var, v))).collect()
    } else {
        vec![(xi, xi_prime)]
    };
    let values: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(a, b)| overlap(&ReducedLabel::new(b, spin), &ReducedLabel::new(a, spin)))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&["xi_re", "xi_im", "xi_prime_re", "xi_prime_im", "re", "im", "abs"]);
    for ((a, b), o) in pairs.iter().zip(values) {
        table.push(vec![
            a.re.into(),
            a.im.into(),
            b.re.into(),
            b.im.into(),
            o.re.into(),
            o.im.into(),
            o.norm().into(),
        ]);
    }
    Ok(table)
}

fn trace_summary(t: &CorrelationTrace) -> Value {
    json!({
        "chart": t.chart,
        "reference": t.reference,
        "peak_at": t.peak_at,
        "argmax": t.argmax(),
        "sigma2_fit": t.fit.sigma_sqr,
        "sigma2_pred": t.sigma_sqr_pred,
        "width_ratio": t.width_ratio(),
        "fit_points": t.fit.points_used,
    })
}

fn cmd_figure_amplitude(cfg: &RunConfig) -> Result<(Table, Value), CliError> {
    let spin = cfg.spin();
    // Without an explicit reference, emit the equal-amplitude point Θ = π/4
    // and the caption's Θ = π/2, the latter on the antipodal chart.
    let references: Vec<(f64, Chart)> = match (cfg.theta, cfg.chart) {
        (Some(theta), chart) => vec![(theta, chart.map_or(Chart::Primary, Chart::from))],
        (None, Some(chart)) => vec![(FRAC_PI_4, chart.into())],
        (None, None) => vec![(FRAC_PI_4, Chart::Primary), (FRAC_PI_2, Chart::Antipodal)],
    };
    let mut table = Table::new(&[
        "chart", "theta_ref", "theta_prime", "overlap", "closed_form", "fitted", "sigma2_fit", "sigma2_pred",
    ]);
    let mut summaries = Vec::new();
    for (theta, chart) in references {
        let sweep = cfg.sweep_values(&["theta"], || default_amplitude_sweep(theta, spin))?;
        let trace = amplitude_correlation_in_chart(theta, spin, &sweep, chart).map_err(|e| match e {
            crate::Error::ChartPole { theta } => CliError::Usage(format!(
                "theta = {theta} is the pole of the {} chart; use --chart {}",
                if chart == Chart::Primary { "primary" } else { "antipodal" },
                if chart == Chart::Primary { "antipodal" } else { "primary" },
            )),
            other => other.into(),
        })?;
        let label = match chart {
            Chart::Primary => "primary",
            Chart::Antipodal => "antipodal",
        };
        for k in 0..trace.sweep.len() {
            table.push(vec![
                label.into(),
                theta.into(),
                trace.sweep[k].into(),
                trace.overlaps[k].into(),
                trace.closed_form[k].into(),
                trace.fitted(trace.sweep[k]).into(),
                trace.fit.sigma_sqr.into(),
                trace.sigma_sqr_pred.into(),
            ]);
        }
        summaries.push(trace_summary(&trace));
    }
    Ok((table, json!({ "traces": summaries })))
}

fn cmd_figure_phase(cfg: &RunConfig) -> Result<(Table, Value), CliError> {
    let spin = cfg.spin();
    let xi_mag = cfg.xi_or(Complex64::new(1.0, 0.0)).norm();
    let sweep = cfg.sweep_values(&["dphi"], || default_phase_sweep(xi_mag, spin))?;
    let trace = phase_correlation(xi_mag, spin, &sweep)?;
    let mut table = Table::new(&["xi_abs", "dphi", "overlap", "closed_form", "fitted", "sigma2_fit", "sigma2_pred"]);
    for k in 0..trace.sweep.len() {
        table.push(vec![
            xi_mag.into(),
            trace.sweep[k].into(),
            trace.overlaps[k].into(),
            trace.closed_form[k].into(),
            trace.fitted(trace.sweep[k]).into(),
            trace.fit.sigma_sqr.into(),
            trace.sigma_sqr_pred.into(),
        ]);
    }
    let (e1, e2) = oscillator_energies(xi_mag, spin);
    let mut summary = trace_summary(&trace);
    summary["e1"] = json!(e1);
    summary["e2"] = json!(e2);
    Ok((table, json!({ "traces": [summary] })))
}

fn cmd_clock_trace(cfg: &RunConfig) -> Result<(Table, Value), CliError> {
    let xi = cfg.xi_or(Complex64::new(1.0, 0.0));
    let taus = cfg.sweep_values(&["tau"], || cfg.default_tau_grid())?;
    let ms = cfg.m_list.clone().unwrap_or_else(|| vec![cfg.m_prime]);
    let omega = cfg.units.omega;
    let sym = FullLowerSymbol::q1_position();
    let mut table = Table::new(&["m", "tau", "quantum", "classical", "ratio", "deparameterized"]);
    for &m in &ms {
        let classical = ClassicalConfig::on_shell_from_label(xi, m, cfg.phi_prime, cfg.units);
        let radial = RadialGrid::with_default_order(m);
        let rows: Vec<[f64; 4]> = taus
            .par_iter()
            .map(|&tau| {
                let q = clock_symbol_q1(xi, m, tau, cfg.phi_prime, omega);
                let c = classical.trajectory(tau).q1;
                let d = deparameterize(&sym, xi, &radial, tau, cfg.phi_prime, omega);
                [q, c, q / c, d]
            })
            .collect();
        for (&tau, [q, c, r, d]) in taus.iter().zip(rows) {
            table.push(vec![m.into(), tau.into(), q.into(), c.into(), r.into(), d.into()]);
        }
    }
    let limit = if xi.norm() > 0.0 {
        let mut sorted = ms.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let report = classical_limit_check(xi, &sorted, &taus, cfg.phi_prime, cfg.units)?;
        let shrink: Vec<Value> = report
            .shrink_ratios()
            .into_iter()
            .map(|(measured, predicted)| json!({ "measured": measured, "predicted": predicted }))
            .collect();
        json!({ "report": report, "deviation_shrink": shrink })
    } else {
        Value::Null
    };
    // deparameterize(q₁)/clock_symbol_q1 is one global constant; report it
    let probe = Complex64::new(0.6, 0.8);
    let m0 = ms[0];
    let constant = deparameterize(&sym, probe, &RadialGrid::with_default_order(m0), 0.3, 0.0, 1.0)
        / clock_symbol_q1(probe, m0, 0.3, 0.0, 1.0);
    Ok((table, json!({ "classical_limit": limit, "deparameterize_constant": constant })))
}

fn cmd_symbols(cfg: &RunConfig) -> Result<Table, CliError> {
    let spin = cfg.spin();
    let m = spin.m_prime();
    let base = cfg.xi_or(Complex64::new(0.5, 0.5));
    let xis: Vec<Complex64> = match &cfg.sweep {
        Some(spec) => {
            spec.expect_var(&XI_VARS)?;
            spec.values().into_iter().map(|v| vary(base, &spec.var, v)).collect()
        }
        None => vec![base],
    };
    let gauge = GaugeGrid::default();
    let q2 = project_lower_symbol(&FullLowerSymbol::q2_position(), &RadialGrid::with_default_order(m), &gauge);
    let radius = FullLowerSymbol::radius();
    let radius = project_lower_symbol(&radius, &radial_grid_for(&radius, m), &gauge);
    let s3_lower = s3_lower_symbol(spin);
    // round trip: S₃ rebuilt from its lower symbol, read back as an upper symbol
    let s3_rebuilt = reconstruct_operator(&s3_lower, spin, &cfg.exact_sphere_grid()?);
    let mut table = Table::new(&[
        "xi_re", "xi_im", "s1", "s2", "s3", "s1_matrix", "s2_matrix", "s3_matrix", "s3_lower", "s3_rebuilt",
        "q2_projected", "radius_projected",
    ]);
    let rows: Vec<Vec<Cell>> = xis
        .par_iter()
        .map(|&xi| {
            let label = ReducedLabel::new(xi, spin);
            let closed = spin_symbols_closed_form(&label);
            let matrix = spin_symbols_from_matrices(&label);
            vec![
                xi.re.into(),
                xi.im.into(),
                closed.s1.into(),
                closed.s2.into(),
                closed.s3.into(),
                matrix.s1.into(),
                matrix.s2.into(),
                matrix.s3.into(),
                s3_lower.eval(xi).into(),
                upper_symbol(&s3_rebuilt, &label).expect("same sector").re.into(),
                q2.eval(xi).into(),
                radius.eval(xi).into(),
            ]
        })
        .collect();
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

fn cmd_verify(cfg: &RunConfig) -> Result<(Table, Value, bool), CliError> {
    let checks = verify::run_checks(cfg)?;
    let mut table = Table::new(&["module", "check", "measured", "relation", "bound", "pass"]);
    for c in &checks {
        table.push(vec![
            c.module.into(),
            c.name.into(),
            c.measured.into(),
            c.relation.symbol().into(),
            c.bound.into(),
            c.pass.into(),
        ]);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let passed = failed.is_empty();
    Ok((table, json!({ "checks": checks.len(), "failed": failed }), passed))
}
