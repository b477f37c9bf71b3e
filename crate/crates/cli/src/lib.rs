//! Command-line front end: argument parsing, file loading and report output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use qnetmax::classify::{self, ScanFamily};
use qnetmax::correlations::{self, BilocalSettings};
use qnetmax::oracle::CentralClass;
use qnetmax::qstate::{self, MeasurementVector, TwoQubitState};
use qnetmax::report::{self, json_num};
use qnetmax::swap;

pub mod verify;

pub use verify::{Suite, VerifySummary};

/// Exit code for a verification suite with failing instances.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qnetmax", version, about = "Maximal bilocality and n-locality violations for two-qubit sources")]
pub struct Cli {
    /// Seed for every random draw; falls back to QNETMAX_SEED, then 0.
    #[arg(long, global = true, env = "QNETMAX_SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form maxima for one or more source states (JSON report).
    Analyze {
        /// State files, one per source.
        #[arg(required = true)]
        states: Vec<PathBuf>,
    },
    /// Classify a grid of family parameters (CSV).
    Scan {
        #[arg(long, value_parser = parse_family)]
        family: ScanFamily,
        /// `start:stop:step[,start:stop:step]`
        #[arg(long)]
        grid: String,
    },
    /// Check a closed form or property against random instances.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Central measurements searched by the theorem3/theorem4 suites.
        #[arg(long, default_value = "separable", value_parser = parse_central)]
        central: CentralClass,
    },
    /// Simulate entanglement swapping with a Bell-state measurement.
    SwapSim {
        state_ab: PathBuf,
        state_bc: PathBuf,
        /// Leaf settings JSON; defaults to the Branciard settings.
        #[arg(long)]
        settings: Option<PathBuf>,
    },
}

fn parse_central(s: &str) -> std::result::Result<CentralClass, String> {
    s.parse().map_err(|e: qnetmax::Error| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<ScanFamily, String> {
    s.parse().map_err(|e: qnetmax::Error| e.to_string())
}

/// Run a parsed command, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match &cli.command {
        Command::Analyze { states } => run_analyze(states, cli.seed, out).map(|_| 0),
        Command::Scan { family, grid } => run_scan(*family, grid, out).map(|_| 0),
        Command::Verify { suite, instances, restarts, central } => {
            run_verify(*suite, cli.seed, *instances, *restarts, *central, out)
                .map(|s| if s.ok { 0 } else { EXIT_VERIFY_FAILED })
        }
        Command::SwapSim { state_ab, state_bc, settings } => {
            run_swap_sim(state_ab, state_bc, settings.as_deref(), cli.seed, out, err).map(|_| 0)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT_ERROR
        }
    }
}

pub fn load_state(path: &Path) -> Result<TwoQubitState> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let state = qstate::parse_state(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(match state.label() {
        Some(_) => state,
        None => {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            state.with_label(name)
        }
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn run_analyze(paths: &[PathBuf], seed: u64, out: &mut dyn Write) -> Result<()> {
    let states = paths.iter().map(|p| load_state(p)).collect::<Result<Vec<_>>>()?;
    let report = report::analyze(&states, seed)?;
    write_json(out, &report)
}

pub fn run_scan(family: ScanFamily, grid: &str, out: &mut dyn Write) -> Result<()> {
    let points = classify::parse_grid(grid)?;
    let rows = classify::scan(family, &points)?;
    out.write_all(classify::scan_csv(family, &rows).as_bytes())?;
    Ok(())
}

pub fn run_verify(
    suite: Suite,
    seed: u64,
    instances: usize,
    restarts: usize,
    central: CentralClass,
    out: &mut dyn Write,
) -> Result<VerifySummary> {
    let summary = verify::run_suite(suite, seed, instances, restarts, central)?;
    write_json(out, &summary)?;
    Ok(summary)
}

#[derive(Debug, Serialize)]
struct SwapReport {
    seed: u64,
    settings: String,
    i: f64,
    j: f64,
    b: f64,
    /// Same leaves with the separable central pair `z z`, `x x`.
    separable_b: f64,
    max_correlator_difference: f64,
}

pub fn run_swap_sim(
    ab: &Path,
    bc: &Path,
    settings: Option<&Path>,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let rho_ab = load_state(ab)?;
    let rho_bc = load_state(bc)?;
    let (leaves, source) = match settings {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let parsed = correlations::parse_bilocal_settings(&text).with_context(|| format!("in {}", path.display()))?;
            for w in &parsed.warnings {
                writeln!(err, "warning: {w}")?;
            }
            if !parsed.defaulted_central {
                writeln!(err, "notice: central vectors in the settings file are ignored; the Bell-state measurement fixes them")?;
            }
            (parsed.settings, path.display().to_string())
        }
        None => {
            writeln!(err, "notice: no settings file given; using the Branciard settings")?;
            (BilocalSettings::branciard(), "branciard".to_string())
        }
    };
    let a = [&leaves.a0, &leaves.a1];
    let c = [&leaves.c0, &leaves.c1];
    let dist = swap::bsm_distribution(&rho_ab, &rho_bc, a, c);
    let value = swap::bsm_value(&dist);
    let separable = BilocalSettings { b_a0: MeasurementVector::Z, b_c0: MeasurementVector::Z, b_a1: MeasurementVector::X, b_c1: MeasurementVector::X, ..leaves };
    let sep = correlations::bilocality_value(&rho_ab, &rho_bc, &separable);
    out.write_all(dist.to_csv().as_bytes())?;
    writeln!(out)?;
    write_json(
        out,
        &SwapReport {
            seed,
            settings: source,
            i: json_num(value.i),
            j: json_num(value.j),
            b: json_num(value.value),
            separable_b: json_num(sep.value),
            max_correlator_difference: json_num(swap::theorem1_check(&rho_ab, &rho_bc, a, c)),
        },
    )
}
