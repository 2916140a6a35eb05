use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qspeed::scenarios::EnvSpin;

#[derive(Debug, Parser)]
#[command(
    name = "qspeed",
    version,
    about = "Hilbert-Schmidt speed and quantum Fisher information sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep one scenario over a time grid and write CSV.
    #[command(allow_negative_numbers = true)]
    Sweep(RunArgs),
    /// Check numerics against closed forms, the hierarchy, coincidence and relation identities.
    Verify(VerifyArgs),
    /// Report positive-flow (non-Markovian) intervals of both witnesses.
    #[command(allow_negative_numbers = true)]
    Witness(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    OneQubit,
    TwoQubitIndependent,
    CommonReservoir,
    Teleportation,
    Majorana,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    W,
    Ghz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Central phase difference.
    Fd,
    /// Five-point phase difference.
    Fd4,
    /// Exact derivative pushed through the linear evolution.
    Linearity,
}

/// Angles are in radians.
#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "Scenario")]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub model: Model,

    #[arg(long, value_parser = finite)]
    pub gamma0: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub lambda: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub phi: Option<f64>,

    #[arg(long, value_parser = finite)]
    pub r1: Option<f64>,
    #[arg(long = "big-r", value_parser = finite)]
    pub big_r: Option<f64>,

    #[arg(long, value_parser = finite)]
    pub r: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub p: Option<f64>,
    #[arg(long = "omega-sum", value_parser = finite)]
    pub omega_sum: Option<f64>,
    /// Environment spin `h,eps,lam`; repeat for more spins.
    #[arg(long = "env", value_parser = env_spin, allow_hyphen_values = true)]
    pub env: Vec<EnvSpin>,

    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_parser = finite)]
    pub q: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub b: Option<f64>,
    #[arg(long = "gamma-cap", value_parser = finite)]
    pub gamma_cap: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub phi1: Option<f64>,
    #[arg(long, value_parser = finite)]
    pub phi2: Option<f64>,

    /// Which encoded phase to differentiate.
    #[arg(long = "phase-index", default_value_t = 0)]
    pub phase_index: usize,

    #[arg(long = "t-start", value_parser = finite, default_value_t = 0.0)]
    pub t_start: f64,
    #[arg(long = "t-end", value_parser = finite)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 600)]
    pub steps: usize,

    #[arg(long, value_enum, default_value_t = Mode::Fd)]
    pub mode: Mode,
    /// Phase step of the finite-difference modes.
    #[arg(long = "phase-step", value_parser = finite, default_value_t = qspeed::analysis::DEFAULT_PHASE_STEP)]
    pub phase_step: f64,

    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Restrict to one model's built-in scenarios.
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Bound on closed-form deviations, hierarchy and relation residuals.
    #[arg(long, value_parser = finite, default_value_t = 1e-6)]
    pub tol: f64,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not finite"))
    }
}

fn env_spin(s: &str) -> Result<EnvSpin, String> {
    let parts = s.split(',').map(finite).collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [h, eps, lam] => Ok(EnvSpin { h, eps, lam }),
        _ => Err(format!("expected h,eps,lam, got {} values", parts.len())),
    }
}
