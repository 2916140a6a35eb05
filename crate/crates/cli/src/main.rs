// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod model;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use qspeed::analysis::{
    coincidence, detect_zeros, nonmarkov_intervals, paired_within, sample_step, sweep, unmatched, DerivativeMode,
    Quantity, SpeedSample, Stencil, SweepGrid, FLOW_THRESHOLD, HSS_ZERO_THRESHOLD, QFI_ZERO_THRESHOLD,
};
use qspeed::presets::{self, Preset};

use args::{Cli, Command, Mode, Model, RunArgs, VerifyArgs};

const CSV_HEADER: &str = "t,hss_num,qfi_num,hss_closed,qfi_closed,dhss_dt,dqfi_dt";

/// Exit-code scheme: 0 ok, 1 verification failure, 2 usage, 3 numeric failure.
#[derive(Debug)]
enum Failure {
    Verification,
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Witness(a) => cmd_witness(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numeric(m) => eprintln!("numeric failure: {m}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn derivative_mode(a: &RunArgs) -> Result<DerivativeMode, Failure> {
    if !(a.phase_step > 0.0) {
        return Err(Failure::Usage(format!(
            "--phase-step must be positive, got {}",
            a.phase_step
        )));
    }
    Ok(match a.mode {
        Mode::Fd => DerivativeMode::FiniteDifference {
            h: a.phase_step,
            stencil: Stencil::Central2,
        },
        Mode::Fd4 => DerivativeMode::FiniteDifference {
            h: a.phase_step,
            stencil: Stencil::Central4,
        },
        Mode::Linearity => DerivativeMode::ChannelLinearity,
    })
}

/// Validates flags, builds the scenario and runs the sweep.
fn run(a: &RunArgs) -> Result<Vec<SpeedSample>, Failure> {
    let stray = model::stray_flags(a);
    if !stray.is_empty() {
        let list: Vec<String> = stray.iter().map(|f| format!("--{f}")).collect();
        return Err(Failure::Usage(format!(
            "{} not applicable to this model",
            list.join(", ")
        )));
    }
    let built = model::build(a).map_err(|e| Failure::Usage(e.to_string()))?;
    for w in &built.warnings {
        eprintln!("warning: {w}");
    }
    let count = built.family.phase_count();
    if a.phase_index >= count {
        return Err(Failure::Usage(format!(
            "--phase-index {} out of range: the scenario encodes {count} phase(s)",
            a.phase_index
        )));
    }
    let grid = SweepGrid::new(a.t_start, a.t_end.unwrap_or(built.default_t_end), a.steps)
        .map_err(|e| Failure::Usage(format!("invalid grid: {e}")))?;
    let mode = derivative_mode(a)?;
    let fam = built.family.as_ref();
    let phi0 = fam.default_phases()[a.phase_index];
    sweep(fam, a.phase_index, phi0, &grid, mode).map_err(|e| Failure::Numeric(format!("sweep of {}: {e}", fam.name())))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn to_csv(samples: &[SpeedSample]) -> String {
    let mut out = String::with_capacity(samples.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{},{},{},{}",
            s.t,
            s.hss_num,
            s.qfi_num,
            opt(s.hss_closed),
            opt(s.qfi_closed),
            opt(s.d_hss_dt),
            opt(s.d_qfi_dt)
        );
    }
    out
}

fn cmd_sweep(a: &RunArgs) -> Result<(), Failure> {
    let samples = run(a)?;
    let csv = to_csv(&samples);
    match &a.out {
        Some(path) => fs::write(path, csv).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => emit(&csv),
    }
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Usage(format!("cannot write stdout: {e}"))),
        _ => Ok(()),
    }
}

fn intervals(iv: &[(f64, f64)]) -> String {
    if iv.is_empty() {
        return "none".into();
    }
    iv.iter()
        .map(|(a, b)| format!("[{a:.6}, {b:.6}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_witness(a: &RunArgs) -> Result<(), Failure> {
    let samples = run(a)?;
    let report = nonmarkov_intervals(&samples, FLOW_THRESHOLD)
        .map_err(|e| Failure::Numeric(format!("non-Markovian interval detection: {e}")))?;
    let step = sample_step(&samples);
    let mut out = format!("grid: {} points, step {step:.6e}\n", samples.len());
    if report.is_empty() {
        out.push_str("no non-Markovian intervals detected\n");
    } else {
        let agree = if report.witnesses_agree(step) { "yes" } else { "no" };
        let _ = writeln!(
            out,
            "QFI flow positive: {}",
            intervals(&report.qfi_flow_positive_intervals)
        );
        let _ = writeln!(
            out,
            "HSS flow positive: {}",
            intervals(&report.hss_flow_positive_intervals)
        );
        let _ = writeln!(out, "witnesses agree within one grid step: {agree}");
    }
    emit(&out)
}

fn preset_model(p: &Preset) -> Model {
    match p.name {
        n if n.starts_with("one-qubit") => Model::OneQubit,
        "two-qubit-independent" => Model::TwoQubitIndependent,
        "common-reservoir" => Model::CommonReservoir,
        "teleportation" => Model::Teleportation,
        _ => Model::Majorana,
    }
}

struct Check {
    name: String,
    max_dev: f64,
    pass: bool,
}

fn bounded(name: String, max_dev: f64, tol: f64) -> Check {
    Check {
        name,
        max_dev,
        pass: max_dev <= tol,
    }
}

/// Sign disagreements, unpaired QFI zeros and unpaired extrema on an exact-derivative sweep.
fn coincidence_defects(samples: &[SpeedSample]) -> qspeed::error::Result<usize> {
    let r = coincidence(samples, HSS_ZERO_THRESHOLD)?;
    let step = sample_step(samples);
    let zq = detect_zeros(samples, Quantity::Qfi, QFI_ZERO_THRESHOLD)?.all();
    let zh = detect_zeros(samples, Quantity::Hss, HSS_ZERO_THRESHOLD)?.all();
    let extrema_paired = paired_within(&r.extrema_qfi, &r.extrema_hss, step);
    Ok(r.sign_disagreements.len() + unmatched(&zq, &zh, step).len() + usize::from(!extrema_paired))
}

fn verify_preset(p: &Preset, tol: f64) -> Result<Vec<Check>, Failure> {
    let fam = p.family.as_ref();
    let numeric = |what: &str, e: qspeed::error::Error| Failure::Numeric(format!("{what} of {}: {e}", p.name));
    let fd =
        sweep(fam, p.phase_index, p.phi0(), &p.grid, DerivativeMode::default()).map_err(|e| numeric("sweep", e))?;
    let lin = sweep(fam, p.phase_index, p.phi0(), &p.grid, DerivativeMode::ChannelLinearity)
        .map_err(|e| numeric("linearity sweep", e))?;

    let label = if p.name == "common-reservoir" {
        format!("{}[phi={:.4}]", p.name, p.phi0())
    } else {
        p.name.to_string()
    };
    let mut checks = Vec::new();

    let mut closed: Option<f64> = None;
    for s in &fd {
        for (num, c) in [(s.hss_num, s.hss_closed), (s.qfi_num, s.qfi_closed)] {
            if let Some(c) = c {
                closed = Some(closed.unwrap_or(0.0).max((num - c).abs()));
            }
        }
    }
    if let Some(dev) = closed {
        checks.push(bounded(format!("{label}.closed_form"), dev, tol));
    }

    let hierarchy = fd.iter().map(|s| s.hss_num - s.qfi_num.sqrt()).fold(0.0, f64::max);
    checks.push(bounded(format!("{label}.hierarchy"), hierarchy, tol));

    if let Some(rel) = p.relation {
        let dev = fd
            .iter()
            .map(|s| (s.qfi_num - rel.qfi_from_hss(s.hss_num)).abs())
            .fold(0.0, f64::max);
        checks.push(bounded(format!("{label}.relation"), dev, tol));
    }

    let defects = coincidence_defects(&lin).map_err(|e| numeric("coincidence analysis", e))?;
    checks.push(Check {
        name: format!("{label}.coincidence"),
        max_dev: defects as f64,
        pass: defects == 0,
    });
    Ok(checks)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    if !(a.tol >= 0.0) {
        return Err(Failure::Usage(format!("--tol must be non-negative, got {}", a.tol)));
    }
    let all = presets::all().map_err(|e| Failure::Numeric(format!("building presets: {e}")))?;
    let mut all_pass = true;
    let mut out = String::new();
    for p in all.iter().filter(|p| a.model.is_none_or(|m| preset_model(p) == m)) {
        for c in verify_preset(p, a.tol)? {
            all_pass &= c.pass;
            let _ = writeln!(
                out,
                "CHECK {} {} max_dev={:.3e}",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.max_dev
            );
        }
    }
    emit(&out)?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
