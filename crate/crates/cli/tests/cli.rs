// Truncated angles mirror the command-line strings exactly.
#![allow(clippy::approx_constant)]

use std::process::{Command, Output};

use qspeed::analysis::{sweep, DerivativeMode, SweepGrid};
use qspeed::scenarios::{OneQubitDissipativeConfig, OneQubitFamily};

fn qspeed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspeed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

type Row = Vec<Option<f64>>;

fn parse_csv(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,hss_num,qfi_num,hss_closed,qfi_closed,dhss_dt,dqfi_dt")
    );
    lines
        .map(|l| {
            let row: Row = l
                .split(',')
                .map(|f| (!f.is_empty()).then(|| f.parse().expect("numeric field")))
                .collect();
            assert_eq!(row.len(), 7, "row {l}");
            row
        })
        .collect()
}

const ONE_QUBIT: &[&str] = &[
    "sweep",
    "--model",
    "one-qubit",
    "--gamma0",
    "5",
    "--lambda",
    "1",
    "--theta",
    "1.570796",
    "--phi",
    "0.785398",
    "--t-end",
    "6",
    "--steps",
    "600",
];

#[test]
fn one_qubit_csv_round_trips_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let mut args = ONE_QUBIT.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let o = qspeed(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = parse_csv(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 600);

    let fam = OneQubitFamily::new(OneQubitDissipativeConfig::new(5.0, 1.0, 1.570796, 0.785398).unwrap());
    let grid = SweepGrid::new(0.0, 6.0, 600).unwrap();
    let expected = sweep(&fam, 0, 0.785398, &grid, DerivativeMode::default()).unwrap();
    for (row, s) in rows.iter().zip(&expected) {
        let want = [
            Some(s.t),
            Some(s.hss_num),
            Some(s.qfi_num),
            s.hss_closed,
            s.qfi_closed,
            s.d_hss_dt,
            s.d_qfi_dt,
        ];
        for (got, want) in row.iter().zip(want) {
            assert_eq!(got.map(f64::to_bits), want.map(f64::to_bits));
        }
    }
    assert!(rows[0][5].is_none() && rows[599][6].is_none());
    assert!(rows[1..599].iter().all(|r| r[5].is_some() && r[6].is_some()));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let a = qspeed(ONE_QUBIT);
    let b = qspeed(ONE_QUBIT);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let env = [
        "sweep",
        "--model",
        "teleportation",
        "--env",
        "0.7,0.2,0.1",
        "--env",
        "-1.1,0.05,0.3",
    ];
    assert_eq!(qspeed(&env).stdout, qspeed(&env).stdout);
}

#[test]
fn majorana_ghz_sweep_populates_closed_forms() {
    let o = qspeed(&[
        "sweep",
        "--model",
        "majorana",
        "--state",
        "ghz",
        "--n",
        "3",
        "--m",
        "2",
        "--q",
        "1",
        "--b",
        "1",
        "--gamma-cap",
        "1",
        "--t-end",
        "4",
        "--steps",
        "400",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 400);
    for r in &rows {
        let (h, f) = (r[3].unwrap(), r[4].unwrap());
        assert!((r[1].unwrap() - h).abs() < 1e-6 && (r[2].unwrap() - f).abs() < 1e-6);
    }
}

#[test]
fn common_reservoir_sweep_covers_the_oscillating_window() {
    let o = qspeed(&[
        "sweep",
        "--model",
        "common-reservoir",
        "--r1",
        "0.3",
        "--big-r",
        "8",
        "--phi",
        "0.785398",
        "--t-end",
        "3",
        "--steps",
        "600",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 600);
    assert_eq!(rows[599][0], Some(3.0));
    assert!(rows.iter().all(|r| r[3].is_some() && r[4].is_none()));
}

#[test]
fn linearity_mode_matches_closed_forms_tightly() {
    let mut args = ONE_QUBIT.to_vec();
    args.extend(["--mode", "linearity"]);
    let rows = parse_csv(&stdout(&qspeed(&args)));
    for r in &rows {
        assert!((r[2].unwrap() - r[4].unwrap()).abs() < 1e-12);
    }
}

#[test]
fn verify_passes_at_default_tolerance() {
    let o = qspeed(&["verify"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.len() >= 30);
    for l in &lines {
        let parts: Vec<&str> = l.split(' ').collect();
        assert_eq!(parts[0], "CHECK");
        assert_eq!(parts[2], "PASS", "{l}");
        let dev: f64 = parts[3].strip_prefix("max_dev=").unwrap().parse().unwrap();
        assert!(dev.is_finite());
    }
    for family in [
        "one-qubit-strong",
        "two-qubit-independent",
        "common-reservoir",
        "teleportation",
        "majorana-ghz",
    ] {
        assert!(lines.iter().any(|l| l.contains(family)), "{family} missing");
    }
}

#[test]
fn verify_fails_when_tolerance_is_below_difference_noise() {
    let o = qspeed(&["verify", "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.contains(".closed_form FAIL")));
}

#[test]
fn verify_restricts_to_one_model() {
    let o = qspeed(&["verify", "--model", "teleportation"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(!out.is_empty());
    assert!(out.lines().all(|l| l.starts_with("CHECK teleportation.")), "{out}");
}

#[test]
fn witness_strong_coupling_reports_matching_intervals() {
    let o = qspeed(&[
        "witness",
        "--model",
        "one-qubit",
        "--gamma0",
        "5",
        "--lambda",
        "1",
        "--t-end",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let qfi = out
        .lines()
        .find(|l| l.starts_with("QFI flow positive:"))
        .expect("QFI intervals");
    let hss = out
        .lines()
        .find(|l| l.starts_with("HSS flow positive:"))
        .expect("HSS intervals");
    assert!(qfi.contains('['));
    assert_eq!(qfi["QFI".len()..], hss["HSS".len()..]);
    assert!(out.contains("witnesses agree within one grid step: yes"));
}

#[test]
fn witness_weak_coupling_reports_nothing() {
    let o = qspeed(&[
        "witness",
        "--model",
        "one-qubit",
        "--gamma0",
        "0.1",
        "--lambda",
        "1",
        "--t-end",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no non-Markovian intervals detected"));
}

#[test]
fn witness_with_a_decoupled_spin_runs() {
    let o = qspeed(&["witness", "--model", "teleportation", "--env", "0.4,0.3,-0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("grid: 600 points"));
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["sweep", "--model", "one-qubit", "--bogus", "1"],
        &["sweep", "--model", "one-qubit", "--phi", "nan"],
        &["sweep", "--model", "one-qubit", "--gamma0", "inf"],
        &["sweep", "--model", "one-qubit", "--r1", "0.3"],
        &["sweep", "--model", "teleportation", "--r", "2"],
        &["sweep", "--model", "teleportation", "--env", "1,2"],
        &["sweep", "--model", "majorana", "--state", "w", "--phi", "0.3"],
        &["sweep", "--model", "majorana", "--phase-index", "1"],
        &["sweep", "--model", "one-qubit", "--t-start", "-1"],
        &["sweep", "--model", "one-qubit", "--steps", "1"],
        &["sweep", "--model", "quantum-dot"],
        &["verify", "--tol", "nan"],
    ];
    for args in cases {
        let o = qspeed(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn numeric_failure_exits_with_three_and_names_the_operation() {
    let o = qspeed(&["sweep", "--model", "majorana", "--b", "1e200", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("sweep of majorana-ghz"));
}
