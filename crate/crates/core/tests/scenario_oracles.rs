mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use common::{bisect, exact_pfq};
use qspeed::analysis::{
    detect_zeros, nonmarkov_intervals, sample_step, sweep, DerivativeMode, Quantity, Stencil, SweepGrid, FLOW_THRESHOLD,
};
use qspeed::presets;
use qspeed::scenarios::{
    common_reservoir_amplitude, majorana_alpha, CommonReservoirConfig, EvolvedFamily, MajoranaConfig, MajoranaFamily,
    OneQubitDissipativeConfig, OneQubitFamily, RegisterState,
};
use qspeed::speeds::{bures_distance, hilbert_schmidt_distance, hss, qfi, StateDerivative, QFI_SUPPORT_CUTOFF};

fn linear_speeds(fam: &dyn EvolvedFamily, t: f64, index: usize) -> (f64, f64) {
    let phases = fam.default_phases();
    let sd = StateDerivative::new(
        fam.state_at(t, &phases).unwrap(),
        fam.derivative_at(t, &phases, index).unwrap().unwrap(),
    )
    .unwrap();
    (qfi(&sd, QFI_SUPPORT_CUTOFF).unwrap(), hss(&sd))
}

#[test]
fn strong_coupling_survival_zeros_match_root_finder() {
    // γ₀=5, λ=1: Γ = 3 and P ∝ [cos(3t/2) + sin(3t/2)/3]²
    let amp = |t: f64| (1.5 * t).cos() + (1.5 * t).sin() / 3.0;
    let roots: Vec<f64> = (0..4)
        .filter_map(|k| {
            let lo = 0.01 + k as f64 * std::f64::consts::PI / 1.5;
            let hi = lo + std::f64::consts::PI / 1.5;
            (amp(lo) * amp(hi) < 0.0).then(|| bisect(amp, lo, hi))
        })
        .filter(|&r| r < 6.0)
        .collect();
    assert!(roots.len() >= 3);
    let cfg = OneQubitDissipativeConfig::new(5.0, 1.0, FRAC_PI_2, FRAC_PI_4).unwrap();
    for &r in &roots {
        assert!(cfg.reservoir.survival_probability(r).unwrap() < 1e-20);
    }
    let fam = OneQubitFamily::new(cfg);
    let grid = SweepGrid::new(0.0, 6.0, 600).unwrap();
    let samples = sweep(&fam, 0, FRAC_PI_4, &grid, DerivativeMode::ChannelLinearity).unwrap();
    // grid-resolved thresholds: the minimum sampled F near each root is ~1e-5
    let events = detect_zeros(&samples, Quantity::Qfi, 1e-3).unwrap();
    assert_eq!(events.interior.len(), roots.len());
    for (e, r) in events.interior.iter().zip(&roots) {
        assert!((e - r).abs() <= grid.dt(), "event {e} vs root {r}");
    }
}

#[test]
fn common_reservoir_first_zero_matches_root_finder() {
    let w = (4.0f64 * 64.0 - 1.0).sqrt();
    // e^{τ/2}𝓕 = cos(wτ/2) + sin(wτ/2)/w for R > ½
    let g = |tau: f64| (0.5 * w * tau).cos() + (0.5 * w * tau).sin() / w;
    let root = bisect(g, 0.1, 0.3);
    assert!(((0.5 * w * root).tan() + w).abs() < 1e-6 * w);
    let cfg = CommonReservoirConfig::new(0.3, 8.0, FRAC_PI_4).unwrap();
    assert!(common_reservoir_amplitude(&cfg, root).unwrap().abs() < 1e-14);
    assert!(common_reservoir_amplitude(&cfg, root - 1e-3).unwrap() > 0.0);
    assert!(common_reservoir_amplitude(&cfg, root + 1e-3).unwrap() < 0.0);
}

fn oracle_alpha_ohmic(b: f64, t: f64) -> f64 {
    let beta = 4.0 * std::f64::consts::PI; // |β| with Γ(2)=1, Γ₀=1
    let i = 0.5 * t * t * exact_pfq(&[1.0, 1.0], &[1.5, 2.0], -0.25 * t * t);
    (-2.0 * b * b * beta * i).exp()
}

#[test]
fn majorana_alpha_matches_series_oracle() {
    for t in [0.5, 1.0, 2.0] {
        let cfg = MajoranaConfig::new(1, 1, 1.0, 1.0, 1.0, RegisterState::Ghz { phi: 0.0 }).unwrap();
        let got = majorana_alpha(&cfg, t).unwrap();
        let want = oracle_alpha_ohmic(1.0, t);
        assert!(
            ((got.alpha - want) / want).abs() < 1e-10,
            "t={t}: {} vs {want}",
            got.alpha
        );
        assert!(!got.precision_loss && !got.near_ohmic_warning);
    }
    // Q = 3: Γ((Q−1)/2) = Γ(1) = 1, |β| = 4π/Γ(4)
    let cfg = MajoranaConfig::new(1, 1, 3.0, 1.0, 1.0, RegisterState::Ghz { phi: 0.0 }).unwrap();
    let i = 2.0 * (1.0 - exact_pfq(&[1.0], &[0.5], -0.25));
    let want = (-2.0 * 4.0 * std::f64::consts::PI / 6.0 * i).exp();
    let got = majorana_alpha(&cfg, 1.0).unwrap().alpha;
    assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
}

#[test]
fn ghz_sweep_tracks_closed_form() {
    let cfg = MajoranaConfig::new(3, 2, 1.0, 1.0, 1.0, RegisterState::Ghz { phi: 0.3 }).unwrap();
    let fam = MajoranaFamily::new(cfg);
    let grid = SweepGrid::new(0.0, 4.0, 400).unwrap();
    let samples = sweep(&fam, 0, 0.3, &grid, DerivativeMode::default()).unwrap();
    for s in &samples {
        let a = majorana_alpha(&cfg, s.t).unwrap().alpha;
        let want = (2.0 * a * a / (1.0 + a * a)).powi(2);
        assert!((s.qfi_num - want).abs() < 1e-6, "t={}", s.t);
    }
}

#[test]
fn initial_pure_state_qfi_matches_variance_formula() {
    // F = 4(⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²) = 4 w(1 − w), w = weight on the phase carriers
    let cases: [(&str, usize, f64); 6] = [
        ("one-qubit-strong", 0, 0.5),
        ("two-qubit-independent", 0, 1.0 / 3.0),
        ("common-reservoir", 0, 0.5),
        ("majorana-w-phi1", 0, 1.0 / 3.0),
        ("majorana-w-phi2", 1, 1.0 / 3.0),
        ("majorana-ghz", 0, 0.5),
    ];
    let all = presets::all().unwrap();
    for (name, index, w) in cases {
        let p = all.iter().find(|p| p.name == name).unwrap();
        let (f, _) = linear_speeds(p.family.as_ref(), 0.0, index);
        assert!((f - 4.0 * w * (1.0 - w)).abs() < 1e-12, "{name}: {f}");
    }
}

#[test]
fn hilbert_schmidt_distance_rate_is_hss() {
    for p in presets::all().unwrap() {
        let fam = p.family.as_ref();
        let phases = fam.default_phases();
        let t = 0.37 * p.grid.t_end();
        let (_, h) = linear_speeds(fam, t, p.phase_index);
        let dh = 1e-5;
        let mut shifted = phases.clone();
        shifted[p.phase_index] += dh;
        let d =
            hilbert_schmidt_distance(&fam.state_at(t, &shifted).unwrap(), &fam.state_at(t, &phases).unwrap()).unwrap();
        assert!((d / dh - h).abs() < 1e-5 * h.max(1e-3), "{}: {} vs {h}", p.name, d / dh);
    }
}

#[test]
fn bures_distance_rate_is_qfi_for_mixed_states() {
    // 8·d_B²/h² → F for full-support mixed states
    for name in ["teleportation", "majorana-ghz-super-ohmic"] {
        let p = presets::all().unwrap().into_iter().find(|p| p.name == name).unwrap();
        let fam = p.family.as_ref();
        let phases = fam.default_phases();
        let t = 0.5;
        let (f, _) = linear_speeds(fam, t, p.phase_index);
        let h = 1e-3;
        let mut shifted = phases.clone();
        shifted[p.phase_index] += h;
        let db = bures_distance(&fam.state_at(t, &shifted).unwrap(), &fam.state_at(t, &phases).unwrap()).unwrap();
        let est = 8.0 * db * db / (h * h);
        assert!(((est - f) / f).abs() < 1e-3, "{name}: {est} vs {f}");
    }
}

#[test]
fn derivative_modes_agree_on_every_preset() {
    for p in presets::all().unwrap() {
        let fam = p.family.as_ref();
        let fd = sweep(fam, p.phase_index, p.phi0(), &p.grid, DerivativeMode::default()).unwrap();
        let fd4 = sweep(
            fam,
            p.phase_index,
            p.phi0(),
            &p.grid,
            DerivativeMode::FiniteDifference {
                h: 1e-4,
                stencil: Stencil::Central4,
            },
        )
        .unwrap();
        let lin = sweep(fam, p.phase_index, p.phi0(), &p.grid, DerivativeMode::ChannelLinearity).unwrap();
        for ((a, b), c) in fd.iter().zip(&lin).zip(&fd4) {
            assert_eq!(a.t, b.t);
            assert!((a.qfi_num - b.qfi_num).abs() < 1e-5, "{} t={}", p.name, a.t);
            assert!((a.hss_num - b.hss_num).abs() < 1e-5, "{} t={}", p.name, a.t);
            assert!((c.qfi_num - b.qfi_num).abs() < 1e-5, "{} t={}", p.name, a.t);
        }
    }
}

#[test]
fn one_qubit_sweep_tracks_survival() {
    let cfg = OneQubitDissipativeConfig::new(5.0, 1.0, FRAC_PI_2, FRAC_PI_4).unwrap();
    let fam = OneQubitFamily::new(cfg);
    let grid = SweepGrid::new(0.0, 6.0, 500).unwrap();
    let samples = sweep(&fam, 0, FRAC_PI_4, &grid, DerivativeMode::default()).unwrap();
    assert_eq!(samples.len(), 500);
    for s in &samples {
        assert!((s.qfi_num - cfg.reservoir.survival_probability(s.t).unwrap()).abs() < 1e-6);
    }
    assert!(samples[0].d_qfi_dt.is_none() && samples[499].d_hss_dt.is_none());
    assert!(samples[1..499].iter().all(|s| s.d_qfi_dt.is_some()));
}

#[test]
fn phase_free_family_is_silent() {
    let fam = OneQubitFamily::new(OneQubitDissipativeConfig::new(5.0, 1.0, 0.0, 0.3).unwrap());
    let grid = SweepGrid::new(0.0, 6.0, 500).unwrap();
    for mode in [DerivativeMode::default(), DerivativeMode::ChannelLinearity] {
        let samples = sweep(&fam, 0, 0.3, &grid, mode).unwrap();
        assert!(samples.iter().all(|s| s.qfi_num == 0.0 && s.hss_num == 0.0));
        assert!(nonmarkov_intervals(&samples, FLOW_THRESHOLD).unwrap().is_empty());
    }
}

#[test]
fn super_ohmic_revival_is_witnessed_by_both_flows() {
    let p = presets::majorana_ghz_super_ohmic().unwrap();
    let samples = sweep(
        p.family.as_ref(),
        0,
        p.phi0(),
        &p.grid,
        DerivativeMode::ChannelLinearity,
    )
    .unwrap();
    let r = nonmarkov_intervals(&samples, FLOW_THRESHOLD).unwrap();
    assert!(!r.qfi_flow_positive_intervals.is_empty());
    assert!(r.witnesses_agree(sample_step(&samples)));
}

#[test]
fn sweep_rejects_bad_requests() {
    let p = presets::one_qubit_strong().unwrap();
    let fam = p.family.as_ref();
    assert!(sweep(fam, 1, 0.0, &p.grid, DerivativeMode::default()).is_err());
    assert!(sweep(fam, 0, f64::NAN, &p.grid, DerivativeMode::default()).is_err());
    let bad_h = DerivativeMode::FiniteDifference {
        h: 0.0,
        stencil: Stencil::Central2,
    };
    assert!(sweep(fam, 0, 0.0, &p.grid, bad_h).is_err());
}
