//! Time sweeps of HSS and QFI, plus the reports built on them: zero and
//! extremum detection, derivative-sign coincidence and information-flow
//! (non-Markovianity) intervals.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scenarios::EvolvedFamily;
use crate::speeds::{hss, qfi, StateDerivative, QFI_SUPPORT_CUTOFF};

/// Default HSS zero threshold; the QFI threshold is its square.
pub const HSS_ZERO_THRESHOLD: f64 = 1e-4;
pub const QFI_ZERO_THRESHOLD: f64 = 1e-8;
/// Derivatives this small count as zero and agree with either sign.
pub const DERIVATIVE_TIE: f64 = 1e-12;
pub const FLOW_THRESHOLD: f64 = 1e-9;
pub const DEFAULT_PHASE_STEP: f64 = 1e-6;

/// Uniform grid `t_k = t_start + k (t_end − t_start)/(steps − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl SweepGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if steps < 3 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 3 steps, got {steps}"
            )));
        }
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::NonFinite);
        }
        if t_start < 0.0 {
            return Err(Error::NegativeTime(t_start));
        }
        if t_end <= t_start {
            return Err(Error::InvalidConfig(format!(
                "grid end {t_end} must exceed start {t_start}"
            )));
        }
        Ok(Self { t_start, t_end, steps })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.steps - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.point(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedSample {
    pub t: f64,
    pub hss_num: f64,
    pub qfi_num: f64,
    pub hss_closed: Option<f64>,
    pub qfi_closed: Option<f64>,
    /// Same-grid central differences; absent at the two boundary points.
    pub d_hss_dt: Option<f64>,
    pub d_qfi_dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central2,
    Central4,
}

/// How `∂ρ/∂φ` is obtained at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    FiniteDifference {
        h: f64,
        stencil: Stencil,
    },
    /// Push the exact initial-state derivative through the (linear) evolution.
    ChannelLinearity,
}

impl Default for DerivativeMode {
    fn default() -> Self {
        DerivativeMode::FiniteDifference {
            h: DEFAULT_PHASE_STEP,
            stencil: Stencil::Central2,
        }
    }
}

fn state_derivative(
    family: &dyn EvolvedFamily,
    phases: &[f64],
    index: usize,
    t: f64,
    mode: DerivativeMode,
) -> Result<StateDerivative> {
    let state = family.state_at(t, phases)?;
    match mode {
        DerivativeMode::ChannelLinearity => {
            let d = family
                .derivative_at(t, phases, index)
                .ok_or_else(|| Error::InvalidConfig(format!("{} exposes no linear evolution map", family.name())))??;
            StateDerivative::new(state, d)
        }
        DerivativeMode::FiniteDifference { h, stencil } => {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::OutOfRange {
                    name: "h",
                    value: h,
                    range: "(0, inf)",
                });
            }
            let shifted = |delta: f64| {
                let mut p = phases.to_vec();
                p[index] += delta;
                family.state_at(t, &p)
            };
            match stencil {
                Stencil::Central2 => StateDerivative::central_difference(state, &shifted(h)?, &shifted(-h)?, h),
                Stencil::Central4 => StateDerivative::five_point(
                    state,
                    [&shifted(-2.0 * h)?, &shifted(-h)?, &shifted(h)?, &shifted(2.0 * h)?],
                    h,
                ),
            }
        }
    }
}

fn central_differences(values: &[f64], dt: f64) -> Vec<Option<f64>> {
    let n = values.len();
    (0..n)
        .map(|k| (k > 0 && k + 1 < n).then(|| (values[k + 1] - values[k - 1]) / (2.0 * dt)))
        .collect()
}

/// Evaluates HSS and QFI for phase `phase_index` (set to `phi0`, the others at
/// their defaults) at every grid point. Points are evaluated in parallel and
/// returned in grid order.
pub fn sweep(
    family: &dyn EvolvedFamily,
    phase_index: usize,
    phi0: f64,
    grid: &SweepGrid,
    mode: DerivativeMode,
) -> Result<Vec<SpeedSample>> {
    let mut phases = family.default_phases();
    if phase_index >= phases.len() {
        return Err(Error::IndexOutOfRange {
            index: phase_index,
            n: phases.len(),
        });
    }
    if !phi0.is_finite() {
        return Err(Error::NonFinite);
    }
    phases[phase_index] = phi0;
    let points = grid.points();
    let raw = points
        .par_iter()
        .map(|&t| {
            let sd = state_derivative(family, &phases, phase_index, t, mode)?;
            let closed = family.closed_forms(t, &phases, phase_index)?;
            Ok((hss(&sd), qfi(&sd, QFI_SUPPORT_CUTOFF)?, closed))
        })
        .collect::<Result<Vec<_>>>()?;

    let hs: Vec<f64> = raw.iter().map(|r| r.0).collect();
    let qs: Vec<f64> = raw.iter().map(|r| r.1).collect();
    let dh = central_differences(&hs, grid.dt());
    let dq = central_differences(&qs, grid.dt());
    Ok(points
        .iter()
        .enumerate()
        .map(|(k, &t)| SpeedSample {
            t,
            hss_num: hs[k],
            qfi_num: qs[k],
            hss_closed: raw[k].2.hss,
            qfi_closed: raw[k].2.qfi,
            d_hss_dt: dh[k],
            d_qfi_dt: dq[k],
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Hss,
    Qfi,
}

impl Quantity {
    pub fn value(self, s: &SpeedSample) -> f64 {
        match self {
            Quantity::Hss => s.hss_num,
            Quantity::Qfi => s.qfi_num,
        }
    }

    pub fn flow(self, s: &SpeedSample) -> Option<f64> {
        match self {
            Quantity::Hss => s.d_hss_dt,
            Quantity::Qfi => s.d_qfi_dt,
        }
    }
}

/// Near-zero minima, split by whether the minimum sits on the grid boundary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroEvents {
    pub interior: Vec<f64>,
    pub boundary: Vec<f64>,
}

impl ZeroEvents {
    pub fn all(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.interior.iter().chain(&self.boundary).copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty() && self.boundary.is_empty()
    }
}

fn check_len(samples: &[SpeedSample]) -> Result<()> {
    if samples.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    Ok(())
}

/// Each maximal run of points below `threshold` becomes one event at its minimum.
pub fn detect_zeros(samples: &[SpeedSample], quantity: Quantity, threshold: f64) -> Result<ZeroEvents> {
    check_len(samples)?;
    let last = samples.len() - 1;
    let mut events = ZeroEvents::default();
    let mut k = 0;
    while k <= last {
        if quantity.value(&samples[k]) >= threshold {
            k += 1;
            continue;
        }
        let mut argmin = k;
        while k <= last && quantity.value(&samples[k]) < threshold {
            if quantity.value(&samples[k]) < quantity.value(&samples[argmin]) {
                argmin = k;
            }
            k += 1;
        }
        let t = samples[argmin].t;
        if argmin == 0 || argmin == last {
            events.boundary.push(t);
        } else {
            events.interior.push(t);
        }
    }
    Ok(events)
}

/// Interior extrema: sign changes of the stored time-derivative, skipping ties.
pub fn detect_extrema(samples: &[SpeedSample], quantity: Quantity) -> Vec<f64> {
    let signed: Vec<(usize, f64)> = samples
        .iter()
        .enumerate()
        .filter_map(|(k, s)| quantity.flow(s).map(|d| (k, d)))
        .filter(|&(_, d)| d.abs() > DERIVATIVE_TIE)
        .collect();
    let mut out = Vec::new();
    for w in signed.windows(2) {
        let ((a, da), (b, db)) = (w[0], w[1]);
        if da.signum() == db.signum() {
            continue;
        }
        let maximum = da > 0.0;
        let pick = (a..=b)
            .max_by(|&i, &j| {
                let (vi, vj) = (quantity.value(&samples[i]), quantity.value(&samples[j]));
                if maximum {
                    vi.total_cmp(&vj)
                } else {
                    vj.total_cmp(&vi)
                }
            })
            .expect("non-empty range");
        out.push(samples[pick].t);
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoincidenceReport {
    pub sign_agreements: usize,
    pub sign_disagreements: Vec<f64>,
    /// Zero events of either curve with no partner within one grid step.
    pub zero_mismatches: Vec<f64>,
    pub extrema_qfi: Vec<f64>,
    pub extrema_hss: Vec<f64>,
}

fn grid_step(samples: &[SpeedSample]) -> f64 {
    samples.windows(2).map(|w| w[1].t - w[0].t).fold(0.0, f64::max)
}

/// Events of `a` with no event of `b` within `tol`.
pub fn unmatched(a: &[f64], b: &[f64], tol: f64) -> Vec<f64> {
    a.iter()
        .copied()
        .filter(|x| !b.iter().any(|y| (x - y).abs() <= tol * (1.0 + 1e-9)))
        .collect()
}

/// True when both lists have the same length and are elementwise within `tol`.
pub fn paired_within(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + 1e-9))
}

/// Compares QFI and HSS dynamics: derivative signs where HSS exceeds
/// `zero_threshold`, zero events (QFI threshold `zero_threshold²`) and extrema.
pub fn coincidence(samples: &[SpeedSample], zero_threshold: f64) -> Result<CoincidenceReport> {
    check_len(samples)?;
    let mut report = CoincidenceReport::default();
    for s in samples {
        let (Some(dq), Some(dh)) = (s.d_qfi_dt, s.d_hss_dt) else {
            continue;
        };
        if s.hss_num <= zero_threshold {
            continue;
        }
        let tie = dq.abs() <= DERIVATIVE_TIE || dh.abs() <= DERIVATIVE_TIE;
        if tie || dq.signum() == dh.signum() {
            report.sign_agreements += 1;
        } else {
            report.sign_disagreements.push(s.t);
        }
    }
    let step = grid_step(samples);
    let zq = detect_zeros(samples, Quantity::Qfi, zero_threshold * zero_threshold)?.all();
    let zh = detect_zeros(samples, Quantity::Hss, zero_threshold)?.all();
    report.zero_mismatches = unmatched(&zq, &zh, step);
    report.zero_mismatches.extend(unmatched(&zh, &zq, step));
    report.zero_mismatches.sort_by(f64::total_cmp);
    report.extrema_qfi = detect_extrema(samples, Quantity::Qfi);
    report.extrema_hss = detect_extrema(samples, Quantity::Hss);
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NonMarkovReport {
    pub qfi_flow_positive_intervals: Vec<(f64, f64)>,
    pub hss_flow_positive_intervals: Vec<(f64, f64)>,
}

impl NonMarkovReport {
    pub fn is_empty(&self) -> bool {
        self.qfi_flow_positive_intervals.is_empty() && self.hss_flow_positive_intervals.is_empty()
    }

    /// Same number of intervals, endpoints within `tol`.
    pub fn witnesses_agree(&self, tol: f64) -> bool {
        let a = &self.qfi_flow_positive_intervals;
        let b = &self.hss_flow_positive_intervals;
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x.0 - y.0).abs() <= tol * (1.0 + 1e-9) && (x.1 - y.1).abs() <= tol * (1.0 + 1e-9))
    }
}

fn positive_runs(samples: &[SpeedSample], quantity: Quantity, threshold: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for s in samples {
        match quantity.flow(s) {
            Some(d) if d > threshold => {
                open = Some(open.map_or((s.t, s.t), |(a, _)| (a, s.t)));
            }
            _ => {
                if let Some(iv) = open.take() {
                    out.push(iv);
                }
            }
        }
    }
    out.extend(open);
    out
}

/// Maximal runs of interior points where each flow exceeds `flow_threshold`.
pub fn nonmarkov_intervals(samples: &[SpeedSample], flow_threshold: f64) -> Result<NonMarkovReport> {
    check_len(samples)?;
    Ok(NonMarkovReport {
        qfi_flow_positive_intervals: positive_runs(samples, Quantity::Qfi, flow_threshold),
        hss_flow_positive_intervals: positive_runs(samples, Quantity::Hss, flow_threshold),
    })
}

/// Grid step of a sample list (largest spacing).
pub fn sample_step(samples: &[SpeedSample]) -> f64 {
    grid_step(samples)
}
