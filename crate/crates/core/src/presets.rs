//! Built-in scenario configurations with their default grids.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use crate::analysis::SweepGrid;
use crate::error::Result;
use crate::scenarios::{
    CommonReservoirConfig, CommonReservoirFamily, EnvSpin, EvolvedFamily, MajoranaConfig, MajoranaFamily,
    OneQubitDissipativeConfig, OneQubitFamily, RegisterState, TeleportationConfig, TeleportationFamily,
    TwoQubitIndependentConfig, TwoQubitIndependentFamily,
};

/// Exact QFI-as-a-function-of-HSS relation for a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `F = 4 HSS²`
    OneQubit,
    /// `F = (4/9)(√(1 + 36 HSS²) − 1)`
    TwoQubitIndependent,
    /// `F = 8 HSS² / (1 + r²)`
    Teleportation { r: f64 },
    /// `F = 10/9 − 2√2 / (27 HSS)`
    WPhi1,
    /// `F = 16 HSS² / (9 HSS² + 2)`
    WPhi2,
    /// `F = 2^{m+2} HSS² (4^{1/m} HSS^{2/m} + 1)^{−m}` (some qubit noiseless)
    GhzPartial { m: usize },
    /// Every qubit noisy: `a = (2 HSS)^{2/m}`, `F = a^m / [((1+a)/2)^m + ((1−a)/2)^m]`.
    GhzFull { m: usize },
}

impl Relation {
    pub fn qfi_from_hss(self, h: f64) -> f64 {
        match self {
            Relation::OneQubit => 4.0 * h * h,
            Relation::TwoQubitIndependent => 4.0 / 9.0 * ((1.0 + 36.0 * h * h).sqrt() - 1.0),
            Relation::Teleportation { r } => 8.0 * h * h / (1.0 + r * r),
            Relation::WPhi1 => 10.0 / 9.0 - 2.0 * std::f64::consts::SQRT_2 / (27.0 * h),
            Relation::WPhi2 => 16.0 * h * h / (9.0 * h * h + 2.0),
            Relation::GhzPartial { m } => {
                let mf = m as f64;
                2f64.powi(m as i32 + 2) * h * h * (4f64.powf(1.0 / mf) * h.powf(2.0 / mf) + 1.0).powf(-mf)
            }
            Relation::GhzFull { m } => {
                let mi = m as i32;
                let a = (2.0 * h).powf(2.0 / m as f64);
                a.powi(mi) / ((0.5 * (1.0 + a)).powi(mi) + (0.5 * (1.0 - a)).powi(mi))
            }
        }
    }
}

/// A named scenario with the phase it probes and its default grid.
#[derive(Clone)]
pub struct Preset {
    pub name: &'static str,
    pub family: Arc<dyn EvolvedFamily>,
    pub phase_index: usize,
    pub grid: SweepGrid,
    pub relation: Option<Relation>,
    /// The speeds are expected to vanish somewhere on (or at the end of) the grid.
    pub has_zeros: bool,
}

impl Preset {
    pub fn phi0(&self) -> f64 {
        self.family.default_phases()[self.phase_index]
    }
}

impl std::fmt::Debug for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Preset")
            .field("name", &self.name)
            .field("phase_index", &self.phase_index)
            .field("grid", &self.grid)
            .finish()
    }
}

pub const DEFAULT_STEPS: usize = 600;

pub fn one_qubit_strong() -> Result<Preset> {
    Ok(Preset {
        name: "one-qubit-strong",
        family: Arc::new(OneQubitFamily::new(OneQubitDissipativeConfig::new(
            5.0,
            1.0,
            std::f64::consts::FRAC_PI_2,
            FRAC_PI_4,
        )?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 6.0, DEFAULT_STEPS)?,
        relation: Some(Relation::OneQubit),
        has_zeros: true,
    })
}

pub fn one_qubit_weak() -> Result<Preset> {
    Ok(Preset {
        name: "one-qubit-weak",
        family: Arc::new(OneQubitFamily::new(OneQubitDissipativeConfig::new(
            0.1,
            1.0,
            std::f64::consts::FRAC_PI_2,
            FRAC_PI_4,
        )?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 20.0, DEFAULT_STEPS)?,
        relation: Some(Relation::OneQubit),
        has_zeros: false,
    })
}

pub fn two_qubit_independent() -> Result<Preset> {
    Ok(Preset {
        name: "two-qubit-independent",
        family: Arc::new(TwoQubitIndependentFamily::new(TwoQubitIndependentConfig::new(
            5.0, 1.0, FRAC_PI_4,
        )?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 6.0, DEFAULT_STEPS)?,
        relation: Some(Relation::TwoQubitIndependent),
        has_zeros: true,
    })
}

/// The oscillating common-reservoir case, `τ ∈ [0, 3]` on 600 points.
pub fn common_reservoir(phi: f64) -> Result<Preset> {
    Ok(Preset {
        name: "common-reservoir",
        family: Arc::new(CommonReservoirFamily::new(CommonReservoirConfig::new(0.3, 8.0, phi)?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 3.0, 600)?,
        relation: None,
        has_zeros: false,
    })
}

pub fn teleportation_env() -> Vec<EnvSpin> {
    vec![
        EnvSpin {
            h: 0.7,
            eps: 0.2,
            lam: 0.1,
        },
        EnvSpin {
            h: 1.1,
            eps: 0.05,
            lam: 0.3,
        },
    ]
}

pub fn teleportation() -> Result<Preset> {
    let r = 0.8;
    Ok(Preset {
        name: "teleportation",
        family: Arc::new(TeleportationFamily::new(TeleportationConfig::new(
            r,
            0.3,
            1.0,
            0.7,
            1.0,
            teleportation_env(),
        )?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 6.0, DEFAULT_STEPS)?,
        relation: Some(Relation::Teleportation { r }),
        has_zeros: true,
    })
}

fn w_config() -> Result<MajoranaConfig> {
    MajoranaConfig::new(3, 1, 1.0, 0.5, 1.0, RegisterState::W3 { phi1: 0.4, phi2: 0.9 })
}

pub fn majorana_w_phi1() -> Result<Preset> {
    Ok(Preset {
        name: "majorana-w-phi1",
        family: Arc::new(MajoranaFamily::new(w_config()?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 6.0, DEFAULT_STEPS)?,
        relation: Some(Relation::WPhi1),
        has_zeros: false,
    })
}

pub fn majorana_w_phi2() -> Result<Preset> {
    Ok(Preset {
        name: "majorana-w-phi2",
        family: Arc::new(MajoranaFamily::new(w_config()?)),
        phase_index: 1,
        grid: SweepGrid::new(0.0, 6.0, DEFAULT_STEPS)?,
        relation: Some(Relation::WPhi2),
        has_zeros: true,
    })
}

pub fn majorana_ghz() -> Result<Preset> {
    Ok(Preset {
        name: "majorana-ghz",
        family: Arc::new(MajoranaFamily::new(MajoranaConfig::new(
            3,
            2,
            1.0,
            0.5,
            1.0,
            RegisterState::Ghz { phi: 0.6 },
        )?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 6.0, DEFAULT_STEPS)?,
        relation: Some(Relation::GhzPartial { m: 2 }),
        has_zeros: true,
    })
}

/// Super-Ohmic bath (`Q = 3`): the decay factor revives after a minimum.
pub fn majorana_ghz_super_ohmic() -> Result<Preset> {
    Ok(Preset {
        name: "majorana-ghz-super-ohmic",
        family: Arc::new(MajoranaFamily::new(MajoranaConfig::new(
            3,
            3,
            3.0,
            0.5,
            1.0,
            RegisterState::Ghz { phi: 0.6 },
        )?)),
        phase_index: 0,
        grid: SweepGrid::new(0.0, 8.0, DEFAULT_STEPS)?,
        relation: Some(Relation::GhzFull { m: 3 }),
        has_zeros: false,
    })
}

/// Every built-in scenario, including the three common-reservoir phases.
pub fn all() -> Result<Vec<Preset>> {
    Ok(vec![
        one_qubit_strong()?,
        one_qubit_weak()?,
        two_qubit_independent()?,
        common_reservoir(0.3)?,
        common_reservoir(FRAC_PI_4)?,
        common_reservoir(1.2)?,
        teleportation()?,
        majorana_w_phi1()?,
        majorana_w_phi2()?,
        majorana_ghz()?,
        majorana_ghz_super_ohmic()?,
    ])
}
