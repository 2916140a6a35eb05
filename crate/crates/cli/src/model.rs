//! Flag map → scenario family.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::sync::Arc;

use qspeed::error::Result;
use qspeed::scenarios::{
    CommonReservoirConfig, CommonReservoirFamily, EvolvedFamily, MajoranaConfig, MajoranaFamily,
    OneQubitDissipativeConfig, OneQubitFamily, RegisterState, TeleportationConfig, TeleportationFamily,
    TwoQubitIndependentConfig, TwoQubitIndependentFamily,
};

use crate::args::{Model, RunArgs, StateKind};

pub struct Built {
    pub family: Arc<dyn EvolvedFamily>,
    pub default_t_end: f64,
    pub warnings: Vec<String>,
}

/// Scenario flags that `model` accepts.
fn allowed(model: Model) -> &'static [&'static str] {
    match model {
        Model::OneQubit => &["gamma0", "lambda", "theta", "phi"],
        Model::TwoQubitIndependent => &["gamma0", "lambda", "phi"],
        Model::CommonReservoir => &["r1", "big-r", "phi"],
        Model::Teleportation => &["r", "p", "theta", "phi", "omega-sum", "env"],
        Model::Majorana => &["state", "n", "m", "q", "b", "gamma-cap", "phi", "phi1", "phi2"],
    }
}

fn given(a: &RunArgs) -> Vec<&'static str> {
    let flags = [
        ("gamma0", a.gamma0.is_some()),
        ("lambda", a.lambda.is_some()),
        ("theta", a.theta.is_some()),
        ("phi", a.phi.is_some()),
        ("r1", a.r1.is_some()),
        ("big-r", a.big_r.is_some()),
        ("r", a.r.is_some()),
        ("p", a.p.is_some()),
        ("omega-sum", a.omega_sum.is_some()),
        ("env", !a.env.is_empty()),
        ("state", a.state.is_some()),
        ("n", a.n.is_some()),
        ("m", a.m.is_some()),
        ("q", a.q.is_some()),
        ("b", a.b.is_some()),
        ("gamma-cap", a.gamma_cap.is_some()),
        ("phi1", a.phi1.is_some()),
        ("phi2", a.phi2.is_some()),
    ];
    flags.iter().filter(|f| f.1).map(|f| f.0).collect()
}

/// Flags that were set but mean nothing for the chosen model.
pub fn stray_flags(a: &RunArgs) -> Vec<&'static str> {
    let ok = allowed(a.model);
    let mut stray: Vec<_> = given(a).into_iter().filter(|f| !ok.contains(f)).collect();
    if a.model == Model::Majorana {
        let ghz = a.state.unwrap_or(StateKind::Ghz) == StateKind::Ghz;
        let wrong: &[&str] = if ghz { &["phi1", "phi2"] } else { &["phi"] };
        stray.extend(given(a).into_iter().filter(|f| wrong.contains(f)));
    }
    stray
}

pub fn build(a: &RunArgs) -> Result<Built> {
    let mut warnings = Vec::new();
    let (family, default_t_end): (Arc<dyn EvolvedFamily>, f64) = match a.model {
        Model::OneQubit => {
            let cfg = OneQubitDissipativeConfig::new(
                a.gamma0.unwrap_or(5.0),
                a.lambda.unwrap_or(1.0),
                a.theta.unwrap_or(FRAC_PI_2),
                a.phi.unwrap_or(FRAC_PI_4),
            )?;
            (Arc::new(OneQubitFamily::new(cfg)), 6.0)
        }
        Model::TwoQubitIndependent => {
            let cfg = TwoQubitIndependentConfig::new(
                a.gamma0.unwrap_or(5.0),
                a.lambda.unwrap_or(1.0),
                a.phi.unwrap_or(FRAC_PI_4),
            )?;
            (Arc::new(TwoQubitIndependentFamily::new(cfg)), 6.0)
        }
        Model::CommonReservoir => {
            let cfg =
                CommonReservoirConfig::new(a.r1.unwrap_or(0.3), a.big_r.unwrap_or(8.0), a.phi.unwrap_or(FRAC_PI_4))?;
            (Arc::new(CommonReservoirFamily::new(cfg)), 3.0)
        }
        Model::Teleportation => {
            let cfg = TeleportationConfig::new(
                a.r.unwrap_or(0.8),
                a.p.unwrap_or(0.3),
                a.theta.unwrap_or(1.0),
                a.phi.unwrap_or(0.7),
                a.omega_sum.unwrap_or(1.0),
                a.env.clone(),
            )?;
            (Arc::new(TeleportationFamily::new(cfg)), 6.0)
        }
        Model::Majorana => {
            let state = match a.state.unwrap_or(StateKind::Ghz) {
                StateKind::Ghz => RegisterState::Ghz {
                    phi: a.phi.unwrap_or(0.6),
                },
                StateKind::W => RegisterState::W3 {
                    phi1: a.phi1.unwrap_or(0.4),
                    phi2: a.phi2.unwrap_or(0.9),
                },
            };
            let cfg = MajoranaConfig::new(
                a.n.unwrap_or(3),
                a.m.unwrap_or(1),
                a.q.unwrap_or(1.0),
                a.b.unwrap_or(0.5),
                a.gamma_cap.unwrap_or(1.0),
                state,
            )?;
            if cfg.is_near_ohmic() {
                warnings.push(format!(
                    "Q = {} is within the near-Ohmic band; the decay factor may lose precision",
                    cfg.q_exponent
                ));
            }
            if matches!(state, RegisterState::W3 { .. }) && cfg.m != 1 {
                warnings.push("W-state closed forms exist only for m = 1; closed-form columns left empty".into());
            }
            (Arc::new(MajoranaFamily::new(cfg)), 6.0)
        }
    };
    Ok(Built {
        family,
        default_t_end,
        warnings,
    })
}
