use super::{check_phase_index, ClosedForms, EvolvedFamily, LorentzianReservoir, PhaseEncoding};
use crate::channels::RegisterChannel;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitIndependentConfig {
    pub reservoir: LorentzianReservoir,
    pub phi: f64,
}

impl TwoQubitIndependentConfig {
    pub fn new(gamma0: f64, lambda: f64, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            reservoir: LorentzianReservoir::new(gamma0, lambda)?,
            phi,
        })
    }
}

/// `(e^{iφ}|10⟩ + |01⟩ + |00⟩)/√3`, each qubit damped by its own reservoir.
#[derive(Debug, Clone)]
pub struct TwoQubitIndependentFamily {
    cfg: TwoQubitIndependentConfig,
    encoding: PhaseEncoding,
}

impl TwoQubitIndependentFamily {
    pub fn new(cfg: TwoQubitIndependentConfig) -> Self {
        let encoding = PhaseEncoding::new(
            vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![vec![0b10]],
        )
        .expect("four basis states");
        Self { cfg, encoding }
    }

    fn channel(&self, t: f64) -> Result<RegisterChannel> {
        RegisterChannel::uniform(&self.cfg.reservoir.damping_channel(t)?, 2)
    }
}

impl EvolvedFamily for TwoQubitIndependentFamily {
    fn name(&self) -> &str {
        "two-qubit-independent"
    }

    fn default_phases(&self) -> Vec<f64> {
        vec![self.cfg.phi]
    }

    fn state_at(&self, t: f64, phases: &[f64]) -> Result<DensityOperator> {
        self.channel(t)?.apply(&self.encoding.state(phases)?.density()?)
    }

    fn derivative_at(&self, t: f64, phases: &[f64], index: usize) -> Option<Result<ComplexMatrix>> {
        Some((|| {
            let d0 = self.encoding.projector_derivative(phases, index)?;
            self.channel(t)?.apply_matrix(&d0)
        })())
    }

    fn closed_forms(&self, t: f64, _phases: &[f64], index: usize) -> Result<ClosedForms> {
        check_phase_index(index, 1)?;
        let p = self.cfg.reservoir.survival_probability(t)?.min(1.0);
        Ok(ClosedForms {
            qfi: Some(8.0 * p / 9.0),
            hss: Some((p * (p + 1.0)).sqrt() / 3.0),
        })
    }
}
