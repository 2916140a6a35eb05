use super::{check_phase_index, check_time, sinc, ClosedForms, EvolvedFamily, PhaseEncoding};
use crate::channels::{amplitude_damping_from_survival, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, Complex64, ComplexMatrix, DensityOperator};

/// Lorentzian reservoir at zero temperature, shared by the damping models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianReservoir {
    pub gamma0: f64,
    pub lambda: f64,
}

impl LorentzianReservoir {
    pub fn new(gamma0: f64, lambda: f64) -> Result<Self> {
        for (name, value) in [("gamma0", gamma0), ("lambda", lambda)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    range: "(0, inf)",
                });
            }
        }
        Ok(Self { gamma0, lambda })
    }

    /// `Γ = √(2γ₀λ − λ²)`, imaginary in the weak-coupling regime.
    pub fn big_gamma(&self) -> Complex64 {
        c(2.0 * self.gamma0 * self.lambda - self.lambda * self.lambda, 0.0).sqrt()
    }

    /// `P(t) = e^{−λt}[cos(Γt/2) + (λ/Γ) sin(Γt/2)]²`, clamped to `[0, 1 + 1e−12]`.
    pub fn survival_probability(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let x = self.big_gamma() * (0.5 * t);
        // (λ/Γ) sin(Γt/2) = (λt/2) sinc(Γt/2) stays finite as Γ → 0
        let amp = x.cos() + sinc(x) * (0.5 * self.lambda * t);
        let p = (-self.lambda * t).exp() * (amp * amp).re;
        Ok(p.clamp(0.0, 1.0 + 1e-12))
    }

    pub fn damping_channel(&self, t: f64) -> Result<KrausChannel> {
        amplitude_damping_from_survival(self.survival_probability(t)?.min(1.0))
    }
}

pub fn survival_probability(cfg: &OneQubitDissipativeConfig, t: f64) -> Result<f64> {
    cfg.reservoir.survival_probability(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneQubitDissipativeConfig {
    pub reservoir: LorentzianReservoir,
    pub theta: f64,
    pub phi: f64,
}

impl OneQubitDissipativeConfig {
    pub fn new(gamma0: f64, lambda: f64, theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            reservoir: LorentzianReservoir::new(gamma0, lambda)?,
            theta,
            phi,
        })
    }
}

/// `cos(θ/2)|1⟩ + e^{iφ} sin(θ/2)|0⟩` under amplitude damping.
#[derive(Debug, Clone)]
pub struct OneQubitFamily {
    cfg: OneQubitDissipativeConfig,
    encoding: PhaseEncoding,
}

impl OneQubitFamily {
    pub fn new(cfg: OneQubitDissipativeConfig) -> Self {
        let half = 0.5 * cfg.theta;
        let encoding =
            PhaseEncoding::new(vec![c(half.sin(), 0.0), c(half.cos(), 0.0)], vec![vec![0]]).expect("two basis states");
        Self { cfg, encoding }
    }

    pub fn config(&self) -> &OneQubitDissipativeConfig {
        &self.cfg
    }
}

impl EvolvedFamily for OneQubitFamily {
    fn name(&self) -> &str {
        "one-qubit"
    }

    fn default_phases(&self) -> Vec<f64> {
        vec![self.cfg.phi]
    }

    fn state_at(&self, t: f64, phases: &[f64]) -> Result<DensityOperator> {
        let ch = self.cfg.reservoir.damping_channel(t)?;
        ch.apply(&self.encoding.state(phases)?.density()?)
    }

    fn derivative_at(&self, t: f64, phases: &[f64], index: usize) -> Option<Result<ComplexMatrix>> {
        Some((|| {
            let d0 = self.encoding.projector_derivative(phases, index)?;
            Ok(self.cfg.reservoir.damping_channel(t)?.apply_matrix(&d0))
        })())
    }

    fn closed_forms(&self, t: f64, _phases: &[f64], index: usize) -> Result<ClosedForms> {
        check_phase_index(index, 1)?;
        let p = self.cfg.reservoir.survival_probability(t)?.min(1.0);
        let s = self.cfg.theta.sin();
        Ok(ClosedForms {
            qfi: Some(p * s * s),
            hss: Some(0.5 * p.sqrt() * s.abs()),
        })
    }
}
