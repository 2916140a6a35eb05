//! Phase-encoded registers evolving under the five open-system models.
//!
//! Every model implements [`EvolvedFamily`]: it produces `ρ(t, φ…)`, the
//! exact phase derivative where the dynamics is a linear map of the initial
//! projector, and closed-form QFI/HSS values where they are known.

mod common_reservoir;
mod majorana;
mod one_qubit;
mod teleportation;
mod two_qubit;

pub use common_reservoir::{common_reservoir_amplitude, CommonReservoirConfig, CommonReservoirFamily};
pub use majorana::{majorana_alpha, DecayFactor, MajoranaConfig, MajoranaFamily, RegisterState};
pub use one_qubit::{survival_probability, LorentzianReservoir, OneQubitDissipativeConfig, OneQubitFamily};
pub use teleportation::{
    bell_weights, decoherence_factor, teleport, teleport_map, teleportation_output_closed_form, EnvSpin,
    TeleportationConfig, TeleportationFamily,
};
pub use two_qubit::{TwoQubitIndependentConfig, TwoQubitIndependentFamily};

use crate::error::{Error, Result};
use crate::linalg::{build_phase_encoded_state, c, Complex64, ComplexMatrix, DensityOperator, PureState};

/// Closed-form speeds for one phase parameter; `None` where no closed form exists.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClosedForms {
    pub qfi: Option<f64>,
    pub hss: Option<f64>,
}

/// A parameterized model producing `ρ(t, φ…)`.
pub trait EvolvedFamily: Send + Sync {
    fn name(&self) -> &str;

    /// Phase values encoded in the initial state, one per parameter.
    fn default_phases(&self) -> Vec<f64>;

    fn phase_count(&self) -> usize {
        self.default_phases().len()
    }

    fn state_at(&self, t: f64, phases: &[f64]) -> Result<DensityOperator>;

    /// Exact `∂ρ/∂φ_index`, available when the evolution is a linear map of
    /// the initial projector.
    fn derivative_at(&self, _t: f64, _phases: &[f64], _index: usize) -> Option<Result<ComplexMatrix>> {
        None
    }

    fn closed_forms(&self, _t: f64, _phases: &[f64], _index: usize) -> Result<ClosedForms> {
        Ok(ClosedForms::default())
    }
}

/// `N Σ_j e^{iφ(j)} c_j |j⟩`, where each phase parameter rides on a set of basis states.
#[derive(Debug, Clone)]
pub struct PhaseEncoding {
    coeffs: Vec<Complex64>,
    carriers: Vec<Vec<usize>>,
}

impl PhaseEncoding {
    pub fn new(coeffs: Vec<Complex64>, carriers: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(&bad) = carriers.iter().flatten().find(|&&i| i >= coeffs.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                n: coeffs.len(),
            });
        }
        Ok(Self { coeffs, carriers })
    }

    pub fn phase_count(&self) -> usize {
        self.carriers.len()
    }

    fn basis_phases(&self, phases: &[f64]) -> Result<Vec<f64>> {
        if phases.len() != self.carriers.len() {
            return Err(Error::LengthMismatch(phases.len(), self.carriers.len()));
        }
        let mut out = vec![0.0; self.coeffs.len()];
        for (carrier, &phi) in self.carriers.iter().zip(phases) {
            for &idx in carrier {
                out[idx] += phi;
            }
        }
        Ok(out)
    }

    pub fn state(&self, phases: &[f64]) -> Result<PureState> {
        build_phase_encoded_state(&self.coeffs, &self.basis_phases(phases)?)
    }

    /// `∂φ_k |ψ⟩⟨ψ| = i (D ρ − ρ D)` with `D` the projector onto the carriers of phase `k`.
    pub fn projector_derivative(&self, phases: &[f64], index: usize) -> Result<ComplexMatrix> {
        let carrier = self.carriers.get(index).ok_or(Error::IndexOutOfRange {
            index,
            n: self.carriers.len(),
        })?;
        let psi = self.state(phases)?;
        let amps = psi.amplitudes();
        let mut dpsi = vec![c(0.0, 0.0); amps.len()];
        for &idx in carrier {
            dpsi[idx] += c(0.0, 1.0) * amps[idx];
        }
        Ok(&ComplexMatrix::outer(&dpsi, amps) + &ComplexMatrix::outer(amps, &dpsi))
    }
}

fn check_phase_index(index: usize, count: usize) -> Result<()> {
    if index >= count {
        return Err(Error::IndexOutOfRange { index, n: count });
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// `sin(x)/x` for complex `x`, by series near the origin.
fn sinc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        c(1.0, 0.0) - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sinh(x)/x` for complex `x`, by series near the origin.
fn sinhc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        c(1.0, 0.0) + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_derivative_matches_difference() {
        let enc = PhaseEncoding::new(
            vec![c(1.0, 0.0), c(0.5, 0.2), c(0.0, 0.0), c(0.3, 0.0)],
            vec![vec![1], vec![1, 3]],
        )
        .unwrap();
        let phases = [0.4, 1.3];
        let h = 1e-6;
        for k in 0..2 {
            let mut plus = phases;
            let mut minus = phases;
            plus[k] += h;
            minus[k] -= h;
            let fd =
                (&enc.state(&plus).unwrap().projector() - &enc.state(&minus).unwrap().projector()).scale_real(0.5 / h);
            let exact = enc.projector_derivative(&phases, k).unwrap();
            assert!(fd.max_abs_diff(&exact) < 1e-9);
        }
        assert!(enc.projector_derivative(&phases, 2).is_err());
        assert!(enc.state(&[0.1]).is_err());
    }

    #[test]
    fn encoding_rejects_bad_carrier() {
        assert!(PhaseEncoding::new(vec![c(1.0, 0.0)], vec![vec![3]]).is_err());
    }
}
