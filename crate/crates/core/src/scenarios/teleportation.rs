use super::{check_phase_index, check_time, ClosedForms, EvolvedFamily, PhaseEncoding};
use crate::error::{Error, Result};
use crate::linalg::{c, kron, Complex64, ComplexMatrix, DensityOperator, Pauli};

const WEIGHT_TOL: f64 = 1e-10;

/// One environment spin: tunnelling `h` and couplings `eps`, `lam` to the two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSpin {
    pub h: f64,
    pub eps: f64,
    pub lam: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportationConfig {
    pub r: f64,
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
    pub omega_sum: f64,
    pub env_spins: Vec<EnvSpin>,
}

impl TeleportationConfig {
    pub fn new(r: f64, p: f64, theta: f64, phi: f64, omega_sum: f64, env_spins: Vec<EnvSpin>) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "(0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                range: "[0, 1]",
            });
        }
        let spins_finite = env_spins
            .iter()
            .all(|s| s.h.is_finite() && s.eps.is_finite() && s.lam.is_finite());
        if !theta.is_finite() || !phi.is_finite() || !omega_sum.is_finite() || !spins_finite {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            r,
            p,
            theta,
            phi,
            omega_sum,
            env_spins,
        })
    }

    /// `A(t) = √(p(1−p)) · r · Q(t)`.
    pub fn coherence_amplitude(&self, t: f64) -> Result<f64> {
        Ok((self.p * (1.0 - self.p)).sqrt() * self.r * decoherence_factor(self, t)?)
    }

    /// Two-qubit resource state after exposure to the spin bath.
    pub fn resource(&self, t: f64) -> Result<DensityOperator> {
        let a = self.coherence_amplitude(t)?;
        let mix = 0.25 * (1.0 - self.r);
        let coh = Complex64::from_polar(a, -self.omega_sum * t);
        let mut m =
            ComplexMatrix::from_real_diagonal(&[mix + self.r * (1.0 - self.p), mix, mix, mix + self.r * self.p])
                .as_dmatrix()
                .clone();
        m[(0, 3)] = coh;
        m[(3, 0)] = coh.conj();
        DensityOperator::new(ComplexMatrix::from_dmatrix(m))
    }
}

/// `Q(t) = ∏ᵢ (1 − [2(εᵢ+λᵢ)²/(hᵢ²+(εᵢ+λᵢ)²)] sin²(t√(hᵢ²+(εᵢ+λᵢ)²)))`.
pub fn decoherence_factor(cfg: &TeleportationConfig, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(cfg
        .env_spins
        .iter()
        .map(|s| {
            let g2 = (s.eps + s.lam).powi(2);
            let w2 = s.h * s.h + g2;
            if w2 == 0.0 {
                return 1.0;
            }
            let sn = (t * w2.sqrt()).sin();
            1.0 - 2.0 * g2 / w2 * sn * sn
        })
        .product())
}

/// Overlaps `Tr(𝓑ᵢ ρ)` with the four Bell projectors, in Pauli order I, X, Y, Z.
pub fn bell_weights(resource: &DensityOperator) -> Result<[f64; 4]> {
    if resource.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: resource.dim(),
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi_plus = vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
    let b0 = ComplexMatrix::outer(&phi_plus, &phi_plus);
    let mut out = [0.0; 4];
    for (w, pauli) in out.iter_mut().zip(Pauli::ALL) {
        let u = kron(&Pauli::I.matrix(), &pauli.matrix());
        let bi = &(&u * &b0) * &u;
        *w = bi.trace_product(resource.matrix()).re;
    }
    Ok(out)
}

/// The teleportation output map applied to an arbitrary 4×4 operator (it is linear).
pub fn teleport_map(resource: &DensityOperator, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: m.rows().max(m.cols()),
        });
    }
    let q = bell_weights(resource)?;
    let total: f64 = q.iter().sum::<f64>().powi(2);
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::WeightsNotNormalized(total));
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for (i, pi) in Pauli::ALL.iter().enumerate() {
        for (j, pj) in Pauli::ALL.iter().enumerate() {
            let w = q[i] * q[j];
            if w == 0.0 {
                continue;
            }
            let u = kron(&pi.matrix(), &pj.matrix());
            out = &out + &(&(&u * m) * &u).scale_real(w);
        }
    }
    Ok(out)
}

/// `ρ_out = Σ_ij p_ij (σᵢ⊗σⱼ) ρ_in (σᵢ⊗σⱼ)` with `p_ij = Tr(𝓑ᵢρ_res) Tr(𝓑ⱼρ_res)`.
pub fn teleport(resource: &DensityOperator, input: &DensityOperator) -> Result<DensityOperator> {
    if input.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: input.dim(),
        });
    }
    DensityOperator::new(teleport_map(resource, input.matrix())?.hermitian_part())
}

/// Output of the protocol for the input `cos(θ/2)|10⟩ + e^{iφ} sin(θ/2)|01⟩`, in
/// closed form; the coherence carries `cos²((Ω₁+Ω₂)t)`.
pub fn teleportation_output_closed_form(cfg: &TeleportationConfig, t: f64, phi: f64) -> Result<ComplexMatrix> {
    let a = cfg.coherence_amplitude(t)?;
    let big_r = 0.25 * (1.0 - cfg.r);
    let r = cfg.r;
    let cos2 = (cfg.omega_sum * t).cos().powi(2);
    let half = 0.5 * cfg.theta;
    let corner = 4.0 * big_r * big_r + 2.0 * big_r * r;
    let mid = 4.0 * big_r * r + r * r;
    let x = Complex64::from_polar(2.0 * a * a * cos2 * cfg.theta.sin(), phi);
    let mut m = ComplexMatrix::from_real_diagonal(&[
        corner,
        mid * half.sin().powi(2) + 4.0 * big_r * big_r,
        mid * half.cos().powi(2) + 4.0 * big_r * big_r,
        corner,
    ])
    .as_dmatrix()
    .clone();
    m[(1, 2)] = x;
    m[(2, 1)] = x.conj();
    Ok(ComplexMatrix::from_dmatrix(m))
}

/// Phase-encoded two-qubit input sent through the noisy-resource teleportation channel.
#[derive(Debug, Clone)]
pub struct TeleportationFamily {
    cfg: TeleportationConfig,
    encoding: PhaseEncoding,
}

impl TeleportationFamily {
    pub fn new(cfg: TeleportationConfig) -> Self {
        let half = 0.5 * cfg.theta;
        let encoding = PhaseEncoding::new(
            vec![c(0.0, 0.0), c(half.sin(), 0.0), c(half.cos(), 0.0), c(0.0, 0.0)],
            vec![vec![0b01]],
        )
        .expect("four basis states");
        Self { cfg, encoding }
    }

    pub fn config(&self) -> &TeleportationConfig {
        &self.cfg
    }
}

impl EvolvedFamily for TeleportationFamily {
    fn name(&self) -> &str {
        "teleportation"
    }

    fn default_phases(&self) -> Vec<f64> {
        vec![self.cfg.phi]
    }

    fn state_at(&self, t: f64, phases: &[f64]) -> Result<DensityOperator> {
        teleport(&self.cfg.resource(t)?, &self.encoding.state(phases)?.density()?)
    }

    fn derivative_at(&self, t: f64, phases: &[f64], index: usize) -> Option<Result<ComplexMatrix>> {
        Some((|| {
            let d0 = self.encoding.projector_derivative(phases, index)?;
            teleport_map(&self.cfg.resource(t)?, &d0)
        })())
    }

    fn closed_forms(&self, t: f64, _phases: &[f64], index: usize) -> Result<ClosedForms> {
        check_phase_index(index, 1)?;
        let a2 = self.cfg.coherence_amplitude(t)?.powi(2);
        let cos2 = (self.cfg.omega_sum * t).cos().powi(2);
        let s = self.cfg.theta.sin();
        let r = self.cfg.r;
        Ok(ClosedForms {
            qfi: Some(32.0 * a2 * a2 * cos2 * cos2 * s * s / (1.0 + r * r)),
            hss: Some(2.0 * a2 * cos2 * s.abs()),
        })
    }
}
