use super::{check_phase_index, check_time, sinhc, ClosedForms, EvolvedFamily, PhaseEncoding};
use crate::error::{Error, Result};
use crate::linalg::{c, Complex64, ComplexMatrix, DensityOperator};

const IDX_01: usize = 0b01;
const IDX_10: usize = 0b10;
const IDX_00: usize = 0b00;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonReservoirConfig {
    pub r1: f64,
    pub big_r: f64,
    pub phi: f64,
}

impl CommonReservoirConfig {
    pub fn new(r1: f64, big_r: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r1) {
            return Err(Error::OutOfRange {
                name: "r1",
                value: r1,
                range: "[0, 1]",
            });
        }
        if !(big_r > 0.0) || !big_r.is_finite() {
            return Err(Error::OutOfRange {
                name: "big_r",
                value: big_r,
                range: "(0, inf)",
            });
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { r1, big_r, phi })
    }

    pub fn r2(&self) -> f64 {
        (1.0 - self.r1 * self.r1).max(0.0).sqrt()
    }
}

/// `𝓕_τ = e^{−τ/2}[cosh(dτ/2) + sinh(dτ/2)/d]` with `d = √(1 − 4R²)`, possibly imaginary.
pub fn common_reservoir_amplitude(cfg: &CommonReservoirConfig, tau: f64) -> Result<f64> {
    check_time(tau)?;
    let d = c(1.0 - 4.0 * cfg.big_r * cfg.big_r, 0.0).sqrt();
    let x = d * (0.5 * tau);
    let v: Complex64 = (x.cosh() + sinhc(x) * (0.5 * tau)) * (-0.5 * tau).exp();
    debug_assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1.0));
    Ok(v.re)
}

/// `(|10⟩ + e^{iφ}|01⟩)/√2` coupled collectively to one Lorentzian reservoir.
///
/// Time is the dimensionless `τ = λt`. The single-excitation amplitudes
/// evolve by the real symmetric matrix `M(τ)` and the lost weight goes to `|00⟩`.
#[derive(Debug, Clone)]
pub struct CommonReservoirFamily {
    cfg: CommonReservoirConfig,
    encoding: PhaseEncoding,
}

impl CommonReservoirFamily {
    pub fn new(cfg: CommonReservoirConfig) -> Self {
        let encoding = PhaseEncoding::new(
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![vec![IDX_01]],
        )
        .expect("four basis states");
        Self { cfg, encoding }
    }

    pub fn config(&self) -> &CommonReservoirConfig {
        &self.cfg
    }

    /// Rows/columns ordered (|10⟩, |01⟩): `c = M · (a₁₀, a₀₁)`.
    fn amplitude_map(&self, tau: f64) -> Result<[[f64; 2]; 2]> {
        let f = common_reservoir_amplitude(&self.cfg, tau)?;
        let (r1, r2) = (self.cfg.r1, self.cfg.r2());
        let off = r1 * r2 * (f - 1.0);
        Ok([[r2 * r2 + r1 * r1 * f, off], [off, r1 * r1 + r2 * r2 * f]])
    }

    /// Evolves any operator supported on span{|10⟩, |01⟩} (plus a `|00⟩⟨00|` part).
    fn evolve_matrix(&self, tau: f64, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let map = self.amplitude_map(tau)?;
        let idx = [IDX_10, IDX_01];
        let mut out = ComplexMatrix::zeros(4, 4).as_dmatrix().clone();
        let mut block_trace = c(0.0, 0.0);
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                let mut v = c(0.0, 0.0);
                for (k, &ik) in idx.iter().enumerate() {
                    for (l, &il) in idx.iter().enumerate() {
                        v += m.get(ik, il) * (map[a][k] * map[b][l]);
                    }
                }
                out[(ia, ib)] = v;
            }
            block_trace += out[(ia, ia)];
        }
        let input_trace = m.get(IDX_10, IDX_10) + m.get(IDX_01, IDX_01) + m.get(IDX_00, IDX_00);
        out[(IDX_00, IDX_00)] = input_trace - block_trace;
        Ok(ComplexMatrix::from_dmatrix(out))
    }

    /// `c₁, c₂` for the given phase, via the overlaps `β±`.
    pub fn amplitudes(&self, tau: f64, phi: f64) -> Result<(Complex64, Complex64)> {
        let f = common_reservoir_amplitude(&self.cfg, tau)?;
        let (r1, r2) = (self.cfg.r1, self.cfg.r2());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = Complex64::from_polar(s, phi);
        let beta_p = e * r2 + r1 * s;
        let beta_m = -e * r1 + r2 * s;
        Ok((beta_m * r2 + beta_p * (r1 * f), -beta_m * r1 + beta_p * (r2 * f)))
    }
}

impl EvolvedFamily for CommonReservoirFamily {
    fn name(&self) -> &str {
        "common-reservoir"
    }

    fn default_phases(&self) -> Vec<f64> {
        vec![self.cfg.phi]
    }

    fn state_at(&self, tau: f64, phases: &[f64]) -> Result<DensityOperator> {
        let rho0 = self.encoding.state(phases)?.projector();
        DensityOperator::new(self.evolve_matrix(tau, &rho0)?)
    }

    fn derivative_at(&self, tau: f64, phases: &[f64], index: usize) -> Option<Result<ComplexMatrix>> {
        Some(
            self.encoding
                .projector_derivative(phases, index)
                .and_then(|d0| self.evolve_matrix(tau, &d0)),
        )
    }

    fn closed_forms(&self, tau: f64, phases: &[f64], index: usize) -> Result<ClosedForms> {
        check_phase_index(index, 1)?;
        let phi = *phases.first().ok_or(Error::LengthMismatch(0, 1))?;
        let f = common_reservoir_amplitude(&self.cfg, tau)?;
        let (r1, r2) = (self.cfg.r1, self.cfg.r2());
        let (f2, a, b) = (f * f, r1 * r1, r2 * r2);
        let radicand = f2 * a * a - 2.0 * (f2 - 1.0).powi(2) * a * b * (2.0 * phi).cos()
            + 2.0 * (f2 * f2 - f2 + 1.0) * a * b
            + f2 * b * b;
        Ok(ClosedForms {
            qfi: None,
            hss: Some(0.5 * (a + b) * radicand.max(0.0).sqrt()),
        })
    }
}
