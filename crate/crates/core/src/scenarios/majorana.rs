use super::{check_phase_index, check_time, ClosedForms, EvolvedFamily, PhaseEncoding};
use crate::channels::{majorana_channel, RegisterChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityOperator};
use crate::specfun::{gamma_fn, hyp1f1, hyp2f2_11_3half_2, SeriesControl};

/// Within this distance of the Ohmic point the `Q ≠ 1` branch loses digits to cancellation.
const NEAR_OHMIC: f64 = 0.01;

/// Register probe state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegisterState {
    /// `(e^{iφ₁}|100⟩ + |010⟩ + e^{iφ₂}|001⟩)/√3`.
    W3 { phi1: f64, phi2: f64 },
    /// `(e^{iφ}|0…0⟩ + |1…1⟩)/√2`.
    Ghz { phi: f64 },
}

/// `n` Majorana qubits of which the last `m` see the fermionic bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajoranaConfig {
    pub n: usize,
    pub m: usize,
    pub q_exponent: f64,
    pub b_field: f64,
    pub gamma_cap0: f64,
    pub state: RegisterState,
}

impl MajoranaConfig {
    pub fn new(
        n: usize,
        m: usize,
        q_exponent: f64,
        b_field: f64,
        gamma_cap0: f64,
        state: RegisterState,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("register needs at least one qubit".into()));
        }
        if m == 0 || m > n {
            return Err(Error::InvalidConfig(format!(
                "noisy qubits m={m} must satisfy 1 <= m <= n={n}"
            )));
        }
        if !(q_exponent >= 0.0) || !q_exponent.is_finite() {
            return Err(Error::OutOfRange {
                name: "q_exponent",
                value: q_exponent,
                range: "[0, inf)",
            });
        }
        if !b_field.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(gamma_cap0 > 0.0) || !gamma_cap0.is_finite() {
            return Err(Error::OutOfRange {
                name: "gamma_cap0",
                value: gamma_cap0,
                range: "(0, inf)",
            });
        }
        match state {
            RegisterState::W3 { phi1, phi2 } => {
                if n != 3 {
                    return Err(Error::InvalidConfig(format!("W state needs n = 3, got {n}")));
                }
                if !phi1.is_finite() || !phi2.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
            RegisterState::Ghz { phi } => {
                if !phi.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self {
            n,
            m,
            q_exponent,
            b_field,
            gamma_cap0,
            state,
        })
    }

    /// `β = −4π/Γ(Q+1) · Γ₀^{−(Q+1)}`.
    pub fn beta(&self) -> Result<f64> {
        Ok(-4.0 * std::f64::consts::PI / gamma_fn(self.q_exponent + 1.0)?
            * self.gamma_cap0.powf(-(self.q_exponent + 1.0)))
    }

    pub fn is_near_ohmic(&self) -> bool {
        let d = (self.q_exponent - 1.0).abs();
        d > 0.0 && d < NEAR_OHMIC
    }
}

/// `α(t)` together with numerical-quality flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFactor {
    pub alpha: f64,
    /// `Q` is within 0.01 of 1 but not equal: the general branch cancels badly.
    pub near_ohmic_warning: bool,
    pub precision_loss: bool,
}

/// `α(t) = exp(−2B²|β| I_Q(t))`, with `I_Q` from ₁F₁ (`Q ≠ 1`) or ₂F₂ (`Q = 1`).
pub fn majorana_alpha(cfg: &MajoranaConfig, t: f64) -> Result<DecayFactor> {
    check_time(t)?;
    let g0 = cfg.gamma_cap0;
    let q = cfg.q_exponent;
    let z = -0.25 * t * t * g0 * g0;
    let ctl = SeriesControl::default();
    let (i_q, precision_loss) = if q == 1.0 {
        let s = hyp2f2_11_3half_2(z, ctl)?;
        (0.5 * t * t * g0 * g0 * s.value, s.precision_loss)
    } else {
        let a = 0.5 * (q - 1.0);
        let f = hyp1f1(a, 0.5, z, ctl)?;
        (2.0 * g0.powf(q - 1.0) * gamma_fn(a)? * (1.0 - f), false)
    };
    let exponent = -2.0 * cfg.b_field * cfg.b_field * cfg.beta()?.abs() * i_q;
    if !exponent.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(DecayFactor {
        alpha: exponent.exp().clamp(0.0, 1.0),
        near_ohmic_warning: cfg.is_near_ohmic(),
        precision_loss,
    })
}

#[derive(Debug, Clone)]
pub struct MajoranaFamily {
    cfg: MajoranaConfig,
    encoding: PhaseEncoding,
}

impl MajoranaFamily {
    pub fn new(cfg: MajoranaConfig) -> Self {
        let dim = 1usize << cfg.n;
        let mut coeffs = vec![c(0.0, 0.0); dim];
        let carriers = match cfg.state {
            RegisterState::W3 { .. } => {
                for idx in [0b100, 0b010, 0b001] {
                    coeffs[idx] = c(1.0, 0.0);
                }
                vec![vec![0b100], vec![0b001]]
            }
            RegisterState::Ghz { .. } => {
                coeffs[0] = c(1.0, 0.0);
                coeffs[dim - 1] = c(1.0, 0.0);
                vec![vec![0]]
            }
        };
        let encoding = PhaseEncoding::new(coeffs, carriers).expect("carriers inside register");
        Self { cfg, encoding }
    }

    pub fn config(&self) -> &MajoranaConfig {
        &self.cfg
    }

    fn channel(&self, t: f64) -> Result<RegisterChannel> {
        let ch = majorana_channel(majorana_alpha(&self.cfg, t)?.alpha)?;
        let first_noisy = self.cfg.n - self.cfg.m;
        RegisterChannel::new(
            (0..self.cfg.n)
                .map(|k| (k >= first_noisy).then(|| ch.clone()))
                .collect(),
        )
    }
}

/// Closed forms for the W register with only its last qubit noisy.
fn w_closed_forms(alpha: f64, index: usize) -> ClosedForms {
    let a2 = alpha * alpha;
    if index == 0 {
        ClosedForms {
            qfi: Some(2.0 / 9.0 * (5.0 - 2.0 / (a2 + 1.0))),
            hss: Some((a2 + 1.0) / (3.0 * std::f64::consts::SQRT_2)),
        }
    } else {
        ClosedForms {
            qfi: Some(16.0 * a2 / (9.0 * a2 + 9.0)),
            hss: Some(std::f64::consts::SQRT_2 * alpha / 3.0),
        }
    }
}

/// GHZ closed forms; the QFI expression differs once every qubit is noisy.
fn ghz_closed_forms(alpha: f64, n: usize, m: usize) -> ClosedForms {
    let a2 = alpha * alpha;
    let mi = m as i32;
    let qfi = if m < n {
        (2.0 * a2 / (1.0 + a2)).powi(mi)
    } else {
        a2.powi(mi) / ((0.5 * (1.0 + a2)).powi(mi) + (0.5 * (1.0 - a2)).powi(mi))
    };
    ClosedForms {
        qfi: Some(qfi),
        hss: Some(0.5 * alpha.powi(mi)),
    }
}

impl EvolvedFamily for MajoranaFamily {
    fn name(&self) -> &str {
        match self.cfg.state {
            RegisterState::W3 { .. } => "majorana-w",
            RegisterState::Ghz { .. } => "majorana-ghz",
        }
    }

    fn default_phases(&self) -> Vec<f64> {
        match self.cfg.state {
            RegisterState::W3 { phi1, phi2 } => vec![phi1, phi2],
            RegisterState::Ghz { phi } => vec![phi],
        }
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
        check_phase_index(index, self.encoding.phase_count())?;
        let alpha = majorana_alpha(&self.cfg, t)?.alpha;
        Ok(match self.cfg.state {
            RegisterState::W3 { .. } if self.cfg.m == 1 => w_closed_forms(alpha, index),
            RegisterState::W3 { .. } => ClosedForms::default(),
            RegisterState::Ghz { .. } => ghz_closed_forms(alpha, self.cfg.n, self.cfg.m),
        })
    }
}
