//! Kraus-form channels on single qubits and on registers of independent qubits.

use crate::error::{Error, Result};
use crate::linalg::{c, embed_local, kron, ComplexMatrix, DensityOperator};

/// Completeness tolerance `‖Σ K†K − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidConfig(format!("channel {label} has no Kraus operators")))?;
        let d = first.rows();
        for k in &operators {
            if k.rows() != d || k.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: k.rows().max(k.cols()),
                });
            }
        }
        let ch = Self { operators, label };
        let defect = ch.completeness_defect();
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvariantViolation(format!(
                "channel {} completeness defect {defect:e}",
                ch.label
            )));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![ComplexMatrix::identity(dim)],
            label: "identity".into(),
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// `‖Σ K†K − I‖_max`
    pub fn completeness_defect(&self) -> f64 {
        let d = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&k.adjoint() * k));
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Applies the map to an arbitrary operator. The map is linear, so this
    /// also propagates phase derivatives: `∂ρ_t = 𝓔_t(∂ρ₀)`.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d = m.rows();
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&(k * m) * &k.adjoint()))
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        DensityOperator::new(self.apply_matrix(rho.matrix()).hermitian_part())
    }
}

/// `Σ K ρ K†` with output invariants checked.
pub fn apply(ch: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    ch.apply(rho)
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// Amplitude damping that keeps excited population `p` and scales coherences by `√p`.
///
/// In the standard `{|0⟩,|1⟩}` ordering `K₀ = diag(1, √p)` and
/// `K₁ = √(1−p) |0⟩⟨1|`; in excited-first ordering this is `K₀ = diag(√p, 1)`.
pub fn amplitude_damping_from_survival(p_survive: f64) -> Result<KrausChannel> {
    check_unit_interval("p_survive", p_survive)?;
    let z = c(0.0, 0.0);
    let k0 = ComplexMatrix::from_real_diagonal(&[1.0, p_survive.sqrt()]);
    let k1 = ComplexMatrix::from_row_major(2, 2, vec![z, c((1.0 - p_survive).sqrt(), 0.0), z, z])?;
    KrausChannel::new(vec![k0, k1], format!("amplitude-damping(P={p_survive})"))
}

/// Four-operator Majorana-qubit noise: populations relax as `α²`, coherences as `α`.
pub fn majorana_channel(alpha: f64) -> Result<KrausChannel> {
    check_unit_interval("alpha", alpha)?;
    let z = c(0.0, 0.0);
    let s = c(((1.0 - alpha * alpha) / 2.0).sqrt(), 0.0);
    let k1 = ComplexMatrix::from_real_diagonal(&[(alpha - 1.0) / 2.0, (1.0 - alpha) / 2.0]);
    let k2 = ComplexMatrix::from_real_diagonal(&[(alpha + 1.0) / 2.0, (alpha + 1.0) / 2.0]);
    let k3 = ComplexMatrix::from_row_major(2, 2, vec![z, s, z, z])?;
    let k4 = ComplexMatrix::from_row_major(2, 2, vec![z, z, s, z])?;
    KrausChannel::new(vec![k1, k2, k3, k4], format!("majorana(alpha={alpha})"))
}

/// Independent single-qubit channels on an `n`-qubit register; `None` marks a noiseless qubit.
#[derive(Debug, Clone)]
pub struct RegisterChannel {
    per_qubit: Vec<Option<KrausChannel>>,
}

impl RegisterChannel {
    pub fn new(per_qubit: Vec<Option<KrausChannel>>) -> Result<Self> {
        if per_qubit.is_empty() {
            return Err(Error::InvalidConfig("register channel on zero qubits".into()));
        }
        for ch in per_qubit.iter().flatten() {
            if ch.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: ch.dim(),
                });
            }
        }
        Ok(Self { per_qubit })
    }

    /// The same channel on every qubit.
    pub fn uniform(ch: &KrausChannel, n: usize) -> Result<Self> {
        Self::new(vec![Some(ch.clone()); n])
    }

    pub fn n_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn per_qubit(&self) -> &[Option<KrausChannel>] {
        &self.per_qubit
    }

    /// Applies each local channel in turn. The factors act on distinct
    /// qubits, so this equals the tensor-product Kraus family of [`Self::to_kraus`].
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n_qubits();
        let d = 1usize << n;
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: m.rows(),
            });
        }
        let mut out = m.clone();
        for (q, ch) in self.per_qubit.iter().enumerate() {
            let Some(ch) = ch else { continue };
            let mut next = ComplexMatrix::zeros(d, d);
            for k in ch.operators() {
                let big = embed_local(k, q, n)?;
                next = &next + &(&(&big * &out) * &big.adjoint());
            }
            out = next;
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.apply_matrix(rho.matrix())?.hermitian_part())
    }

    /// Materializes every tensor product `K_{i₁} ⊗ … ⊗ K_{iₙ}`.
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        let mut ops = vec![ComplexMatrix::identity(1)];
        for ch in &self.per_qubit {
            let local: Vec<ComplexMatrix> = match ch {
                Some(ch) => ch.operators().to_vec(),
                None => vec![ComplexMatrix::identity(2)],
            };
            ops = ops.iter().flat_map(|a| local.iter().map(move |b| kron(a, b))).collect();
        }
        KrausChannel::new(ops, "register")
    }
}

/// Applies a register channel and checks the output invariants.
pub fn apply_register(rc: &RegisterChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    rc.apply(rho)
}
