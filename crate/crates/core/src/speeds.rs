//! Classical and quantum distances and their statistical speeds.
//!
//! The quantum Fisher information uses the spectral sum
//! `Σ_{ij} 2/(λ_i+λ_j) |⟨φ_i|∂ρ|φ_j⟩|²`; the Hilbert-Schmidt speed
//! `√(½ Tr[(∂ρ)²])` needs no diagonalization at all.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, DensityOperator};

/// Default support cutoff on `λ_i + λ_j` in [`qfi`].
pub const QFI_SUPPORT_CUTOFF: f64 = 1e-12;

const DISTRIBUTION_NEG_TOL: f64 = -1e-12;
const DISTRIBUTION_SUM_TOL: f64 = 1e-10;
const POVM_TOL: f64 = 1e-10;
const DERIVATIVE_HERMITIAN_TOL: f64 = 1e-10;
const DERIVATIVE_TRACE_TOL: f64 = 1e-8;
const CFI_SKIP_BELOW: f64 = 1e-14;

/// Discrete probability distribution; tiny negative weights are clamped to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    weights: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < DISTRIBUTION_NEG_TOL) {
            return Err(Error::InvariantViolation(format!(
                "invalid probability weights {weights:?}"
            )));
        }
        let weights: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(Error::InvariantViolation(format!("probabilities sum to {total}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Positive-operator-valued measure.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvariantViolation("empty POVM".into()))?;
        let d = first.rows();
        let mut total = ComplexMatrix::zeros(d, d);
        for e in &elements {
            if e.rows() != d || e.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: e.rows(),
                });
            }
            let min = hermitian_eig(e)?.min_eigenvalue();
            if min < -POVM_TOL {
                return Err(Error::InvariantViolation(format!(
                    "POVM element has eigenvalue {min:e}"
                )));
            }
            total = &total + e;
        }
        let dev = total.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > POVM_TOL {
            return Err(Error::InvariantViolation(format!(
                "POVM elements sum to identity within {dev:e} only"
            )));
        }
        Ok(Self { elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        Self::projective(&ComplexMatrix::identity(dim)).expect("identity basis is orthonormal")
    }

    /// Projective measurement onto the orthonormal columns of `basis`.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let d = basis.rows();
        let elements = (0..basis.cols())
            .map(|k| {
                let col: Vec<_> = (0..d).map(|i| basis.get(i, k)).collect();
                ComplexMatrix::outer(&col, &col)
            })
            .collect();
        Self::new(elements)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }
}

/// A state together with its Hermitian derivative with respect to the phase (per radian).
#[derive(Debug, Clone)]
pub struct StateDerivative {
    state: DensityOperator,
    derivative: ComplexMatrix,
}

impl StateDerivative {
    /// Checks the derivative invariants and stores its Hermitian part.
    pub fn new(state: DensityOperator, derivative: ComplexMatrix) -> Result<Self> {
        if derivative.rows() != state.dim() || derivative.cols() != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: state.dim(),
                got: derivative.rows(),
            });
        }
        let defect = derivative.hermiticity_defect();
        if defect > DERIVATIVE_HERMITIAN_TOL {
            return Err(Error::InvariantViolation(format!(
                "derivative Hermiticity defect {defect:e}"
            )));
        }
        let tr = derivative.trace();
        if tr.norm() > DERIVATIVE_TRACE_TOL {
            return Err(Error::InvariantViolation(format!("derivative trace {tr}")));
        }
        Ok(Self {
            state,
            derivative: derivative.hermitian_part(),
        })
    }

    /// Second-order central difference `(ρ(φ+h) − ρ(φ−h)) / 2h`.
    pub fn central_difference(
        state: DensityOperator,
        plus: &DensityOperator,
        minus: &DensityOperator,
        h: f64,
    ) -> Result<Self> {
        let diff = (plus.matrix() - minus.matrix()).scale_real(0.5 / h);
        Self::new(state, diff)
    }

    /// Fourth-order stencil `(−ρ₊₂ + 8ρ₊₁ − 8ρ₋₁ + ρ₋₂) / 12h`.
    pub fn five_point(state: DensityOperator, [m2, m1, p1, p2]: [&DensityOperator; 4], h: f64) -> Result<Self> {
        let inner = (p1.matrix() - m1.matrix()).scale_real(8.0);
        let outer = p2.matrix() - m2.matrix();
        Self::new(state, (&inner - &outer).scale_real(1.0 / (12.0 * h)))
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    pub fn derivative(&self) -> &ComplexMatrix {
        &self.derivative
    }
}

fn check_lengths(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    Ok(())
}

/// `√(½ Σ (√p_x − √q_x)²)`
pub fn hellinger_distance(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    check_lengths(p, q)?;
    let s: f64 = p
        .weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum();
    Ok((0.5 * s).sqrt())
}

/// `√(½ Σ (p_x − q_x)²)`
pub fn l2_distance(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    check_lengths(p, q)?;
    let s: f64 = p.weights.iter().zip(&q.weights).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((0.5 * s).sqrt())
}

/// Fisher information `Σ p_x (∂ ln p_x)²` of a one-parameter family, with
/// central-difference derivatives of step `h`. Outcomes with `p_x < 1e-14` are skipped.
pub fn classical_fisher_information<F>(family: F, phi0: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> ProbabilityDistribution,
{
    if !(h > 0.0) {
        return Err(Error::OutOfRange {
            name: "h",
            value: h,
            range: "(0, inf)",
        });
    }
    let p = family(phi0);
    let plus = family(phi0 + h);
    let minus = family(phi0 - h);
    check_lengths(&p, &plus)?;
    check_lengths(&p, &minus)?;
    let mut f = 0.0;
    for x in 0..p.len() {
        let px = p.weights[x];
        if px < CFI_SKIP_BELOW {
            continue;
        }
        let dp = (plus.weights[x] - minus.weights[x]) / (2.0 * h);
        f += dp * dp / px;
    }
    Ok(f)
}

/// `p_x = Re Tr(E_x ρ)`
pub fn born_probabilities(rho: &DensityOperator, m: &Povm) -> Result<ProbabilityDistribution> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: m.dim(),
        });
    }
    let weights = m.elements.iter().map(|e| e.trace_product(rho.matrix()).re).collect();
    ProbabilityDistribution::new(weights)
}

fn same_dim(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    Ok(())
}

/// Uhlmann fidelity `Tr√(√ρ σ √ρ)` through two Hermitian eigendecompositions.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let sqrt_rho = hermitian_eig(rho.matrix())?.map_spectrum(|l| l.max(0.0).sqrt());
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let spectrum = hermitian_eig(&inner.hermitian_part())?.eigenvalues;
    Ok(spectrum.iter().map(|l| l.max(0.0).sqrt()).sum())
}

/// `√(1 − fidelity)`, clamped at zero.
pub fn bures_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok((1.0 - fidelity(rho, sigma)?).max(0.0).sqrt())
}

/// `√(½ Tr[(ρ − σ)²])`, no diagonalization.
pub fn hilbert_schmidt_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let d = rho.matrix() - sigma.matrix();
    Ok((0.5 * d.trace_product(&d).re).max(0.0).sqrt())
}

/// Hilbert-Schmidt speed `√(½ Tr[(∂ρ)²])`.
pub fn hss(sd: &StateDerivative) -> f64 {
    let d = sd.derivative();
    (0.5 * d.trace_product(d).re).max(0.0).sqrt()
}

/// Quantum Fisher information, skipping eigenvalue pairs with `λ_i + λ_j ≤ support_cutoff`.
pub fn qfi(sd: &StateDerivative, support_cutoff: f64) -> Result<f64> {
    let eig = hermitian_eig(sd.state().matrix())?;
    let v = &eig.eigenvectors;
    let rotated = &(&v.adjoint() * sd.derivative()) * v;
    let n = eig.eigenvalues.len();
    let mut f = 0.0;
    for i in 0..n {
        for j in 0..n {
            let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
            if denom > support_cutoff {
                f += 2.0 / denom * rotated.get(i, j).norm_sqr();
            }
        }
    }
    Ok(f.max(0.0))
}

/// Quantum Cramér-Rao limit `1/√F`.
pub fn cramer_rao_bound(f: f64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(Error::NonPositiveInformation(f));
    }
    Ok(1.0 / f.sqrt())
}
