//! Dense complex linear algebra for small qubit registers.
//!
//! Basis convention: the computational basis is ordered `|0…00⟩, |0…01⟩, …`
//! with qubit 0 as the leftmost (most significant) tensor factor. Within a
//! single qubit `|0⟩` comes first. Models whose published matrices list the
//! excited state first convert through [`ComplexMatrix::flip_qubit_order`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance for [`hermitian_eig`] inputs.
pub const EIG_HERMITIAN_TOL: f64 = 1e-10;
/// Maximum asymmetry accepted by [`DensityOperator::new`].
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
/// Maximum trace deviation accepted by [`DensityOperator::new`].
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted by [`DensityOperator::new`].
pub const DENSITY_POSITIVITY_TOL: f64 = -1e-10;

const MAX_QUBITS: usize = 10;

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad lengths and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch(entries.len(), rows * cols));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let d = diag.len();
        Self::from_fn(d, d, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self::from_fn(d, d, |i, j| if i == j { c(diag[i], 0.0) } else { c(0.0, 0.0) })
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c(factor, 0.0))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.inner.shape(), other.inner.shape(), "shape mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij − conj(A_ji)|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self {
            inner: (&self.inner + self.inner.adjoint()) * c(0.5, 0.0),
        }
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols(), other.rows());
        assert_eq!(self.rows(), other.cols());
        let mut acc = c(0.0, 0.0);
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                acc += self.inner[(i, k)] * other.inner[(k, i)];
            }
        }
        acc
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    /// Reverses the single-qubit basis order on every tensor factor
    /// (`{|1⟩,|0⟩}` ↔ `{|0⟩,|1⟩}`), i.e. conjugation by `X⊗…⊗X`.
    pub fn flip_qubit_order(&self) -> Self {
        assert!(self.is_square() && self.rows().is_power_of_two());
        let mask = self.rows() - 1;
        Self::from_fn(self.rows(), self.cols(), |i, j| self.inner[(i ^ mask, j ^ mask)])
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

/// Single-qubit Pauli operators, `σ₀ = I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let entries = match self {
            Pauli::I => [one, z, z, one],
            Pauli::X => [z, one, one, z],
            Pauli::Y => [z, c(0.0, -1.0), c(0.0, 1.0), z],
            Pauli::Z => [one, z, z, -one],
        };
        ComplexMatrix::from_fn(2, 2, |i, j| entries[2 * i + j])
    }
}

/// Spectrum and eigenvectors of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V Λ V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        &(&self.eigenvectors * &lambda) * &self.eigenvectors.adjoint()
    }

    /// Applies `f` to the spectrum: `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let lambda = ComplexMatrix::from_real_diagonal(&mapped);
        &(&self.eigenvectors * &lambda) * &self.eigenvectors.adjoint()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before the solve; asymmetry above
/// [`EIG_HERMITIAN_TOL`] is rejected.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: a.cols(),
        });
    }
    let defect = a.hermiticity_defect();
    if !(defect <= EIG_HERMITIAN_TOL) {
        return Err(Error::NonHermitian(defect));
    }
    let n = a.rows();
    let sym = a.hermitian_part().inner;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 1000 * n.max(1)).ok_or(Error::NoConvergence(n))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Kronecker product; entry `(i·p+k, j·q+l) = a(i,j)·b(k,l)` for `b` of size `p×q`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        inner: a.inner.kronecker(&b.inner),
    }
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on qubit `target` (qubit 0 leftmost).
pub fn embed_local(op: &ComplexMatrix, target: usize, n: usize) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: op.rows().max(op.cols()),
        });
    }
    if target >= n {
        return Err(Error::IndexOutOfRange { index: target, n });
    }
    let left = ComplexMatrix::identity(1 << target);
    let right = ComplexMatrix::identity(1 << (n - target - 1));
    Ok(kron(&kron(&left, op), &right))
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvariantViolation(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::InvariantViolation(format!(
            "{n} qubits exceeds the supported maximum of {MAX_QUBITS}"
        )));
    }
    Ok(n)
}

/// Normalized state vector of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes `amplitudes`; the length must be a power of two.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.projector())
    }
}

/// `N Σ_j e^{iφ_j} c_j |j⟩` with `N = 1/√(Σ|c_j|²)`.
pub fn build_phase_encoded_state(coeffs: &[Complex64], phases: &[f64]) -> Result<PureState> {
    if coeffs.len() != phases.len() {
        return Err(Error::LengthMismatch(coeffs.len(), phases.len()));
    }
    if coeffs.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let amps = coeffs
        .iter()
        .zip(phases)
        .map(|(&cj, &phi)| Complex64::from_polar(1.0, phi) * cj)
        .collect();
    PureState::new(amps)
}

/// Hermitian, unit-trace, positive semidefinite matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    n_qubits: usize,
}

impl DensityOperator {
    /// Validates the Hermiticity, trace and positivity invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        let n_qubits = qubits_for_dim(matrix.rows())?;
        if matrix.inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvariantViolation(format!("Hermiticity defect {defect:e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvariantViolation(format!("trace {tr}")));
        }
        let min_eig = hermitian_eig(&matrix)?.min_eigenvalue();
        if min_eig < DENSITY_POSITIVITY_TOL {
            return Err(Error::InvariantViolation(format!("minimum eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix, n_qubits })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let d = 1usize << n_qubits;
        Self::new(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}
