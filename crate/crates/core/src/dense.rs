//! Small dense complex matrices used by gate synthesis and by exact oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::Statevector;

pub type CMatrix = DMatrix<Complex64>;

const UNITARY_TOL: f64 = 1e-10;

/// A dense unitary with its dimension, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    matrix: CMatrix,
}

impl DenseUnitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        let residual = unitarity_residual(&matrix);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { matrix })
    }

    pub fn from_rows_2x2(rows: &[[Complex64; 2]; 2]) -> Result<Self> {
        let m = CMatrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]]);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "product of {}×{} and {}×{}",
                self.dim(),
                self.dim(),
                other.dim(),
                other.dim()
            )));
        }
        Ok(Self { matrix: &self.matrix * &other.matrix })
    }

    pub fn as_2x2(&self) -> Result<[[Complex64; 2]; 2]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("expected 2×2, got {}×{}", self.dim(), self.dim())));
        }
        Ok([
            [self.matrix[(0, 0)], self.matrix[(0, 1)]],
            [self.matrix[(1, 0)], self.matrix[(1, 1)]],
        ])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }
}

pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let eye = CMatrix::identity(m.nrows(), m.ncols());
    max_abs_diff(&gram, &eye)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_matrix(axis: u8) -> CMatrix {
    let z = c64(0.0, 0.0);
    let o = c64(1.0, 0.0);
    match axis {
        0 => identity(2),
        1 => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, c64(0.0, -1.0), c64(0.0, 1.0), z]),
        3 => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("Pauli axis outside 0..=3"),
    }
}

/// ⊗_j σ^{axes[j]} as a dense 2^n matrix, qubit 0 leftmost.
pub fn pauli_string_matrix(axes: &[u8]) -> CMatrix {
    let mut m = pauli_matrix(axes[0]);
    for &a in &axes[1..] {
        m = kron(&m, &pauli_matrix(a));
    }
    m
}

/// exp(−i·angle·H) for Hermitian H, by eigendecomposition.
pub fn hermitian_propagator(h: &CMatrix, angle: f64) -> Result<CMatrix> {
    let herm_res = max_abs_diff(h, &h.adjoint());
    if herm_res > 1e-10 {
        return Err(Error::Domain(format!("matrix is not Hermitian (residual {herm_res:.3e})")));
    }
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let dim = h.nrows();
    let mut phases = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        phases[(i, i)] = Complex64::from_polar(1.0, -angle * eig.eigenvalues[i]);
    }
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Apply a dense 2^n × 2^n matrix to a statevector (oracle path, not the
/// layer operations).
pub fn apply_dense(m: &CMatrix, state: &Statevector) -> Result<Statevector> {
    if m.ncols() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix of dimension {} on state of dimension {}",
            m.ncols(),
            state.dim()
        )));
    }
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    let out = m * v;
    Statevector::from_amplitudes(state.n_qubits(), out.iter().copied().collect())
}
