//! Dense complex statevector and the layer operations everything else composes.
//!
//! Basis convention: qubit 0 is the leftmost bit of the basis-state label, so
//! basis index `z` enumerates bitstrings in natural binary order and the bit of
//! qubit `q` sits at position `n - 1 - q` from the least significant end.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the dense register width.
pub const DEFAULT_MAX_QUBITS: usize = 24;

const NORM_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-12;

/// Dense normalized state over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::check_width(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// A single computational basis state |z⟩.
    pub fn basis(n_qubits: usize, z: usize) -> Result<Self> {
        Self::check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if z >= dim {
            return Err(Error::IndexOutOfRange { index: z, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[z] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Build from raw amplitudes; the vector must be normalized.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_width(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "expected {} amplitudes, got {}",
                1usize << n_qubits,
                amplitudes.len()
            )));
        }
        let state = Self { n_qubits, amplitudes };
        state.check_norm()?;
        Ok(state)
    }

    fn check_width(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "n_qubits = {n_qubits} outside 1..={DEFAULT_MAX_QUBITS}"
            )));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Norm is re-checked, never silently repaired.
    pub fn check_norm(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InternalConsistency(format!(
                "state norm² drifted to {norm}"
            )));
        }
        Ok(())
    }

    /// Explicit renormalization. The layer operations never call this.
    pub fn renormalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        for a in &mut self.amplitudes {
            *a /= norm;
        }
    }

    /// Bit of `qubit` inside basis index `z` under the leftmost-bit convention.
    #[inline]
    pub fn bit(&self, z: usize, qubit: usize) -> usize {
        (z >> (self.n_qubits - 1 - qubit)) & 1
    }

    /// Apply a 2×2 unitary to the target qubit.
    pub fn apply_single_qubit(&mut self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::IndexOutOfRange { index: qubit, n_qubits: self.n_qubits });
        }
        check_unitary_2x2(u)?;
        let stride = 1usize << (self.n_qubits - 1 - qubit);
        let dim = self.dim();
        let mut z = 0;
        while z < dim {
            for low in z..z + stride {
                let a0 = self.amplitudes[low];
                let a1 = self.amplitudes[low + stride];
                self.amplitudes[low] = u[0][0] * a0 + u[0][1] * a1;
                self.amplitudes[low + stride] = u[1][0] * a0 + u[1][1] * a1;
            }
            z += stride << 1;
        }
        self.check_norm()
    }

    /// H^{⊗n}: the global Hadamard layer, its own inverse.
    pub fn hadamard_all(&mut self) -> Result<()> {
        let h = hadamard();
        for q in 0..self.n_qubits {
            self.apply_single_qubit(q, &h)?;
        }
        Ok(())
    }

    /// Multiply amplitude[z] by exp(−i·angle·energies[z]).
    pub fn apply_diagonal_phase(&mut self, diag: &DiagonalPhase, angle: f64) -> Result<()> {
        if diag.energies.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal of length {} on state of dimension {}",
                diag.energies.len(),
                self.dim()
            )));
        }
        for (a, &e) in self.amplitudes.iter_mut().zip(diag.energies.iter()) {
            *a *= Complex64::from_polar(1.0, -angle * e);
        }
        Ok(())
    }

    /// ⟨a|b⟩ as a complex number.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "inner product between {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨a|b⟩|².
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// Real diagonal energy table, the carrier for exp(−iγ·diag).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalPhase {
    pub energies: Vec<f64>,
}

impl DiagonalPhase {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("non-finite diagonal energy".into()));
        }
        Ok(Self { energies })
    }
}

/// One Pauli axis per qubit: 0 = identity, 1 = X, 2 = Y, 3 = Z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    pub axes: Vec<u8>,
}

impl PauliString {
    pub fn new(axes: Vec<u8>) -> Result<Self> {
        if axes.iter().any(|&a| a > 3) {
            return Err(Error::Domain("Pauli axis outside {0,1,2,3}".into()));
        }
        Ok(Self { axes })
    }

    pub fn n_qubits(&self) -> usize {
        self.axes.len()
    }

    /// A single-qubit Pauli embedded in an n-qubit identity string.
    pub fn single(n: usize, qubit: usize, axis: u8) -> Result<Self> {
        if qubit >= n {
            return Err(Error::IndexOutOfRange { index: qubit, n_qubits: n });
        }
        let mut axes = vec![0u8; n];
        axes[qubit] = axis;
        Self::new(axes)
    }

    /// Z_j Z_k on n qubits.
    pub fn zz(n: usize, j: usize, k: usize) -> Result<Self> {
        let mut axes = vec![0u8; n];
        axes[j] = 3;
        axes[k] = 3;
        Self::new(axes)
    }

    /// Apply the string to a copy of the state.
    pub fn apply(&self, state: &Statevector) -> Result<Statevector> {
        if self.axes.len() != state.n_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "Pauli string on {} qubits vs state of {}",
                self.axes.len(),
                state.n_qubits()
            )));
        }
        let n = state.n_qubits();
        let mut out = state.clone();
        for (q, &axis) in self.axes.iter().enumerate() {
            match axis {
                0 => {}
                1 => out.apply_single_qubit(q, &pauli_x())?,
                2 => out.apply_single_qubit(q, &pauli_y())?,
                3 => out.apply_single_qubit(q, &pauli_z())?,
                _ => unreachable!(),
            }
            let _ = n;
        }
        Ok(out)
    }
}

/// Σ_k h_k · P_k with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPauliSum {
    pub terms: Vec<(f64, PauliString)>,
}

impl WeightedPauliSum {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if let Some((_, first)) = terms.first() {
            let n = first.n_qubits();
            if terms.iter().any(|(h, p)| !h.is_finite() || p.n_qubits() != n) {
                return Err(Error::Domain(
                    "inconsistent Pauli sum: mixed widths or non-finite coefficient".into(),
                ));
            }
        }
        Ok(Self { terms })
    }
}

/// Σ_k h_k ⟨ψ|P_k|ψ⟩. The imaginary residual is checked, then discarded.
pub fn expval(state: &Statevector, obs: &WeightedPauliSum) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (h, pauli) in &obs.terms {
        let applied = pauli.apply(state)?;
        acc += *h * state.inner(&applied)?;
    }
    if acc.im.abs() > 1e-8 {
        return Err(Error::InternalConsistency(format!(
            "expectation value has imaginary part {:.3e}",
            acc.im
        )));
    }
    Ok(acc.re)
}

pub fn check_unitary_2x2(u: &[[Complex64; 2]; 2]) -> Result<()> {
    // U†U == 1
    let mut residual: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut entry = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                entry += u[k][i].conj() * u[k][j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((entry - target).norm());
        }
    }
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

pub fn identity_2x2() -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, one]]
}

pub fn pauli_x() -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[zero, one], [one, zero]]
}

pub fn pauli_y() -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [[zero, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), zero]]
}

pub fn pauli_z() -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, -one]]
}

pub fn hadamard() -> [[Complex64; 2]; 2] {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// exp(−iθX) = cosθ·1 − i sinθ·X
pub fn rx(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(0.0, -theta.sin());
    [[c, s], [s, c]]
}

/// exp(−iθY)
pub fn ry(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(theta.sin(), 0.0);
    [[c, -s], [s, c]]
}

/// exp(−iθZ)
pub fn rz(theta: f64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta), zero],
        [zero, Complex64::from_polar(1.0, theta)],
    ]
}
