//! The standard QAOA state and the ion-native variant built from the
//! hardware Ising propagator.

use crate::error::{Error, Result};
use crate::ion::{ising_diagonal, mixer_z_diagonal, IonCouplings, IsingBasis};
use crate::sk::{sk_diagonal, SKInstance};
use crate::statevector::{rx, DiagonalPhase, Statevector};

/// Depth-p angle lists. Construction wraps β mod π and γ mod 2π; optimization
/// works unconstrained and wraps only on report.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if beta.len() != gamma.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} beta angles vs {} gamma angles",
                beta.len(),
                gamma.len()
            )));
        }
        Ok(Self {
            beta: beta.into_iter().map(|b| b.rem_euclid(std::f64::consts::PI)).collect(),
            gamma: gamma
                .into_iter()
                .map(|g| g.rem_euclid(2.0 * std::f64::consts::PI))
                .collect(),
        })
    }

    /// Raw angles without wrapping, for optimizer-internal use.
    pub fn unwrapped(beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if beta.len() != gamma.len() {
            return Err(Error::DimensionMismatch("beta/gamma length mismatch".into()));
        }
        Ok(Self { beta, gamma })
    }

    pub fn depth(&self) -> usize {
        self.beta.len()
    }

    /// Flat (β₁..β_p, γ₁..γ_p) layout used by the optimizers.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.beta.clone();
        v.extend_from_slice(&self.gamma);
        v
    }

    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::DimensionMismatch("flat parameter vector must have even length".into()));
        }
        let p = x.len() / 2;
        Self::unwrapped(x[..p].to_vec(), x[p..].to_vec())
    }
}

/// Standard QAOA: ∏_k exp(−iβ_k H_x) exp(−iγ_k H_P) |+⟩^{⊗n}, layer k = 1 first.
pub fn prepare_standard(inst: &SKInstance, params: &AnsatzParams) -> Result<Statevector> {
    let diag = sk_diagonal(inst);
    prepare_standard_with_diagonal(inst.n, &diag, params)
}

/// Standard QAOA with an arbitrary Z-diagonal problem table.
pub fn prepare_standard_with_diagonal(
    n: usize,
    problem: &DiagonalPhase,
    params: &AnsatzParams,
) -> Result<Statevector> {
    let mut state = Statevector::zero(n)?;
    state.hadamard_all()?;
    for k in 0..params.depth() {
        state.apply_diagonal_phase(problem, params.gamma[k])?;
        let mixer = rx(params.beta[k]);
        for q in 0..n {
            state.apply_single_qubit(q, &mixer)?;
        }
    }
    Ok(state)
}

/// Ion-native ansatz: H_+ ∏_k exp(−iβ_k H_z) exp(−iγ_k H_I) |0⟩^{⊗n}.
/// exp(−iγH_I) is realized as hadamard_all ∘ diagonal ZZ phase ∘ hadamard_all.
pub fn prepare_ion_native(c: &IonCouplings, params: &AnsatzParams) -> Result<Statevector> {
    let ising = ising_diagonal(c, IsingBasis::X);
    let mixer = mixer_z_diagonal(c.n);
    let mut state = Statevector::zero(c.n)?;
    for k in 0..params.depth() {
        state.hadamard_all()?;
        state.apply_diagonal_phase(&ising, params.gamma[k])?;
        state.hadamard_all()?;
        state.apply_diagonal_phase(&mixer, params.beta[k])?;
    }
    state.hadamard_all()?;
    Ok(state)
}

/// ⟨ψ|H_P|ψ⟩ = Σ_z E[z]·|amp[z]|² from the instance's diagonal table.
pub fn energy(state: &Statevector, inst: &SKInstance) -> Result<f64> {
    if state.n_qubits() != inst.n {
        return Err(Error::DimensionMismatch(format!(
            "state of {} qubits vs instance of {}",
            state.n_qubits(),
            inst.n
        )));
    }
    let diag = sk_diagonal(inst);
    Ok(diagonal_energy(state, &diag))
}

/// Diagonal expectation with a precomputed table (the optimizer hot path).
pub fn diagonal_energy(state: &Statevector, diag: &DiagonalPhase) -> f64 {
    state
        .amplitudes()
        .iter()
        .zip(diag.energies.iter())
        .map(|(a, &e)| e * a.norm_sqr())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{apply_dense, hermitian_propagator, identity, kron, pauli_matrix, CMatrix};
    use crate::ion::{build_couplings, ising_diagonal, IsingBasis};
    use crate::sk::{sk_energy, SKInstance};
    use approx::assert_abs_diff_eq;

    #[test]
    fn params_wrap_into_canonical_ranges() {
        let pi = std::f64::consts::PI;
        let p = AnsatzParams::new(vec![pi + 0.3, -0.2], vec![2.0 * pi + 0.5, -0.1]).unwrap();
        assert_abs_diff_eq!(p.beta[0], 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(p.beta[1], pi - 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma[1], 2.0 * pi - 0.1, epsilon = 1e-12);
    }

    #[test]
    fn flat_layout_roundtrips() {
        let p = AnsatzParams::unwrapped(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let flat = p.to_flat();
        assert_eq!(flat, vec![0.1, 0.2, 0.3, 0.4]);
        let q = AnsatzParams::from_flat(&flat).unwrap();
        assert_eq!(q.beta, p.beta);
        assert_eq!(q.gamma, p.gamma);
        assert!(AnsatzParams::from_flat(&[0.1, 0.2, 0.3]).is_err());
    }

    fn dense_problem_hamiltonian(inst: &SKInstance) -> CMatrix {
        let dim = 1usize << inst.n;
        let mut h = CMatrix::zeros(dim, dim);
        for z in 0..dim {
            h[(z, z)] = crate::dense::c64(sk_energy(inst, z), 0.0);
        }
        h
    }

    fn dense_mixer_x(n: usize) -> CMatrix {
        let dim = 1usize << n;
        let mut h = CMatrix::zeros(dim, dim);
        for q in 0..n {
            let mut term = identity(1);
            for p in 0..n {
                let f = if p == q { pauli_matrix(1) } else { identity(2) };
                term = kron(&term, &f);
            }
            h += term;
        }
        h
    }

    #[test]
    fn standard_ansatz_matches_dense_propagator_oracle() {
        // |ψ⟩ = e^{−iβ₂Hx} e^{−iγ₂Hp} e^{−iβ₁Hx} e^{−iγ₁Hp} |+⟩
        let inst = SKInstance::new(3, 0b101).unwrap();
        let params = AnsatzParams::unwrapped(vec![0.37, 1.1], vec![0.83, 0.29]).unwrap();
        let fast = prepare_standard(&inst, &params).unwrap();

        let hp = dense_problem_hamiltonian(&inst);
        let hx = dense_mixer_x(3);
        let mut slow = Statevector::zero(3).unwrap();
        slow.hadamard_all().unwrap();
        for k in 0..2 {
            slow = apply_dense(&hermitian_propagator(&hp, params.gamma[k]).unwrap(), &slow).unwrap();
            slow = apply_dense(&hermitian_propagator(&hx, params.beta[k]).unwrap(), &slow).unwrap();
        }
        assert!(fast.overlap(&slow).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn ion_native_ansatz_matches_dense_propagator_oracle() {
        // |φ⟩ = H^{⊗n} ∏_k e^{−iβ_k Hz} e^{−iγ_k H_I} |0⟩ with H_I = ½ΣJ X_j X_k
        let c = build_couplings(3, 4.0, 1.0, &[0.8, -0.5, 0.9]).unwrap();
        let params = AnsatzParams::unwrapped(vec![0.7], vec![1.3]).unwrap();
        let fast = prepare_ion_native(&c, &params).unwrap();

        let dim = 8;
        let mut hi = CMatrix::zeros(dim, dim);
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    let mut term = identity(1);
                    for p in 0..3 {
                        let f = if p == j || p == k { pauli_matrix(1) } else { identity(2) };
                        term = kron(&term, &f);
                    }
                    hi += term * crate::dense::c64(0.5 * c.j[j][k], 0.0);
                }
            }
        }
        let mut hz = CMatrix::zeros(dim, dim);
        for z in 0..dim {
            hz[(z, z)] = crate::dense::c64(3.0 - 2.0 * (z.count_ones() as f64), 0.0);
        }
        let mut slow = Statevector::zero(3).unwrap();
        slow = apply_dense(&hermitian_propagator(&hi, params.gamma[0]).unwrap(), &slow).unwrap();
        slow = apply_dense(&hermitian_propagator(&hz, params.beta[0]).unwrap(), &slow).unwrap();
        slow.hadamard_all().unwrap();
        assert!(fast.overlap(&slow).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn zero_parameters_give_uniform_superposition_energy() {
        let inst = SKInstance::new(4, 17).unwrap();
        let params = AnsatzParams::unwrapped(vec![0.0], vec![0.0]).unwrap();
        let state = prepare_standard(&inst, &params).unwrap();
        // ⟨+|H_P|+⟩ = 0 for any SK instance
        assert_abs_diff_eq!(energy(&state, &inst).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_energy_agrees_with_energy() {
        let inst = SKInstance::new(4, 37).unwrap();
        let params = AnsatzParams::unwrapped(vec![0.4, 0.9], vec![1.2, 0.3]).unwrap();
        let state = prepare_standard(&inst, &params).unwrap();
        let diag = crate::sk::sk_diagonal(&inst);
        assert_abs_diff_eq!(
            energy(&state, &inst).unwrap(),
            diagonal_energy(&state, &diag),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ion_native_symmetric_couplings_equal_standard_on_ising_problem() {
        // Appendix-style equivalence: the ion ansatz with couplings J equals the
        // standard ansatz whose problem Hamiltonian is ½ΣJ Z_jZ_k
        let c = build_couplings(5, 4.0, 1.0, &[1.0; 5]).unwrap();
        let diag = ising_diagonal(&c, IsingBasis::Z);
        let params = AnsatzParams::unwrapped(vec![0.31, 1.7], vec![0.57, 2.3]).unwrap();
        let ion = prepare_ion_native(&c, &params).unwrap();
        let std_state = prepare_standard_with_diagonal(5, &diag, &params).unwrap();
        assert!(ion.overlap(&std_state).unwrap() > 1.0 - 1e-12);
    }
}
