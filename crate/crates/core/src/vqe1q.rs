//! Single-qubit VQE testbed: a Bloch-sphere Hamiltonian, a two-rotation
//! ansatz, shot-based cost estimation, and density-matrix invariants.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimation::{estimate, sample_counts, ReadoutNoise};
use crate::optimize::nelder_mead;
use crate::statevector::{pauli_x, pauli_y, pauli_z, rx, ry, Statevector};

/// H = n·σ for a unit Bloch vector n(θ, φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochHamiltonian {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
}

impl BlochHamiltonian {
    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("Bloch vector must be unit length (|n| = {norm})")));
        }
        Ok(Self { nx, ny, nz })
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            nx: theta.sin() * phi.cos(),
            ny: theta.sin() * phi.sin(),
            nz: theta.cos(),
        }
    }

    /// Polar/azimuthal angles of n (θ ∈ [0, π], φ ∈ (−π, π]).
    pub fn angles(&self) -> (f64, f64) {
        let theta = self.nz.clamp(-1.0, 1.0).acos();
        let phi = self.ny.atan2(self.nx);
        (theta, phi)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let x = pauli_x();
        let y = pauli_y();
        let z = pauli_z();
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = self.nx * x[r][c] + self.ny * y[r][c] + self.nz * z[r][c];
            }
        }
        m
    }

    /// ⟨ψ|n·σ|ψ⟩ for a single-qubit state.
    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        let (bx, by, bz) = bloch_vector(state)?;
        Ok(self.nx * bx + self.ny * by + self.nz * bz)
    }
}

/// Eigenpairs of n·σ: eigenvalues ±1 with
/// |λ₊⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩ and
/// |λ₋⟩ = sin(θ/2)|0⟩ − e^{iφ} cos(θ/2)|1⟩.
pub fn bloch_eigen(h: &BlochHamiltonian) -> (f64, f64, Statevector, Statevector) {
    let (theta, phi) = h.angles();
    let phase = Complex64::from_polar(1.0, phi);
    let plus = Statevector::from_amplitudes(
        1,
        vec![Complex64::new((theta / 2.0).cos(), 0.0), phase * (theta / 2.0).sin()],
    )
    .expect("unit state");
    let minus = Statevector::from_amplitudes(
        1,
        vec![Complex64::new((theta / 2.0).sin(), 0.0), -phase * (theta / 2.0).cos()],
    )
    .expect("unit state");
    (1.0, -1.0, plus, minus)
}

/// Bloch coordinates (⟨X⟩, ⟨Y⟩, ⟨Z⟩) of a single-qubit pure state.
pub fn bloch_vector(state: &Statevector) -> Result<(f64, f64, f64)> {
    if state.n_qubits() != 1 {
        return Err(Error::DimensionMismatch("Bloch vector needs a single qubit".into()));
    }
    let a = state.amplitudes()[0];
    let b = state.amplitudes()[1];
    let cross = a.conj() * b;
    Ok((2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()))
}

/// Ground-state overlap from a single expectation value:
/// |⟨λ₋|ω⟩|² = (1 − ⟨ω|n·σ|ω⟩)/2.
pub fn ground_overlap_from_energy(energy: f64) -> f64 {
    (1.0 - energy) / 2.0
}

/// Two-rotation ansatz exp(iθ₂ Y)·exp(iθ₁ X)|0⟩.
pub fn variational_state(theta1: f64, theta2: f64) -> Statevector {
    let mut state = Statevector::zero(1).expect("1 qubit");
    // rx/ry implement exp(−iθσ); the ansatz uses exp(+iθσ)
    state.apply_single_qubit(0, &rx(-theta1)).expect("unitary");
    state.apply_single_qubit(0, &ry(-theta2)).expect("unitary");
    state
}

/// Shot-based energy estimate: X, Y, Z each measured with `shots_per_basis`
/// shots through the readout channel, combined as Σᵢ nᵢ·ĥᵢ.
pub fn estimate_energy<R: Rng>(
    h: &BlochHamiltonian,
    state: &Statevector,
    shots_per_basis: u64,
    noise: &ReadoutNoise,
    rng: &mut R,
) -> Result<f64> {
    let (bx, by, bz) = bloch_vector(state)?;
    let mut total = 0.0;
    for (n_i, b_i) in [(h.nx, bx), (h.ny, by), (h.nz, bz)] {
        let p = ((1.0 + b_i) / 2.0).clamp(0.0, 1.0);
        let k = sample_counts(p, shots_per_basis, noise, rng);
        total += n_i * estimate(k, shots_per_basis, noise)?.h_hat;
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct VqeRun {
    pub best_params: [f64; 2],
    /// noisy cost at the optimizer's terminal point
    pub estimated_energy: f64,
    /// exact ⟨H⟩ at the terminal point
    pub exact_energy: f64,
    /// exact_energy − λ_min (λ_min = −1)
    pub error: f64,
    /// |⟨λ₋|ψ⟩|² at the terminal point
    pub ground_overlap: f64,
    /// shots consumed by one cost evaluation (3 bases)
    pub shots_per_evaluation: u64,
    pub evaluations: u64,
}

/// Nelder–Mead over (θ₁, θ₂) against the shot-based cost. Deterministic for a
/// fixed seed. `restarts` independent starts; best terminal exact energy wins.
pub fn vqe_run(
    h: &BlochHamiltonian,
    shots_per_basis: u64,
    noise: &ReadoutNoise,
    seed: u64,
    restarts: u32,
) -> Result<VqeRun> {
    if shots_per_basis == 0 || restarts == 0 {
        return Err(Error::Domain("need positive shot count and restart count".into()));
    }
    let mut best: Option<VqeRun> = None;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
        let x0 = if r == 0 {
            [0.3, 0.3]
        } else {
            [
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            ]
        };
        let mut evals = 0u64;
        let mut cost = |x: &[f64]| {
            evals += 1;
            let state = variational_state(x[0], x[1]);
            estimate_energy(h, &state, shots_per_basis, noise, &mut rng).expect("valid cost")
        };
        let (x, _, _) = nelder_mead(&mut cost, &x0, 0.5, 1e-6, 120);
        let state = variational_state(x[0], x[1]);
        // fresh re-estimation at the terminal point; restarts are compared on
        // this measured value, never on the exact energy
        let refreshed = estimate_energy(h, &state, shots_per_basis, noise, &mut rng)?;
        let exact = h.expectation(&state)?;
        let run = VqeRun {
            best_params: [x[0], x[1]],
            estimated_energy: refreshed,
            exact_energy: exact,
            error: exact + 1.0,
            ground_overlap: ground_overlap_from_energy(exact),
            shots_per_evaluation: 3 * shots_per_basis,
            evaluations: evals + 1,
        };
        if best.as_ref().map_or(true, |b| run.estimated_energy < b.estimated_energy) {
            best = Some(run);
        }
    }
    Ok(best.expect("restarts ≥ 1"))
}

/// Invariants of a 2×2 density matrix expressed through traces:
/// det ρ = ½(Tr(ρ)² − Tr(ρ²)), λ± = (Tr ± √(Tr² − 4·det))/2,
/// S = −Σ λ ln λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityInvariants {
    pub trace: f64,
    pub purity: f64,
    pub determinant: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub entropy: f64,
}

pub fn density_invariants(rho: &[[Complex64; 2]; 2]) -> Result<DensityInvariants> {
    let herm = (rho[0][1] - rho[1][0].conj()).norm();
    if herm > 1e-10 || rho[0][0].im.abs() > 1e-10 || rho[1][1].im.abs() > 1e-10 {
        return Err(Error::Domain("density matrix must be Hermitian".into()));
    }
    let trace = rho[0][0].re + rho[1][1].re;
    let rho_sq_trace = (rho[0][0] * rho[0][0]
        + rho[0][1] * rho[1][0]
        + rho[1][0] * rho[0][1]
        + rho[1][1] * rho[1][1])
        .re;
    let determinant = 0.5 * (trace * trace - rho_sq_trace);
    let disc = (trace * trace - 4.0 * determinant).max(0.0).sqrt();
    let lambda_plus = (trace + disc) / 2.0;
    let lambda_minus = (trace - disc) / 2.0;
    if lambda_minus < -1e-10 || (trace - 1.0).abs() > 1e-10 {
        return Err(Error::Domain("density matrix must be unit-trace and positive".into()));
    }
    let mut entropy = 0.0;
    for lam in [lambda_plus, lambda_minus] {
        if lam > 1e-15 {
            entropy -= lam * lam.ln();
        }
    }
    Ok(DensityInvariants { trace, purity: rho_sq_trace, determinant, lambda_plus, lambda_minus, entropy })
}

/// ρ = (1 + r·σ)/2 for a Bloch vector with |r| ≤ 1.
pub fn density_from_bloch(rx: f64, ry: f64, rz: f64) -> Result<[[Complex64; 2]; 2]> {
    let norm = (rx * rx + ry * ry + rz * rz).sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("Bloch vector length {norm} exceeds 1")));
    }
    Ok([
        [Complex64::new((1.0 + rz) / 2.0, 0.0), Complex64::new(rx / 2.0, -ry / 2.0)],
        [Complex64::new(rx / 2.0, ry / 2.0), Complex64::new((1.0 - rz) / 2.0, 0.0)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn target() -> BlochHamiltonian {
        BlochHamiltonian::new(-(1.0f64 / 6.0).sqrt(), (2.0f64 / 6.0).sqrt(), -(3.0f64 / 6.0).sqrt())
            .unwrap()
    }

    #[test]
    fn bloch_eigenpairs_satisfy_the_eigenvalue_equation() {
        let h = target();
        let m = h.matrix();
        let (lp, lm, plus, minus) = bloch_eigen(&h);
        assert_eq!((lp, lm), (1.0, -1.0));
        for (lam, v) in [(lp, &plus), (lm, &minus)] {
            let a = v.amplitudes();
            let r0 = m[0][0] * a[0] + m[0][1] * a[1] - lam * a[0];
            let r1 = m[1][0] * a[0] + m[1][1] * a[1] - lam * a[1];
            assert!(r0.norm() < 1e-12 && r1.norm() < 1e-12);
        }
        assert_abs_diff_eq!(plus.inner(&minus).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn overlap_identity_holds_for_arbitrary_states() {
        // |⟨λ₋|ω⟩|² = (1 − ⟨ω|n·σ|ω⟩)/2
        let h = BlochHamiltonian::from_angles(1.1, -2.3);
        let (_, _, _, minus) = bloch_eigen(&h);
        for (t1, t2) in [(0.0, 0.0), (0.7, -1.2), (2.9, 0.4), (-1.5, 1.5)] {
            let omega = variational_state(t1, t2);
            let lhs = omega.overlap(&minus).unwrap();
            let rhs = ground_overlap_from_energy(h.expectation(&omega).unwrap());
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_optimization_reaches_the_ground_state() {
        // noiseless cost: Nelder–Mead should drive E to −1
        let h = target();
        let mut cost = |x: &[f64]| {
            let s = variational_state(x[0], x[1]);
            h.expectation(&s).unwrap()
        };
        let (_, v, _) = crate::optimize::nelder_mead(&mut cost, &[0.3, 0.3], 0.5, 1e-14, 2000);
        assert!(v < -1.0 + 1e-8, "reached {v}");
    }

    #[test]
    fn variational_state_at_zero_is_zero_ket() {
        let s = variational_state(0.0, 0.0);
        assert_abs_diff_eq!(s.amplitudes()[0].norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn density_invariants_of_pure_and_mixed_states() {
        // pure: det = 0, purity = 1, entropy = 0
        let rho = density_from_bloch(0.6, 0.0, 0.8).unwrap();
        let inv = density_invariants(&rho).unwrap();
        assert_abs_diff_eq!(inv.determinant, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.purity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.entropy, 0.0, epsilon = 1e-10);
        // maximally mixed: λ = 1/2, S = ln 2
        let rho = density_from_bloch(0.0, 0.0, 0.0).unwrap();
        let inv = density_invariants(&rho).unwrap();
        assert_abs_diff_eq!(inv.lambda_plus, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.entropy, std::f64::consts::LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.determinant, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn density_validation() {
        assert!(density_from_bloch(1.2, 0.0, 0.0).is_err());
        let mut rho = density_from_bloch(0.0, 0.0, 0.5).unwrap();
        rho[0][1] = num_complex::Complex64::new(0.9, 0.0); // not positive any more
        assert!(density_invariants(&rho).is_err());
    }

    #[test]
    fn vqe_run_is_deterministic_and_converges() {
        let h = target();
        let a = vqe_run(&h, 4096, &crate::estimation::ReadoutNoise::NONE, 3, 2).unwrap();
        let b = vqe_run(&h, 4096, &crate::estimation::ReadoutNoise::NONE, 3, 2).unwrap();
        assert_eq!(a.best_params, b.best_params);
        assert!(a.error < 0.05, "error {}", a.error);
        assert_eq!(a.shots_per_evaluation, 3 * 4096);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bloch_vector_is_unit_for_pure_states(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
            let s = variational_state(t1, t2);
            let (x, y, z) = bloch_vector(&s).unwrap();
            prop_assert!((x * x + y * y + z * z - 1.0).abs() < 1e-12);
        }

        #[test]
        fn angles_roundtrip(theta in 0.01f64..3.1, phi in -3.1f64..3.1) {
            let h = BlochHamiltonian::from_angles(theta, phi);
            let (t, p) = h.angles();
            prop_assert!((t - theta).abs() < 1e-12);
            prop_assert!((p - phi).abs() < 1e-12);
        }
    }
}
