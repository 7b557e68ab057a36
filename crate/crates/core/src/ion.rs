//! Trapped-ion Hamiltonians: tunable Ising couplings, the effective two-level
//! system, and the truncated trap-coupled Hamiltonian with its sidebands.
//!
//! Units: energies in kHz, times in ms, ℏ = 1.

use num_complex::Complex64;

use crate::dense::{c64, identity, kron, CMatrix};
use crate::error::{Error, Result};
use crate::statevector::DiagonalPhase;

/// Tunable J_jk = J_max·A_j·A_k/|j−k|^α coupling matrix (1-based chain distance).
#[derive(Debug, Clone)]
pub struct IonCouplings {
    pub n: usize,
    pub j: Vec<Vec<f64>>,
    pub j_max: f64,
    pub alpha: f64,
    pub a: Vec<f64>,
}

/// Effective two-level parameters: detuning Δ and the complex Rabi term d_eg·ε.
#[derive(Debug, Clone, Copy)]
pub struct TwoLevelParams {
    pub delta: f64,
    pub rabi: Complex64,
}

/// Trap frequency, Lamb-Dicke parameter, and Fock truncation.
#[derive(Debug, Clone, Copy)]
pub struct TrapParams {
    pub nu: f64,
    pub eta: f64,
    pub m_max: usize,
}

impl TrapParams {
    pub fn new(nu: f64, eta: f64, m_max: usize) -> Result<Self> {
        if nu <= 0.0 {
            return Err(Error::Domain("trap frequency must be positive".into()));
        }
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::Domain("Lamb-Dicke parameter must be in [0, 1)".into()));
        }
        if m_max < 1 {
            return Err(Error::Domain("phonon truncation must be at least 1".into()));
        }
        Ok(Self { nu, eta, m_max })
    }

    /// The linear sideband coupling assumes small η.
    pub fn lamb_dicke_warning(&self) -> bool {
        self.eta > 0.3
    }
}

/// Build the coupling matrix. With J_max = 4, α = 1, A ≡ 1 this is the
/// symmetric configuration J_jk = 4/|j−k|.
pub fn build_couplings(n: usize, j_max: f64, alpha: f64, a: &[f64]) -> Result<IonCouplings> {
    if a.len() != n {
        return Err(Error::DimensionMismatch(format!("{} amplitudes for {} ions", a.len(), n)));
    }
    if j_max <= 0.0 {
        return Err(Error::Domain("J_max must be positive".into()));
    }
    if !(0.0..=3.0).contains(&alpha) {
        return Err(Error::Domain("alpha must lie in [0, 3]".into()));
    }
    if a.iter().any(|&x| !(-1.0..=1.0).contains(&x)) {
        return Err(Error::Domain("amplitudes A_j must lie in [-1, 1]".into()));
    }
    let mut j = vec![vec![0.0; n]; n];
    for p in 0..n {
        for q in 0..n {
            if p != q {
                let dist = (p as f64 - q as f64).abs();
                j[p][q] = j_max * a[p] * a[q] / dist.powf(alpha);
            }
        }
    }
    Ok(IonCouplings { n, j, j_max, alpha, a: a.to_vec() })
}

impl IonCouplings {
    /// Whether the amplitude profile is reflection symmetric (A_j == A_{n+1−j}).
    pub fn is_reflection_symmetric(&self) -> bool {
        (0..self.n).all(|p| (self.a[p] - self.a[self.n - 1 - p]).abs() < 1e-12)
    }
}

/// Basis for the Ising diagonal table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingBasis {
    /// H_I = ½ Σ J_jk X_j X_k, used around Hadamard conjugation.
    X,
    /// H = ½ Σ J_jk Z_j Z_k, diagonal in the computational basis.
    Z,
}

/// Diagonal energy table of ½ Σ_{j≠k} J_jk s_j s_k with s = (−1)^bit.
/// The same table serves both bases: the X-basis Hamiltonian is the Z-basis
/// one conjugated by H^{⊗n}.
pub fn ising_diagonal(c: &IonCouplings, _basis: IsingBasis) -> DiagonalPhase {
    let n = c.n;
    let dim = 1usize << n;
    let mut energies = vec![0.0; dim];
    for (z, e) in energies.iter_mut().enumerate() {
        let mut acc = 0.0;
        for p in 0..n {
            let sp = 1.0 - 2.0 * (((z >> (n - 1 - p)) & 1) as f64);
            for q in (p + 1)..n {
                let sq = 1.0 - 2.0 * (((z >> (n - 1 - q)) & 1) as f64);
                acc += c.j[p][q] * sp * sq;
            }
        }
        *e = acc;
    }
    DiagonalPhase { energies }
}

/// Diagonal table of the mixer H_z = Σ_k Z_k.
pub fn mixer_z_diagonal(n: usize) -> DiagonalPhase {
    let dim = 1usize << n;
    let energies = (0..dim)
        .map(|z| n as f64 - 2.0 * (z.count_ones() as f64))
        .collect();
    DiagonalPhase { energies }
}

/// Exact eigensystem of H_eff = −Δ|e⟩⟨e| − rabi|e⟩⟨g| − rabi*|g⟩⟨e|.
/// Basis order (|g⟩, |e⟩). Returns (λ₊, λ₋, v₊, v₋) with vectors as (g, e) pairs.
pub fn heff_eigen(p: &TwoLevelParams) -> (f64, f64, [Complex64; 2], [Complex64; 2]) {
    let root = (p.delta * p.delta / 4.0 + p.rabi.norm_sqr()).sqrt();
    let lam_plus = -p.delta / 2.0 + root;
    let lam_minus = -p.delta / 2.0 - root;
    let vec_for = |lam_other: f64| -> [Complex64; 2] {
        // |λ±⟩ ∝ rabi|e⟩ + λ∓|g⟩
        let norm = (p.rabi.norm_sqr() + lam_other * lam_other).sqrt();
        if norm < 1e-300 {
            return [c64(0.0, 0.0), c64(0.0, 0.0)];
        }
        [c64(lam_other / norm, 0.0), p.rabi / norm]
    };
    let mut v_plus = vec_for(lam_minus);
    let mut v_minus = vec_for(lam_plus);
    // rabi = 0 degenerates the closed form; the eigenvectors are then |g⟩, |e⟩
    if v_plus[0].norm_sqr() + v_plus[1].norm_sqr() < 0.5 {
        v_plus = if lam_plus.abs() < 1e-14 { [c64(1.0, 0.0), c64(0.0, 0.0)] } else { [c64(0.0, 0.0), c64(1.0, 0.0)] };
    }
    if v_minus[0].norm_sqr() + v_minus[1].norm_sqr() < 0.5 {
        v_minus = if lam_minus.abs() < 1e-14 { [c64(1.0, 0.0), c64(0.0, 0.0)] } else { [c64(0.0, 0.0), c64(1.0, 0.0)] };
    }
    (lam_plus, lam_minus, v_plus, v_minus)
}

/// Dense H_eff in the (|g⟩, |e⟩) basis.
pub fn heff_matrix(p: &TwoLevelParams) -> CMatrix {
    let z = c64(0.0, 0.0);
    CMatrix::from_row_slice(2, 2, &[z, -p.rabi.conj(), -p.rabi, c64(-p.delta, 0.0)])
}

/// One labelled level of the truncated trap-plus-qubit spectrum.
#[derive(Debug, Clone)]
pub struct TrapLevel {
    pub energy: f64,
    /// dominant (fock, excited) component of the eigenvector
    pub fock: usize,
    pub excited: bool,
    /// population of the top Fock layer; large values flag truncation artifacts
    pub top_fock_population: f64,
}

#[derive(Debug, Clone)]
pub struct TrapSpectrum {
    pub levels: Vec<TrapLevel>,
    pub truncation_warning: bool,
}

/// Exact diagonalization of
/// ν(a†a+½)⊗1 − Δ·1⊗|e⟩⟨e| − η(a+a†)⊗(i·rabi|e⟩⟨g| − i·rabi*|g⟩⟨e|)
/// on the (m_max+1)-level Fock space tensor the two-level space.
pub fn trap_spectrum(p: &TwoLevelParams, t: &TrapParams) -> Result<TrapSpectrum> {
    if t.m_max < 2 {
        return Err(Error::Domain("m_max must be at least 2".into()));
    }
    let nf = t.m_max + 1;
    let dim = nf * 2;

    let mut number = CMatrix::zeros(nf, nf);
    let mut position = CMatrix::zeros(nf, nf); // a + a†
    for m in 0..nf {
        number[(m, m)] = c64(m as f64 + 0.5, 0.0);
        if m + 1 < nf {
            let amp = ((m + 1) as f64).sqrt();
            position[(m, m + 1)] = c64(amp, 0.0); // a
            position[(m + 1, m)] = c64(amp, 0.0); // a†
        }
    }
    let qubit_diag = {
        let z = c64(0.0, 0.0);
        CMatrix::from_row_slice(2, 2, &[z, -p.rabi.conj(), -p.rabi, c64(-p.delta, 0.0)])
    };
    // coupling −rabi(iηa + iηa†)|e⟩⟨g| + h.c.
    let coupling_qubit = {
        let z = c64(0.0, 0.0);
        let i = c64(0.0, 1.0);
        CMatrix::from_row_slice(2, 2, &[z, i * p.rabi.conj(), -i * p.rabi, z])
    };
    let h = kron(&number, &identity(2)) * c64(t.nu, 0.0)
        + kron(&identity(nf), &qubit_diag)
        + kron(&position, &coupling_qubit) * c64(t.eta, 0.0);

    let herm = crate::dense::max_abs_diff(&h, &h.adjoint());
    if herm > 1e-12 {
        return Err(Error::InternalConsistency(format!("trap Hamiltonian Hermiticity residual {herm:.3e}")));
    }

    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let mut levels = Vec::with_capacity(dim);
    let mut warn = false;
    for idx in order {
        let col = eig.eigenvectors.column(idx);
        let mut best = (0usize, false, 0.0f64);
        let mut top_pop = 0.0;
        for m in 0..nf {
            for (q, excited) in [(0usize, false), (1usize, true)] {
                let pop = col[m * 2 + q].norm_sqr();
                if pop > best.2 {
                    best = (m, excited, pop);
                }
                if m == nf - 1 {
                    top_pop += pop;
                }
            }
        }
        // levels adjacent to the cutoff always sit in the top Fock layer;
        // only leakage into it from the lower half of the spectrum signals
        // a too-small m_max
        if levels.len() < dim / 2 && top_pop > 1e-3 {
            warn = true;
        }
        levels.push(TrapLevel {
            energy: eig.eigenvalues[idx],
            fock: best.0,
            excited: best.1,
            top_fock_population: top_pop,
        });
    }
    Ok(TrapSpectrum { levels, truncation_warning: warn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_couplings_follow_inverse_distance() {
        let c = build_couplings(4, 4.0, 1.0, &[1.0; 4]).unwrap();
        assert_abs_diff_eq!(c.j[0][1], 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[0][2], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[0][3], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[2][1], 4.0, epsilon = 1e-15);
        assert!(c.is_reflection_symmetric());
    }

    #[test]
    fn amplitude_profile_scales_couplings() {
        let a = [0.5, -0.8, 1.0];
        let c = build_couplings(3, 2.0, 2.0, &a).unwrap();
        assert_abs_diff_eq!(c.j[0][1], 2.0 * 0.5 * -0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j[0][2], 2.0 * 0.5 * 1.0 / 4.0, epsilon = 1e-15);
        assert!(!c.is_reflection_symmetric());
    }

    #[test]
    fn coupling_validation() {
        assert!(build_couplings(3, 4.0, 1.0, &[1.0; 2]).is_err());
        assert!(build_couplings(3, -1.0, 1.0, &[1.0; 3]).is_err());
        assert!(build_couplings(3, 4.0, 3.5, &[1.0; 3]).is_err());
        assert!(build_couplings(3, 4.0, 1.0, &[1.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn ising_diagonal_matches_brute_force() {
        let c = build_couplings(3, 4.0, 1.0, &[0.9, -0.4, 0.7]).unwrap();
        let diag = ising_diagonal(&c, IsingBasis::Z);
        for z in 0..8usize {
            let s = |q: usize| 1.0 - 2.0 * (((z >> (2 - q)) & 1) as f64);
            // ½ Σ_{j≠k} = Σ_{j<k}
            let mut expect = 0.0;
            for j in 0..3 {
                for k in 0..3 {
                    if j != k {
                        expect += 0.5 * c.j[j][k] * s(j) * s(k);
                    }
                }
            }
            assert_abs_diff_eq!(diag.energies[z], expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn mixer_diagonal_counts_spins() {
        let d = mixer_z_diagonal(3);
        assert_eq!(d.energies, vec![3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0]);
    }

    #[test]
    fn heff_eigen_trace_and_determinant() {
        let p = TwoLevelParams { delta: 0.7, rabi: Complex64::new(0.2, -0.3) };
        let (lp, lm, vp, vm) = heff_eigen(&p);
        // tr H = −Δ, det H = −|rabi|²
        assert_abs_diff_eq!(lp + lm, -p.delta, epsilon = 1e-12);
        assert_abs_diff_eq!(lp * lm, -p.rabi.norm_sqr(), epsilon = 1e-12);
        // eigenvector residuals against the dense matrix
        let h = heff_matrix(&p);
        for (lam, v) in [(lp, vp), (lm, vm)] {
            let r0 = h[(0, 0)] * v[0] + h[(0, 1)] * v[1] - lam * v[0];
            let r1 = h[(1, 0)] * v[0] + h[(1, 1)] * v[1] - lam * v[1];
            assert!(r0.norm() < 1e-12 && r1.norm() < 1e-12);
            assert_abs_diff_eq!(v[0].norm_sqr() + v[1].norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn heff_eigen_handles_zero_rabi() {
        let p = TwoLevelParams { delta: -2.0, rabi: Complex64::new(0.0, 0.0) };
        let (lp, lm, vp, vm) = heff_eigen(&p);
        assert_abs_diff_eq!(lp, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lm, 0.0, epsilon = 1e-15);
        // λ₊ = −Δ belongs to |e⟩, λ₋ = 0 to |g⟩
        assert!(vp[1].norm() > 0.99 && vm[0].norm() > 0.99);
    }

    #[test]
    fn red_sideband_degeneracy_at_eta_zero() {
        let p = TwoLevelParams { delta: -1.0, rabi: Complex64::new(0.0, 0.0) };
        let t = TrapParams::new(1.0, 0.0, 10).unwrap();
        let s = trap_spectrum(&p, &t).unwrap();
        // |m,g⟩ and |m−1,e⟩ share energy ν(m+½)
        for m in 1..=5usize {
            let expect = m as f64 + 0.5;
            let near: Vec<&TrapLevel> = s
                .levels
                .iter()
                .filter(|l| (l.energy - expect).abs() < 1e-10)
                .collect();
            assert_eq!(near.len(), 2, "m = {m}");
        }
    }

    #[test]
    fn small_eta_splits_sideband_pairs() {
        let p = TwoLevelParams { delta: -1.0, rabi: Complex64::new(0.05, 0.0) };
        let t = TrapParams::new(1.0, 0.1, 14).unwrap();
        let s = trap_spectrum(&p, &t).unwrap();
        assert!(!s.truncation_warning);
        // the m = 1 pair splits symmetrically around 1.5 by ~2η|rabi|
        let near: Vec<f64> = s
            .levels
            .iter()
            .map(|l| l.energy)
            .filter(|e| (e - 1.5).abs() < 0.1)
            .collect();
        assert_eq!(near.len(), 2);
        assert!((near[1] - near[0]).abs() > 1e-4);
    }

    #[test]
    fn lamb_dicke_warning_threshold() {
        assert!(!TrapParams::new(1.0, 0.1, 4).unwrap().lamb_dicke_warning());
        assert!(TrapParams::new(1.0, 0.5, 4).unwrap().lamb_dicke_warning());
        assert!(TrapParams::new(1.0, 1.0, 4).is_err());
    }
}
