//! Sherrington–Kirkpatrick ±1 instances: exact spectra, success thresholds,
//! and the energy-to-overlap bound.
//!
//! Edge bit encoding: pairs (j, k) with j < k sorted lexicographically; mask
//! bit 1 means K_jk = −1. The encoding round-trips exactly.

use crate::error::{Error, Result};
use crate::statevector::{DiagonalPhase, Statevector};

/// One SK problem instance: H_P = ½ Σ_{j≠k} K_jk Z_j Z_k = Σ_{j<k} K_jk Z_j Z_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SKInstance {
    pub n: usize,
    pub mask: u64,
}

/// Exhaustive diagonal spectrum of an instance.
#[derive(Debug, Clone)]
pub struct DiagonalSpectrum {
    pub energies: Vec<f64>,
    pub lambda_min: f64,
    pub ground_indices: Vec<usize>,
    /// second distinct energy minus lambda_min; 0 if fully degenerate
    pub gap: f64,
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

impl SKInstance {
    pub fn new(n: usize, mask: u64) -> Result<Self> {
        let pairs = pair_count(n);
        if pairs > 63 {
            return Err(Error::Capacity(format!("{pairs} coupling bits exceed the mask width")));
        }
        if mask >= 1u64 << pairs {
            return Err(Error::Domain(format!("mask {mask:#x} out of range for n = {n}")));
        }
        Ok(Self { n, mask })
    }

    /// Coupling sign for pair (j, k), j < k. Bit 1 encodes K = −1.
    pub fn coupling(&self, j: usize, k: usize) -> f64 {
        debug_assert!(j < k && k < self.n);
        let rank = pair_rank(self.n, j, k);
        if (self.mask >> rank) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Full coupling matrix with zero diagonal.
    pub fn coupling_matrix(&self) -> Vec<Vec<f64>> {
        let mut k_mat = vec![vec![0.0; self.n]; self.n];
        for j in 0..self.n {
            for k in (j + 1)..self.n {
                let v = self.coupling(j, k);
                k_mat[j][k] = v;
                k_mat[k][j] = v;
            }
        }
        k_mat
    }

    /// Rebuild from an explicit upper-triangular ±1 assignment.
    pub fn from_couplings(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != pair_count(n) {
            return Err(Error::DimensionMismatch(format!(
                "{} couplings for {} pairs",
                upper.len(),
                pair_count(n)
            )));
        }
        let mut mask = 0u64;
        for (rank, &v) in upper.iter().enumerate() {
            if v == -1.0 {
                mask |= 1 << rank;
            } else if v != 1.0 {
                return Err(Error::Domain("couplings must be ±1".into()));
            }
        }
        Self::new(n, mask)
    }
}

/// Lexicographic rank of the pair (j, k), j < k.
pub fn pair_rank(n: usize, j: usize, k: usize) -> usize {
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
    j * n - j * (j + 1) / 2 + (k - j - 1)
}

/// Σ_{j<k} K_jk s_j s_k with s = (−1)^bit, evaluated by parity tricks.
pub fn sk_energy(inst: &SKInstance, z: usize) -> f64 {
    let n = inst.n;
    let mut energy = 0i64;
    let mut rank = 0;
    for j in 0..n {
        let bj = (z >> (n - 1 - j)) & 1;
        for k in (j + 1)..n {
            let bk = (z >> (n - 1 - k)) & 1;
            // s_j s_k = +1 iff bits equal; K = −1 iff mask bit set
            let anti = (bj ^ bk) as u64 ^ ((inst.mask >> rank) & 1);
            energy += 1 - 2 * anti as i64;
            rank += 1;
        }
    }
    energy as f64
}

/// Exhaustive spectrum over all 2^n bitstrings.
pub fn spectrum(inst: &SKInstance) -> DiagonalSpectrum {
    let dim = 1usize << inst.n;
    let energies: Vec<f64> = (0..dim).map(|z| sk_energy(inst, z)).collect();
    let lambda_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let ground_indices: Vec<usize> = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e == lambda_min)
        .map(|(z, _)| z)
        .collect();
    let gap = energies
        .iter()
        .copied()
        .filter(|&e| e > lambda_min)
        .fold(f64::INFINITY, f64::min);
    let gap = if gap.is_finite() { gap - lambda_min } else { 0.0 };
    DiagonalSpectrum { energies, lambda_min, ground_indices, gap }
}

/// Energy table as a diagonal phase carrier.
pub fn sk_diagonal(inst: &SKInstance) -> DiagonalPhase {
    DiagonalPhase { energies: spectrum(inst).energies }
}

/// λ_min + 5%·|λ_min|: an energy E counts as solved iff E ≤ this value.
pub fn success_threshold(spec: &DiagonalSpectrum) -> Result<f64> {
    if spec.lambda_min >= 0.0 {
        return Err(Error::DegenerateProblem);
    }
    Ok(spec.lambda_min + 0.05 * spec.lambda_min.abs())
}

/// Ground-state overlap lower bound 1 − (E − λ_min)/Δ, not clamped.
pub fn overlap_lower_bound(energy: f64, spec: &DiagonalSpectrum) -> Result<f64> {
    if spec.gap <= 0.0 {
        return Err(Error::UndefinedBound);
    }
    Ok(1.0 - (energy - spec.lambda_min) / spec.gap)
}

/// True ground-space overlap Σ_{g ∈ ground} |⟨g|ψ⟩|².
pub fn ground_space_overlap(state: &Statevector, spec: &DiagonalSpectrum) -> f64 {
    spec.ground_indices
        .iter()
        .map(|&z| state.amplitudes()[z].norm_sqr())
        .sum()
}

/// All 2^{n(n−1)/2} instances, masks in increasing order.
pub fn enumerate_instances(n: usize) -> Result<impl Iterator<Item = SKInstance>> {
    let pairs = pair_count(n);
    if pairs > 30 {
        return Err(Error::Capacity(format!("{pairs} pairs exceed the enumeration cap of 30")));
    }
    Ok((0..1u64 << pairs).map(move |mask| SKInstance { n, mask }))
}
