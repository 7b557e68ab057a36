//! Global spin-flip and reflection symmetries, the symmetric subspace, its
//! orbit basis, and the easy/hard instance classifier.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sk::{spectrum, DiagonalSpectrum, SKInstance};
use crate::statevector::Statevector;

/// X^{⊗n}: amplitude at z moves to the bit complement of z.
pub fn global_flip(state: &Statevector) -> Statevector {
    let n = state.n_qubits();
    let dim = state.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (z, &a) in state.amplitudes().iter().enumerate() {
        amps[!z & (dim - 1)] = a;
    }
    let _ = n;
    Statevector::from_amplitudes(state.n_qubits(), amps).expect("permutation preserves the norm")
}

/// R: amplitude at bitstring b moves to reverse(b).
pub fn reflect(state: &Statevector) -> Statevector {
    let n = state.n_qubits();
    let dim = state.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (z, &a) in state.amplitudes().iter().enumerate() {
        amps[reverse_bits(z, n)] = a;
    }
    Statevector::from_amplitudes(n, amps).expect("permutation preserves the norm")
}

pub fn reverse_bits(z: usize, n: usize) -> usize {
    let mut out = 0;
    for i in 0..n {
        out |= ((z >> i) & 1) << (n - 1 - i);
    }
    out
}

fn distance(a: &Statevector, b: &Statevector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// True iff the state is fixed by both X^{⊗n} and R within tol.
pub fn is_symmetric(state: &Statevector, tol: f64) -> bool {
    distance(&global_flip(state), state) < tol && distance(&reflect(state), state) < tol
}

/// ‖R·ψ − ψ‖, the reflection-symmetry violation.
pub fn reflection_violation(state: &Statevector) -> f64 {
    distance(&reflect(state), state)
}

/// Orbit of a basis index under {1, F, R, FR}, sorted and deduplicated.
pub fn orbit(z: usize, n: usize) -> Vec<usize> {
    let dim = 1usize << n;
    let comp = !z & (dim - 1);
    let mut o = vec![z, comp, reverse_bits(z, n), reverse_bits(comp, n)];
    o.sort_unstable();
    o.dedup();
    o
}

/// All orbits, one per representative (minimal basis index).
pub fn orbits(n: usize) -> Vec<Vec<usize>> {
    let dim = 1usize << n;
    let mut seen = vec![false; dim];
    let mut out = Vec::new();
    for z in 0..dim {
        if seen[z] {
            continue;
        }
        let o = orbit(z, n);
        for &m in &o {
            seen[m] = true;
        }
        out.push(o);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisClass {
    /// t == reverse(t): (|t⟩ + X^{⊗n}|t⟩)/√2
    Class1,
    /// t == reverse(complement(t)): (|t⟩ + X^{⊗n}|t⟩)/√2
    Class2,
    /// four-element orbits: ½(|t⟩ + F|t⟩ + R|t⟩ + RF|t⟩)
    Class3,
}

/// The orbit basis of the symmetric subspace V.
#[derive(Debug, Clone)]
pub struct SymmetricBasis {
    pub n: usize,
    pub vectors: Vec<Statevector>,
    pub class_tags: Vec<BasisClass>,
    pub orbits: Vec<Vec<usize>>,
}

impl SymmetricBasis {
    pub fn class_counts(&self) -> (usize, usize, usize) {
        let c = |t: BasisClass| self.class_tags.iter().filter(|&&x| x == t).count();
        (c(BasisClass::Class1), c(BasisClass::Class2), c(BasisClass::Class3))
    }
}

/// Build the symmetrized orbit basis; at n = 6 this is the 20-vector set with
/// class sizes (4, 4, 12).
pub fn build_basis_m(n: usize) -> Result<SymmetricBasis> {
    if n > 10 {
        return Err(Error::Capacity(format!("symmetric basis capped at 10 qubits, got {n}")));
    }
    let dim = 1usize << n;
    let mut vectors = Vec::new();
    let mut class_tags = Vec::new();
    let orbit_list = orbits(n);
    for o in &orbit_list {
        let rep = o[0];
        let comp = !rep & (dim - 1);
        let class = if rep == reverse_bits(rep, n) {
            BasisClass::Class1
        } else if rep == reverse_bits(comp, n) {
            BasisClass::Class2
        } else {
            BasisClass::Class3
        };
        let weight = Complex64::new(1.0 / (o.len() as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for &z in o {
            amps[z] = weight;
        }
        vectors.push(Statevector::from_amplitudes(n, amps)?);
        class_tags.push(class);
    }
    Ok(SymmetricBasis { n, vectors, class_tags, orbits: orbit_list })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceClass {
    /// the ground space contains a vector fixed by both symmetries
    EasySymmetric,
    /// symmetry protected: no symmetric ground vector exists
    HardProtected,
}

/// Classify by projecting the symmetrizer ¼(1+F)(1+R) onto ground basis
/// states: the symmetrized image of a ground state stays inside the ground
/// space exactly when its full orbit is ground, which is the rank > 0 test.
pub fn classify_instance(inst: &SKInstance) -> InstanceClass {
    classify_spectrum(inst.n, &spectrum(inst))
}

/// Same classification from a precomputed spectrum.
pub fn classify_spectrum(n: usize, spec: &DiagonalSpectrum) -> InstanceClass {
    let lambda_min = spec.lambda_min;
    for &g in &spec.ground_indices {
        let o = orbit(g, n);
        if o.iter().all(|&z| spec.energies[z] == lambda_min) {
            return InstanceClass::EasySymmetric;
        }
    }
    InstanceClass::HardProtected
}

/// min ⟨ψ|H_P|ψ⟩ over the symmetric subspace V. H_P is diagonal and the orbit
/// vectors have disjoint support, so H_P restricted to V is diagonal with the
/// orbit-mean energies on the diagonal.
pub fn min_energy_over_v(inst: &SKInstance) -> Result<f64> {
    if inst.n > 10 {
        return Err(Error::Capacity(format!("symmetric subspace capped at 10 qubits, got {}", inst.n)));
    }
    let spec = spectrum(inst);
    Ok(min_energy_over_v_from_energies(inst.n, &spec.energies))
}

pub fn min_energy_over_v_from_energies(n: usize, energies: &[f64]) -> f64 {
    orbits(n)
        .iter()
        .map(|o| o.iter().map(|&z| energies[z]).sum::<f64>() / o.len() as f64)
        .fold(f64::INFINITY, f64::min)
}

/// ⟨χ|H_P|χ⟩ for each basis-M vector (orbit-mean energies, same order as the basis).
pub fn basis_m_energies(basis: &SymmetricBasis, energies: &[f64]) -> Vec<f64> {
    basis
        .orbits
        .iter()
        .map(|o| o.iter().map(|&z| energies[z]).sum::<f64>() / o.len() as f64)
        .collect()
}
