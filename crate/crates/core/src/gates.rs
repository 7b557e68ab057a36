//! Multi-controlled gate construction and the √X-based Toffoli factorizations.

use num_complex::Complex64;

use crate::dense::{c64, identity, kron, pauli_matrix, CMatrix, DenseUnitary};
use crate::error::{Error, Result};

/// Dense width cap for k-controlled constructions (k + 1 qubits).
const MAX_DENSE_QUBITS: usize = 12;

/// One element of a gate sequence: a small unitary on `targets`, activated
/// when every qubit in `controls` is 1.
#[derive(Debug, Clone)]
pub struct GateElem {
    pub gate: DenseUnitary,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

/// An ordered gate sequence on a fixed-width register. Element 0 acts first.
#[derive(Debug, Clone)]
pub struct GateSeq {
    pub width: usize,
    pub elems: Vec<GateElem>,
}

impl GateSeq {
    pub fn new(width: usize) -> Self {
        Self { width, elems: Vec::new() }
    }

    pub fn push(&mut self, gate: DenseUnitary, targets: Vec<usize>, controls: Vec<usize>) -> Result<()> {
        for &q in targets.iter().chain(controls.iter()) {
            if q >= self.width {
                return Err(Error::IndexOutOfRange { index: q, n_qubits: self.width });
            }
        }
        if targets.iter().any(|t| controls.contains(t)) {
            return Err(Error::Domain("target and control sets must be disjoint".into()));
        }
        if gate.dim() != 1 << targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "gate of dimension {} on {} target qubits",
                gate.dim(),
                targets.len()
            )));
        }
        self.elems.push(GateElem { gate, targets, controls });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Compose the sequence into a dense unitary on the full register.
    pub fn compose(&self) -> Result<DenseUnitary> {
        if self.width > MAX_DENSE_QUBITS {
            return Err(Error::Capacity(format!("register width {} too large for dense composition", self.width)));
        }
        let dim = 1usize << self.width;
        let mut total = identity(dim);
        for elem in &self.elems {
            let m = self.embed(elem)?;
            total = m * total;
        }
        DenseUnitary::new(total)
    }

    /// Embed one controlled element into the full register.
    fn embed(&self, elem: &GateElem) -> Result<CMatrix> {
        let dim = 1usize << self.width;
        let mut m = CMatrix::zeros(dim, dim);
        let bit_pos = |q: usize| self.width - 1 - q;
        for z in 0..dim {
            let active = elem.controls.iter().all(|&c| (z >> bit_pos(c)) & 1 == 1);
            if !active {
                m[(z, z)] = c64(1.0, 0.0);
                continue;
            }
            // local index of the target bits of z, qubit order as listed
            let mut local = 0usize;
            for &t in &elem.targets {
                local = (local << 1) | ((z >> bit_pos(t)) & 1);
            }
            for local_out in 0..elem.gate.dim() {
                let entry = elem.gate.matrix()[(local_out, local)];
                if entry.norm_sqr() == 0.0 {
                    continue;
                }
                let mut z_out = z;
                for (i, &t) in elem.targets.iter().enumerate() {
                    let bit = (local_out >> (elem.targets.len() - 1 - i)) & 1;
                    let mask = 1usize << bit_pos(t);
                    if bit == 1 {
                        z_out |= mask;
                    } else {
                        z_out &= !mask;
                    }
                }
                m[(z_out, z)] = entry;
            }
        }
        Ok(m)
    }
}

/// The k-controlled gate 1 ⊕ U: identity except for U on the last 2×2 block.
pub fn k_controlled(u: &DenseUnitary, k: usize) -> Result<DenseUnitary> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch("controlled gate expects a 2×2 unitary".into()));
    }
    if k + 1 > MAX_DENSE_QUBITS {
        return Err(Error::Capacity(format!("k = {k} exceeds dense limit")));
    }
    let dim = 1usize << (k + 1);
    let mut m = identity(dim);
    let base = dim - 2;
    for i in 0..2 {
        for j in 0..2 {
            m[(base + i, base + j)] = u.matrix()[(i, j)];
        }
    }
    DenseUnitary::new(m)
}

/// X^s for real s, with V = √X the principal square root: V^exponent = X^{exponent/2}.
pub fn sqrt_x_power(exponent: f64) -> DenseUnitary {
    x_power(exponent / 2.0)
}

/// X^s via the |±⟩ eigenbasis: entries ½(1 ± e^{iπs}).
pub fn x_power(s: f64) -> DenseUnitary {
    let phase = Complex64::from_polar(1.0, std::f64::consts::PI * s);
    let one = c64(1.0, 0.0);
    let diag = 0.5 * (one + phase);
    let off = 0.5 * (one - phase);
    DenseUnitary::new(CMatrix::from_row_slice(2, 2, &[diag, off, off, diag]))
        .expect("X^s is unitary by construction")
}

fn pauli_x_unitary() -> DenseUnitary {
    DenseUnitary::new(pauli_matrix(1)).unwrap()
}

/// Result of checking the boolean factorization identities behind the √X circuit.
#[derive(Debug, Clone)]
pub struct BooleanIdentityReport {
    /// (a, b, xor ok, matrix identity ok)
    pub assignments: Vec<(u8, u8, bool, bool)>,
    /// generalized 2ab·c̃ = a·c̃ + b·c̃ − (a⊕b)·c̃ over c̃ ∈ {0,1}^q, q ≤ 4
    pub generalized_ok: bool,
    pub all_passed: bool,
}

/// Verify a⊕b = a+b−2ab, V^a V^b V^{−(a⊕b)} = X^{ab}, and the c̃ generalization.
pub fn boolean_identity_check() -> BooleanIdentityReport {
    let mut assignments = Vec::new();
    let mut all = true;
    for a in 0u8..2 {
        for b in 0u8..2 {
            let xor = a ^ b;
            let arith_ok = i16::from(xor) == i16::from(a) + i16::from(b) - 2 * i16::from(a) * i16::from(b)
                && 2 * i16::from(a) * i16::from(b) == i16::from(a) + i16::from(b) - i16::from(xor);
            let lhs = sqrt_x_power(f64::from(a))
                .mul(&sqrt_x_power(f64::from(b)))
                .and_then(|m| m.mul(&sqrt_x_power(-f64::from(xor))))
                .unwrap();
            let rhs = x_power(f64::from(a) * f64::from(b));
            let matrix_ok = lhs.max_abs_diff(&rhs) < 1e-12;
            all &= arith_ok && matrix_ok;
            assignments.push((a, b, arith_ok, matrix_ok));
        }
    }
    let mut generalized_ok = true;
    for q in 1..=4usize {
        for c in 0..(1u32 << q) {
            for a in 0i32..2 {
                for b in 0i32..2 {
                    for bit in 0..q {
                        let cb = ((c >> bit) & 1) as i32;
                        generalized_ok &= 2 * a * b * cb == a * cb + b * cb - ((a ^ b) * cb);
                    }
                }
            }
        }
    }
    all &= generalized_ok;
    BooleanIdentityReport { assignments, generalized_ok, all_passed: all }
}

/// The five-element √X factorization of the 2-controlled Toffoli on qubits
/// (a, b, t) = (0, 1, 2), verified against the dense 8×8 Toffoli.
pub fn toffoli2_sequence() -> Result<GateSeq> {
    let seq = k_toffoli_recursive(2)?;
    debug_assert_eq!(seq.len(), 5);
    Ok(seq)
}

/// Recursive k-controlled X built from X^{s·ab·P} = X^{s/2·bP}·X^{s/2·aP}·X^{−s/2·(a⊕b)P},
/// with a⊕b computed and uncomputed on wire b via CNOT. Controls are qubits
/// 0..k−1, target is qubit k. Leaves stay as dense 2-qubit controlled blocks.
pub fn k_toffoli_recursive(k: usize) -> Result<GateSeq> {
    if !(2..=6).contains(&k) {
        return Err(Error::Capacity(format!("k = {k} outside the supported range 2..=6")));
    }
    let mut seq = GateSeq::new(k + 1);
    let controls: Vec<usize> = (0..k).collect();
    push_controlled_x_power(&mut seq, &controls, k, 1.0)?;
    // exactness gate: must reproduce the dense k-controlled X
    let reference = k_controlled(&pauli_x_unitary(), k)?;
    let err = seq.compose()?.max_abs_diff(&reference);
    if err > 1e-9 {
        return Err(Error::Synthesis(format!(
            "recursive {k}-Toffoli differs from dense reference by {err:.3e}"
        )));
    }
    Ok(seq)
}

fn push_controlled_x_power(seq: &mut GateSeq, controls: &[usize], target: usize, s: f64) -> Result<()> {
    match controls {
        [] => seq.push(x_power(s), vec![target], vec![]),
        [c] => seq.push(x_power(s), vec![target], vec![*c]),
        [a, b, rest @ ..] => {
            let mut with_b: Vec<usize> = vec![*b];
            with_b.extend_from_slice(rest);
            let mut with_a: Vec<usize> = vec![*a];
            with_a.extend_from_slice(rest);
            push_controlled_x_power(seq, &with_b, target, s / 2.0)?;
            seq.push(pauli_x_unitary(), vec![*b], vec![*a])?;
            push_controlled_x_power(seq, &with_b, target, -s / 2.0)?;
            seq.push(pauli_x_unitary(), vec![*b], vec![*a])?;
            push_controlled_x_power(seq, &with_a, target, s / 2.0)
        }
    }
}

/// C_g for g = W Z W†: returns (1_k ⊗ W) C_Z^k (1_k ⊗ W†) after checking the
/// conjugation relation holds for the supplied U.
pub fn local_equivalence(u: &DenseUnitary, w: &DenseUnitary, k: usize) -> Result<DenseUnitary> {
    if u.dim() != 2 || w.dim() != 2 {
        return Err(Error::DimensionMismatch("local equivalence expects 2×2 unitaries".into()));
    }
    let z = DenseUnitary::new(pauli_matrix(3)).unwrap();
    let wzw = w.mul(&z)?.mul(&w.dagger())?;
    let residual = wzw.max_abs_diff(u);
    if residual > 1e-8 {
        return Err(Error::ConjugationMismatch { residual });
    }
    let cz = k_controlled(&z, k)?;
    let eye_k = identity(1 << k);
    let lift = |m: &DenseUnitary| DenseUnitary::new(kron(&eye_k, m.matrix()));
    let left = lift(w)?;
    let right = lift(&w.dagger())?;
    left.mul(&cz)?.mul(&right)
}

/// Verification summary for the recursive synthesis, used by the CLI.
#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub k: usize,
    pub elements: usize,
    pub max_abs_error: f64,
}

pub fn verify_k_toffoli(k: usize) -> Result<SynthesisReport> {
    let seq = k_toffoli_recursive(k)?;
    let reference = k_controlled(&pauli_x_unitary(), k)?;
    let max_abs_error = seq.compose()?.max_abs_diff(&reference);
    Ok(SynthesisReport { k, elements: seq.len(), max_abs_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{identity, max_abs_diff, pauli_matrix};

    #[test]
    fn x_power_endpoints() {
        assert!(max_abs_diff(x_power(0.0).matrix(), &identity(2)) < 1e-15);
        assert!(max_abs_diff(x_power(1.0).matrix(), &pauli_matrix(1)) < 1e-15);
    }

    #[test]
    fn sqrt_x_squares_to_x() {
        let v = sqrt_x_power(1.0);
        let v2 = v.mul(&v).unwrap();
        assert!(max_abs_diff(v2.matrix(), &pauli_matrix(1)) < 1e-14);
    }

    #[test]
    fn x_powers_compose_additively() {
        let a = x_power(0.37);
        let b = x_power(0.51);
        let ab = a.mul(&b).unwrap();
        assert!(ab.max_abs_diff(&x_power(0.88)) < 1e-13);
    }

    #[test]
    fn boolean_identities_hold_exhaustively() {
        let report = boolean_identity_check();
        assert!(report.all_passed);
        assert!(report.generalized_ok);
        assert_eq!(report.assignments.len(), 4);
    }

    #[test]
    fn toffoli2_has_five_elements_and_is_exact() {
        let seq = toffoli2_sequence().unwrap();
        assert_eq!(seq.len(), 5);
        let target = k_controlled(&DenseUnitary::new(pauli_matrix(1)).unwrap(), 2).unwrap();
        assert!(seq.compose().unwrap().max_abs_diff(&target) < 1e-12);
    }

    #[test]
    fn element_counts_follow_the_recursion() {
        // f(k) = 3f(k−1) + 2 with f(1) = 1
        let mut expect = 1usize;
        for k in 2..=5 {
            expect = 3 * expect + 2;
            let seq = k_toffoli_recursive(k).unwrap();
            assert_eq!(seq.len(), expect, "count at k = {k}");
        }
    }

    #[test]
    fn verify_k_toffoli_reports_small_error() {
        for k in 2..=4 {
            let report = verify_k_toffoli(k).unwrap();
            assert!(report.max_abs_error < 1e-9, "k = {k}: {}", report.max_abs_error);
        }
    }

    #[test]
    fn local_equivalence_builds_controlled_x_from_controlled_z() {
        // X = H Z H
        let h = DenseUnitary::new(crate::dense::CMatrix::from_row_slice(2, 2, &{
            let s = 1.0 / 2f64.sqrt();
            [
                crate::dense::c64(s, 0.0), crate::dense::c64(s, 0.0),
                crate::dense::c64(s, 0.0), crate::dense::c64(-s, 0.0),
            ]
        }))
        .unwrap();
        let x = DenseUnitary::new(pauli_matrix(1)).unwrap();
        for k in 1..=3 {
            let built = local_equivalence(&x, &h, k).unwrap();
            let target = k_controlled(&x, k).unwrap();
            assert!(built.max_abs_diff(&target) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn local_equivalence_rejects_wrong_conjugation() {
        let h = DenseUnitary::new(crate::dense::CMatrix::from_row_slice(2, 2, &{
            let s = 1.0 / 2f64.sqrt();
            [
                crate::dense::c64(s, 0.0), crate::dense::c64(s, 0.0),
                crate::dense::c64(s, 0.0), crate::dense::c64(-s, 0.0),
            ]
        }))
        .unwrap();
        let y = DenseUnitary::new(pauli_matrix(2)).unwrap();
        assert!(matches!(
            local_equivalence(&y, &h, 1),
            Err(Error::ConjugationMismatch { .. })
        ));
    }

    #[test]
    fn gate_seq_push_validates_lines() {
        let mut seq = GateSeq::new(2);
        let x = DenseUnitary::new(pauli_matrix(1)).unwrap();
        assert!(seq.push(x.clone(), vec![5], vec![]).is_err());
        assert!(seq.push(x.clone(), vec![0], vec![0]).is_err());
        assert!(seq.push(x, vec![1], vec![0]).is_ok());
    }

    #[test]
    fn k_controlled_rejects_oversized_requests() {
        let x = DenseUnitary::new(pauli_matrix(1)).unwrap();
        assert!(k_controlled(&x, 13).is_err());
    }
}
