//! Quantum phase estimation: a Hadamard-prepared counting set, controlled
//! operations from it onto other qubits, then an inverse QFT on the set.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{PatternKind, PatternMatch, Payload};
use crate::circuit::{first_gate_map, Circuit, Gate, Instruction};
use crate::numerics::CMatrix;
use crate::sim;

/// Largest counting set for which the unitary check runs.
const VERIFY_MAX_QUBITS: usize = 8;
const VERIFY_TOL: f64 = 1e-6;

fn controls_of(inst: &Instruction) -> Option<(&[usize], &[usize])> {
    let (gate, _) = inst.unitary_gate()?;
    let k = gate.num_controls();
    (k > 0).then(|| inst.qubits.split_at(k))
}

/// Counting qubits: first gate `h`, and controlling at least one gate whose
/// other operands are all outside the set. Qubits that never act as a control
/// are dropped first; the rest shrinks to a fixpoint.
fn counting_set(circuit: &Circuit) -> Vec<bool> {
    let insts = circuit.instructions();
    let mut is_control = vec![false; circuit.n_qubits()];
    for inst in insts {
        if let Some((controls, _)) = controls_of(inst) {
            controls.iter().for_each(|&c| is_control[c] = true);
        }
    }
    let mut in_c: Vec<bool> = first_gate_map(circuit)
        .iter()
        .zip(&is_control)
        .map(|(f, &ctl)| ctl && f.is_some_and(|i| insts[i].is_gate(Gate::H)))
        .collect();
    loop {
        let mut controls_out = vec![false; in_c.len()];
        for inst in insts {
            let Some((controls, targets)) = controls_of(inst) else {
                continue;
            };
            let others_out = |me: usize| inst.qubits.iter().all(|&q| q == me || !in_c[q]);
            if targets.iter().any(|&t| in_c[t]) {
                continue;
            }
            for &c in controls {
                if in_c[c] && others_out(c) {
                    controls_out[c] = true;
                }
            }
        }
        let next: Vec<bool> = in_c.iter().zip(&controls_out).map(|(&a, &b)| a && b).collect();
        if next == in_c {
            return in_c;
        }
        in_c = next;
    }
}

/// `j >= 1` with `|theta| = pi / 2^j` within `tol`.
fn dyadic_angle(theta: f64, tol: f64) -> bool {
    let mag = theta.abs();
    if mag <= tol {
        return false;
    }
    let j = (PI / mag).log2().round();
    j >= 1.0 && (mag - PI / 2f64.powf(j)).abs() <= tol
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Inverse DFT on `n` qubits, qubit 0 least significant.
fn inverse_dft(n: usize) -> CMatrix {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for k in 0..dim {
            let angle = -2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
            m[(j, k)] = Complex64::from_polar(scale, angle);
        }
    }
    m
}

fn reverse_bits(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| acc | ((x >> b) & 1) << (n - 1 - b))
}

/// Whether `u` is the inverse DFT up to global phase, allowing either qubit
/// order and a bit reversal left out on either side.
fn is_inverse_dft(u: &CMatrix, n: usize) -> bool {
    let f = inverse_dft(n);
    let dim = 1usize << n;
    let permute = |rows: bool, cols: bool| {
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            for k in 0..dim {
                let r = if rows { reverse_bits(j, n) } else { j };
                let c = if cols { reverse_bits(k, n) } else { k };
                m[(j, k)] = f[(r, c)];
            }
        }
        m
    };
    [(false, false), (true, true), (true, false), (false, true)]
        .into_iter()
        .any(|(r, c)| sim::phase_distance(u, &permute(r, c)) <= VERIFY_TOL)
}

fn verify_block(circuit: &Circuit, counting: &[usize], block: &[usize]) -> bool {
    let mut local = Circuit::new(counting.len());
    for &i in block {
        let inst = &circuit.instructions()[i];
        let Some((gate, params)) = inst.unitary_gate() else {
            return false;
        };
        let qubits: Vec<usize> = inst
            .qubits
            .iter()
            .map(|q| counting.binary_search(q).expect("block stays on the counting set"))
            .collect();
        local.gate(gate, params, &qubits);
    }
    match sim::unitary(&local) {
        Ok(u) => is_inverse_dft(&u, counting.len()),
        Err(_) => false,
    }
}

pub fn detect_qpe(circuit: &Circuit, verify: bool, angle_tol: f64) -> Vec<PatternMatch> {
    let in_c = counting_set(circuit);
    let counting: Vec<usize> = (0..in_c.len()).filter(|&q| in_c[q]).collect();
    if counting.len() < 2 {
        return Vec::new();
    }
    let insts = circuit.instructions();

    // Stage 2: the controlled operations leaving the counting set.
    let mut stage2 = Vec::new();
    let mut targets = Vec::new();
    for (i, inst) in insts.iter().enumerate() {
        let Some((controls, others)) = controls_of(inst) else {
            continue;
        };
        let leaves = controls.iter().any(|&c| in_c[c]) && !others.iter().any(|&t| in_c[t]);
        if leaves && controls.iter().filter(|&&c| in_c[c]).count() == 1 {
            stage2.push(i);
            targets.extend(inst.qubits.iter().copied().filter(|&q| !in_c[q]));
        }
    }
    targets.sort_unstable();
    targets.dedup();
    let (Some(&s2_start), Some(&s2_end)) = (stage2.first(), stage2.last()) else {
        return Vec::new();
    };
    let first = first_gate_map(circuit);
    let s1: Vec<usize> = counting.iter().filter_map(|&q| first[q]).collect();
    let s1 = [*s1.iter().min().unwrap_or(&0), *s1.iter().max().unwrap_or(&0)];

    // Stage 3: the first run of QFT-family gates on the counting set.
    let mut block = Vec::new();
    for (i, inst) in insts.iter().enumerate().skip(s2_end + 1) {
        if inst.is_barrier() || !inst.qubits.iter().any(|&q| in_c[q]) {
            continue;
        }
        let allowed = matches!(
            inst.unitary_gate(),
            Some((Gate::H | Gate::CP | Gate::CRZ | Gate::Swap, _))
        );
        if !allowed || !inst.qubits.iter().all(|&q| in_c[q]) {
            break;
        }
        block.push(i);
    }
    if !qft_shaped(circuit, &counting, &block, angle_tol) {
        return Vec::new();
    }
    let verified = if verify && counting.len() <= VERIFY_MAX_QUBITS {
        if !verify_block(circuit, &counting, &block) {
            return Vec::new();
        }
        Some(true)
    } else {
        None
    };
    let s3 = [block[0], *block.last().expect("non-empty block")];
    let mut qubits: Vec<usize> = counting.iter().chain(&targets).copied().collect();
    qubits.sort_unstable();
    vec![PatternMatch {
        kind: PatternKind::QPE,
        span: [s1[0], s3[1]],
        qubits,
        payload: Payload::PhaseEstimation {
            counting,
            targets,
            stages: [s1, [s2_start, s2_end], s3],
            verified,
        },
    }]
}

fn qft_shaped(circuit: &Circuit, counting: &[usize], block: &[usize], tol: f64) -> bool {
    let insts = circuit.instructions();
    let n = circuit.n_qubits();
    let mut has_h = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut sign = 0.0f64;
    let mut h_positions = Vec::new();
    let mut cp_positions = Vec::new();
    for (pos, &i) in block.iter().enumerate() {
        let inst = &insts[i];
        let Some((gate, params)) = inst.unitary_gate() else {
            return false;
        };
        match gate {
            Gate::H => {
                has_h[inst.qubits[0]] = true;
                h_positions.push(pos);
            }
            Gate::CP | Gate::CRZ => {
                let theta = params[0];
                if !dyadic_angle(theta, tol) {
                    return false;
                }
                if sign != 0.0 && sign != theta.signum() {
                    return false;
                }
                sign = theta.signum();
                let (a, b) = (find(&mut parent, inst.qubits[0]), find(&mut parent, inst.qubits[1]));
                parent[a] = b;
                cp_positions.push(pos);
            }
            _ => {}
        }
    }
    if cp_positions.is_empty() || !counting.iter().all(|&q| has_h[q]) {
        return false;
    }
    let root = find(&mut parent, counting[0]);
    if !counting.iter().all(|&q| find(&mut parent, q) == root) {
        return false;
    }
    let (first_h, last_h) = (h_positions[0], *h_positions.last().expect("has h"));
    cp_positions.iter().any(|&p| p > first_h && p < last_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_circuit;

    /// Textbook QPE with three counting qubits estimating the phase of
    /// `p(theta)` on an eigenstate `|1>`.
    pub(crate) fn textbook(theta: f64, with_iqft: bool) -> Circuit {
        textbook_with(theta, with_iqft.then_some([-PI / 2.0, -PI / 4.0, -PI / 2.0]))
    }

    fn textbook_with(theta: f64, iqft: Option<[f64; 3]>) -> Circuit {
        let mut c = Circuit::with_registers(&[("c", 3), ("t", 1)], &[]);
        c.gate(Gate::X, &[], &[3]);
        for q in 0..3 {
            c.gate(Gate::H, &[], &[q]);
        }
        for q in 0..3 {
            c.gate(Gate::CP, &[theta * f64::from(1u32 << q)], &[q, 3]);
        }
        if let Some([a, b, d]) = iqft {
            c.gate(Gate::Swap, &[], &[0, 2]);
            c.gate(Gate::H, &[], &[0]);
            c.gate(Gate::CP, &[a], &[0, 1]);
            c.gate(Gate::H, &[], &[1]);
            c.gate(Gate::CP, &[b], &[0, 2]);
            c.gate(Gate::CP, &[d], &[1, 2]);
            c.gate(Gate::H, &[], &[2]);
        }
        c
    }

    #[test]
    fn textbook_qpe_is_detected_and_verified() {
        let c = textbook(2.0 * PI * 0.375, true);
        let m = detect_qpe(&c, true, 1e-6);
        assert_eq!(m.len(), 1);
        match &m[0].payload {
            Payload::PhaseEstimation {
                counting,
                targets,
                stages,
                verified,
            } => {
                assert_eq!(counting, &vec![0, 1, 2]);
                assert_eq!(targets, &vec![3]);
                assert_eq!(stages[1], [4, 6]);
                assert_eq!(stages[2], [7, 13]);
                assert_eq!(*verified, Some(true));
            }
            other => panic!("{other:?}"),
        }
        // the circuit estimates 0.375 = 0b011 exactly: counting register
        // reads 3 with qubit 0 least significant
        let out = sim::run(&c, 16).unwrap();
        let idx = 0b1000 | 0b011;
        assert!((out.amplitudes()[idx].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn without_inverse_qft_no_match() {
        assert!(detect_qpe(&textbook(1.0, false), false, 1e-6).is_empty());
    }

    #[test]
    fn inverse_dft_matrix_oracle() {
        // hand-computed single-qubit case: H
        let f = inverse_dft(1);
        let h = sim::gate_matrix(Gate::H, &[]);
        assert!(sim::phase_distance(&f, &h) < 1e-12);
        // F^dagger F = I for three qubits
        let f3 = inverse_dft(3);
        assert!(f3.adjoint().mul(&f3).max_abs_diff(&CMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn verification_rejects_wrong_angles() {
        // inconsistent signs fail the structural check
        let c = textbook_with(1.0, Some([-PI / 2.0, PI / 4.0, -PI / 2.0]));
        assert!(detect_qpe(&c, false, 1e-6).is_empty());
        // a forward QFT passes the structure check but fails verification
        let c = textbook_with(1.0, Some([PI / 2.0, PI / 4.0, PI / 2.0]));
        assert_eq!(detect_qpe(&c, false, 1e-6).len(), 1);
        assert!(detect_qpe(&c, true, 1e-6).is_empty());
    }

    #[test]
    fn dyadic_angles() {
        assert!(dyadic_angle(PI / 2.0, 1e-6));
        assert!(dyadic_angle(-PI / 8.0, 1e-6));
        assert!(!dyadic_angle(PI, 1e-6));
        assert!(!dyadic_angle(0.3, 1e-6));
    }

    #[test]
    fn hadamard_only_is_not_qpe() {
        let c = parse_circuit("OPENQASM 2.0; include \"qelib1.inc\"; qreg q[3]; h q; cx q[0],q[1];").unwrap();
        assert!(detect_qpe(&c, false, 1e-6).is_empty());
    }
}
