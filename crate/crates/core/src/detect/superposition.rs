//! Uniform Superposition: qubits that are unentangled from the rest and read
//! 0 and 1 with equal probability.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{PatternKind, PatternMatch, Payload};
use crate::circuit::Circuit;
use crate::numerics::{schmidt, single_qubit_probabilities, StateVector};
use crate::sim::StateTrace;

/// Whether qubit `q` is in an equal-magnitude superposition on its own.
pub fn is_uniform(state: &StateVector, q: usize, tol: f64) -> bool {
    let (p0, p1) = single_qubit_probabilities(state, q);
    if (p0.sqrt() - FRAC_1_SQRT_2).abs() > tol || (p1.sqrt() - FRAC_1_SQRT_2).abs() > tol {
        return false;
    }
    state.n_qubits() == 1 || schmidt(state, &[q]).map(|d| d.rank == 1).unwrap_or(false)
}

pub fn detect_uniform_superposition(circuit: &Circuit, trace: &StateTrace, tol: f64) -> Vec<PatternMatch> {
    let n = trace.n_qubits();
    let mut seen = vec![false; n];
    let mut register_seen = vec![false; circuit.qregs().len()];
    let mut matches = Vec::new();
    let mut members = vec![false; n];
    for (t, state) in trace.states.iter().enumerate() {
        for (q, m) in members.iter_mut().enumerate() {
            *m = is_uniform(state, q, tol);
        }
        for q in 0..n {
            if members[q] && !seen[q] {
                seen[q] = true;
                matches.push(PatternMatch {
                    kind: PatternKind::US,
                    span: [t, t],
                    qubits: vec![q],
                    payload: Payload::SuperposedQubit { qubit: q },
                });
            }
        }
        for (r, reg) in circuit.qregs().iter().enumerate() {
            if !register_seen[r] && reg.size > 0 && reg.range().all(|q| members[q]) {
                register_seen[r] = true;
                matches.push(PatternMatch {
                    kind: PatternKind::US,
                    span: [t, t],
                    qubits: reg.range().collect(),
                    payload: Payload::SuperposedRegister {
                        register: reg.name.clone(),
                    },
                });
            }
        }
    }
    matches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::sim::trace;

    fn run(c: &Circuit) -> Vec<PatternMatch> {
        detect_uniform_superposition(c, &trace(c, 16).unwrap(), 1e-8)
    }

    #[test]
    fn hadamard_layer() {
        let mut c = Circuit::new(3);
        for q in 0..3 {
            c.gate(Gate::H, &[], &[q]);
        }
        let m = run(&c);
        let spans: Vec<usize> = m.iter().map(|m| m.span[0]).collect();
        assert_eq!(spans, vec![0, 1, 2, 2]);
        assert_eq!(m[3].payload, Payload::SuperposedRegister { register: "q".into() });
    }

    #[test]
    fn ghz_only_first_qubit() {
        let mut c = Circuit::new(3);
        c.gate(Gate::H, &[], &[0])
            .gate(Gate::CX, &[], &[0, 1])
            .gate(Gate::CX, &[], &[1, 2]);
        let m = run(&c);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].qubits, vec![0]);
        assert_eq!(m[0].span, [0, 0]);
    }

    #[test]
    fn basis_state_and_phases() {
        let mut c = Circuit::new(1);
        c.gate(Gate::X, &[], &[0]);
        assert!(run(&c).is_empty());
        // ry(pi/2) gives equal magnitudes; a relative phase is ignored.
        let mut c = Circuit::new(2);
        c.gate(Gate::RY, &[std::f64::consts::FRAC_PI_2], &[0])
            .gate(Gate::S, &[], &[0]);
        let m = run(&c);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].span, [0, 0]);
    }
}
