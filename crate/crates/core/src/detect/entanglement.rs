//! Creating Entanglement: report each instruction after which the state
//! becomes entangled having not been entangled before.

use super::{CeMode, PatternKind, PatternMatch, Payload};
use crate::circuit::Circuit;
use crate::numerics::{schmidt, StateVector};
use crate::sim::StateTrace;

/// Whether any bipartition of `state` has Schmidt rank above one.
pub fn is_entangled(state: &StateVector, mode: CeMode) -> bool {
    let n = state.n_qubits();
    if n < 2 {
        return false;
    }
    match mode {
        CeMode::Fast => (0..n).any(|q| rank_above_one(state, &[q])),
        CeMode::Faithful => {
            // Subsets containing qubit 0: one per unordered bipartition.
            let mut subset = Vec::with_capacity(n);
            for mask in 0..(1usize << (n - 1)) - 1 {
                subset.clear();
                subset.push(0);
                subset.extend((1..n).filter(|q| mask >> (q - 1) & 1 == 1));
                if rank_above_one(state, &subset) {
                    return true;
                }
            }
            false
        }
    }
}

fn rank_above_one(state: &StateVector, subset: &[usize]) -> bool {
    schmidt(state, subset).map(|d| d.rank > 1).unwrap_or(false)
}

/// Lowest qubit whose single-qubit cut is entangled, with its coefficients.
pub fn entanglement_witness(state: &StateVector) -> Option<(usize, Vec<f64>)> {
    if state.n_qubits() < 2 {
        return None;
    }
    (0..state.n_qubits()).find_map(|q| {
        let d = schmidt(state, &[q]).ok()?;
        (d.rank > 1).then_some((q, d.coefficients))
    })
}

pub fn detect_creating_entanglement(circuit: &Circuit, trace: &StateTrace, mode: CeMode) -> Vec<PatternMatch> {
    let mut matches = Vec::new();
    let mut previous = is_entangled(&trace.initial, mode);
    for (t, state) in trace.states.iter().enumerate() {
        let inst = &circuit.instructions()[t];
        // A barrier repeats the previous state.
        let entangled = if inst.is_barrier() {
            previous
        } else {
            is_entangled(state, mode)
        };
        if entangled && !previous {
            let (witness, coefficients) =
                entanglement_witness(state).expect("entangled state has an entangled qubit cut");
            let mut qubits = inst.qubits.clone();
            qubits.sort_unstable();
            matches.push(PatternMatch {
                kind: PatternKind::CE,
                span: [t, t],
                qubits,
                payload: Payload::Entanglement { witness, coefficients },
            });
        }
        previous = entangled;
    }
    matches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::numerics::purity;
    use crate::sim::trace;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn run(c: &Circuit, mode: CeMode) -> Vec<PatternMatch> {
        detect_creating_entanglement(c, &trace(c, 16).unwrap(), mode)
    }

    #[test]
    fn bell_fires_at_cx() {
        let mut c = Circuit::new(2);
        c.gate(Gate::H, &[], &[0]).gate(Gate::CX, &[], &[0, 1]);
        let m = run(&c, CeMode::Faithful);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].span, [1, 1]);
        match &m[0].payload {
            Payload::Entanglement { witness, coefficients } => {
                assert_eq!(*witness, 0);
                for s in coefficients {
                    assert!((s - FRAC_1_SQRT_2).abs() < 1e-10);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn product_states_never_fire() {
        let mut c = Circuit::new(2);
        c.gate(Gate::H, &[], &[0]).gate(Gate::H, &[], &[1]);
        assert!(run(&c, CeMode::Faithful).is_empty());
        // cx on |+>|+> leaves a product state.
        c.gate(Gate::CX, &[], &[0, 1]);
        assert!(run(&c, CeMode::Faithful).is_empty());
    }

    #[test]
    fn ghz_fires_once_at_first_cx() {
        let mut c = Circuit::new(3);
        c.gate(Gate::H, &[], &[0])
            .gate(Gate::CX, &[], &[0, 1])
            .gate(Gate::CX, &[], &[1, 2]);
        let t = trace(&c, 16).unwrap();
        // purity oracle: entangled from the first cx on
        assert!((purity(&t.states[0], &[0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(purity(&t.states[1], &[0]).unwrap() < 1.0 - 1e-7);
        for mode in [CeMode::Faithful, CeMode::Fast] {
            let m = run(&c, mode);
            assert_eq!(m.len(), 1);
            assert_eq!(m[0].span, [1, 1]);
            assert_eq!(m[0].qubits, vec![0, 1]);
        }
    }

    #[test]
    fn refires_after_disentangling() {
        let mut c = Circuit::new(2);
        c.gate(Gate::H, &[], &[0])
            .gate(Gate::CX, &[], &[0, 1])
            .gate(Gate::CX, &[], &[0, 1])
            .gate(Gate::CX, &[], &[0, 1]);
        let spans: Vec<_> = run(&c, CeMode::Fast).iter().map(|m| m.span[0]).collect();
        assert_eq!(spans, vec![1, 3]);
    }

    #[test]
    fn single_qubit_is_never_entangled() {
        let mut c = Circuit::new(1);
        c.gate(Gate::H, &[], &[0]);
        assert!(run(&c, CeMode::Faithful).is_empty());
    }
}
