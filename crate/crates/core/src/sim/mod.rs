//! Dense statevector simulation and the per-instruction state trace used by
//! the state-based detectors.

mod gates;

pub use gates::{gate_matrix, u_matrix};

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Instruction, Op};
use crate::numerics::{CMatrix, StateVector};

/// Default width limit for simulation.
pub const DEFAULT_MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("circuit has {n} qubits, above the simulation limit of {max} qubits")]
    WidthExceeded { n: usize, max: usize },
    #[error("instruction {index} ({what}) is not a unitary gate")]
    NotUnitary { index: usize, what: &'static str },
    #[error("operand {qubit} out of range for a {n}-qubit state")]
    QubitOutOfRange { qubit: usize, n: usize },
}

/// Applies `gate(params)` on `qubits` in place.
pub fn apply_gate(state: &mut StateVector, gate: Gate, params: &[f64], qubits: &[usize]) -> Result<(), SimError> {
    let n = state.n_qubits();
    if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
        return Err(SimError::QubitOutOfRange { qubit: q, n });
    }
    apply_matrix(state, &gate_matrix(gate, params), qubits);
    Ok(())
}

/// Applies a local matrix (operand `j` = local bit `j`) in place.
pub fn apply_matrix(state: &mut StateVector, m: &CMatrix, qubits: &[usize]) {
    let d = 1usize << qubits.len();
    debug_assert_eq!(m.rows(), d);
    let offsets: Vec<usize> = (0..d)
        .map(|l| {
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| l >> j & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        })
        .collect();
    let mask = offsets[d - 1];
    let amps = state.amplitudes_mut();
    let mut local = vec![Complex64::new(0.0, 0.0); d];
    let data = m.data();
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (l, off) in offsets.iter().enumerate() {
            local[l] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &data[r * d..(r + 1) * d];
            amps[base | off] = row.iter().zip(&local).map(|(a, b)| a * b).sum();
        }
    }
}

/// New state after one unguarded gate instruction.
pub fn apply(state: &StateVector, instruction: &Instruction) -> Result<StateVector, SimError> {
    let (gate, params) = instruction.unitary_gate().ok_or(SimError::NotUnitary {
        index: 0,
        what: describe(instruction),
    })?;
    let mut out = state.clone();
    apply_gate(&mut out, gate, params, &instruction.qubits)?;
    Ok(out)
}

fn describe(instruction: &Instruction) -> &'static str {
    if instruction.guard.is_some() {
        return "guarded instruction";
    }
    match instruction.op {
        Op::Measure { .. } => "measure",
        Op::Reset => "reset",
        Op::Barrier => "barrier",
        Op::Gate { .. } => "gate",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateTrace {
    /// State after each executed instruction, in program order.
    pub states: Vec<StateVector>,
    /// Initial state, |0...0>.
    pub initial: StateVector,
    pub executed_count: usize,
    /// Index of the first measure, reset or guarded instruction, if any.
    pub terminated_by: Option<usize>,
}

impl StateTrace {
    pub fn n_qubits(&self) -> usize {
        self.initial.n_qubits()
    }

    /// State before instruction `t` executes.
    pub fn state_before(&self, t: usize) -> &StateVector {
        if t == 0 {
            &self.initial
        } else {
            &self.states[t - 1]
        }
    }
}

pub fn check_width(circuit: &Circuit, max_qubits: usize) -> Result<(), SimError> {
    if circuit.n_qubits() > max_qubits {
        return Err(SimError::WidthExceeded {
            n: circuit.n_qubits(),
            max: max_qubits,
        });
    }
    Ok(())
}

/// Simulates from |0...0>, recording the state after every instruction up to
/// the first non-unitary one. Barriers repeat the previous state.
pub fn trace(circuit: &Circuit, max_qubits: usize) -> Result<StateTrace, SimError> {
    trace_prefix(circuit, circuit.len(), max_qubits)
}

/// As [`trace`], restricted to the first `limit` instructions.
pub fn trace_prefix(circuit: &Circuit, limit: usize, max_qubits: usize) -> Result<StateTrace, SimError> {
    check_width(circuit, max_qubits)?;
    let initial = StateVector::zero(circuit.n_qubits());
    let mut states = Vec::new();
    let mut current = initial.clone();
    let mut terminated_by = None;
    for (index, inst) in circuit.instructions().iter().take(limit).enumerate() {
        if inst.is_barrier() {
            states.push(current.clone());
            continue;
        }
        match inst.unitary_gate() {
            Some((gate, params)) => {
                apply_gate(&mut current, gate, params, &inst.qubits)?;
                states.push(current.clone());
            }
            None => {
                terminated_by = Some(index);
                break;
            }
        }
    }
    Ok(StateTrace {
        executed_count: states.len(),
        states,
        initial,
        terminated_by,
    })
}

/// Final state of a fully unitary circuit.
pub fn run(circuit: &Circuit, max_qubits: usize) -> Result<StateVector, SimError> {
    check_width(circuit, max_qubits)?;
    let mut state = StateVector::zero(circuit.n_qubits());
    for (index, inst) in circuit.instructions().iter().enumerate() {
        if inst.is_barrier() {
            continue;
        }
        let (gate, params) = inst.unitary_gate().ok_or(SimError::NotUnitary {
            index,
            what: describe(inst),
        })?;
        apply_gate(&mut state, gate, params, &inst.qubits)?;
    }
    Ok(state)
}

/// Full 2^n x 2^n unitary of a circuit without measurement, reset or guards.
pub fn unitary(circuit: &Circuit) -> Result<CMatrix, SimError> {
    let n = circuit.n_qubits();
    check_width(circuit, 12)?;
    let dim = 1usize << n;
    let mut columns: Vec<StateVector> = (0..dim).map(|j| StateVector::basis(n, j)).collect();
    for (index, inst) in circuit.instructions().iter().enumerate() {
        if inst.is_barrier() {
            continue;
        }
        let (gate, params) = inst.unitary_gate().ok_or(SimError::NotUnitary {
            index,
            what: describe(inst),
        })?;
        let m = gate_matrix(gate, params);
        for col in &mut columns {
            apply_matrix(col, &m, &inst.qubits);
        }
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, a) in col.amplitudes().iter().enumerate() {
            out[(i, j)] = *a;
        }
    }
    Ok(out)
}

/// Distance between two unitaries after removing the best global phase:
/// max |a_ij - e^{i phi} b_ij|, with phi aligned on the largest entry of `b`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let (mut best, mut idx) = (0.0, 0);
    for (k, z) in b.data().iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            idx = k;
        }
    }
    if best == 0.0 {
        return a.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let ratio = a.data()[idx] / b.data()[idx];
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}
