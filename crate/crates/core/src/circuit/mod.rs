//! Circuit data model shared by the frontend, the simulator and the detectors.
//!
//! A [`Circuit`] is an ordered list of [`Instruction`]s over globally indexed
//! qubits. Register declarations are kept so detectors can report
//! register-level matches and so the circuit can be written back to OpenQASM.

mod gate;
mod invert;
mod layers;
mod qasm_out;

pub use gate::Gate;
pub use invert::invert;
pub use layers::{first_gate_map, layers, subcircuit, LayeredCircuit};
pub use qasm_out::to_qasm;

use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a circuit of width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("classical bit {clbit} out of range ({count} declared)")]
    ClbitOutOfRange { clbit: usize, count: usize },
    #[error("qubit {0} used twice in one instruction")]
    DuplicateOperand(usize),
    #[error("gate {gate} takes {expected} qubit(s), got {got}")]
    QubitCount { gate: Gate, expected: usize, got: usize },
    #[error("gate {gate} takes {expected} parameter(s), got {got}")]
    ParamCount { gate: Gate, expected: usize, got: usize },
    #[error("unknown classical register `{0}` in guard")]
    UnknownRegister(String),
    #[error("guards are only allowed on gates and measurements")]
    GuardNotAllowed,
    #[error("layer range {from}+{count} exceeds depth {depth}")]
    LayerRange { from: usize, count: usize, depth: usize },
    #[error("instruction {index} ({what}) has no unitary inverse")]
    NotInvertible { index: usize, what: &'static str },
}

/// A named register occupying a contiguous range of global indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub size: usize,
}

impl Register {
    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.size
    }

    pub fn contains(&self, index: usize) -> bool {
        self.range().contains(&index)
    }
}

/// Classical condition `if(register == value)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guard {
    pub register: String,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate {
        gate: Gate,
        params: Vec<f64>,
    },
    /// Writes the measured qubit into global classical bit `clbit`.
    Measure {
        clbit: usize,
    },
    Reset,
    Barrier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub op: Op,
    pub qubits: Vec<usize>,
    pub guard: Option<Guard>,
}

impl Instruction {
    pub fn gate(gate: Gate, params: Vec<f64>, qubits: Vec<usize>) -> Self {
        Instruction {
            op: Op::Gate { gate, params },
            qubits,
            guard: None,
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Instruction {
            op: Op::Measure { clbit },
            qubits: vec![qubit],
            guard: None,
        }
    }

    pub fn reset(qubit: usize) -> Self {
        Instruction {
            op: Op::Reset,
            qubits: vec![qubit],
            guard: None,
        }
    }

    pub fn barrier(qubits: Vec<usize>) -> Self {
        Instruction {
            op: Op::Barrier,
            qubits,
            guard: None,
        }
    }

    pub fn with_guard(mut self, register: &str, value: u64) -> Self {
        self.guard = Some(Guard {
            register: register.to_string(),
            value,
        });
        self
    }

    /// The gate and its parameters, if this is a gate application.
    pub fn as_gate(&self) -> Option<(Gate, &[f64])> {
        match &self.op {
            Op::Gate { gate, params } => Some((*gate, params)),
            _ => None,
        }
    }

    /// The gate if this is an unguarded gate application.
    pub fn unitary_gate(&self) -> Option<(Gate, &[f64])> {
        if self.guard.is_some() {
            return None;
        }
        self.as_gate()
    }

    pub fn is_gate(&self, gate: Gate) -> bool {
        matches!(self.unitary_gate(), Some((g, _)) if g == gate)
    }

    pub fn is_barrier(&self) -> bool {
        matches!(self.op, Op::Barrier)
    }

    pub fn is_measure(&self) -> bool {
        matches!(self.op, Op::Measure { .. })
    }

    /// Short label used in diagnostics and text output.
    pub fn label(&self) -> &'static str {
        match &self.op {
            Op::Gate { gate, .. } => gate.name(),
            Op::Measure { .. } => "measure",
            Op::Reset => "reset",
            Op::Barrier => "barrier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    instructions: Vec<Instruction>,
    n_qubits: usize,
    n_clbits: usize,
    qregs: Vec<Register>,
    cregs: Vec<Register>,
}

impl Circuit {
    /// A circuit with a single quantum register `q` of `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Self {
        let qregs = if n_qubits > 0 {
            vec![Register {
                name: "q".into(),
                start: 0,
                size: n_qubits,
            }]
        } else {
            Vec::new()
        };
        Circuit {
            instructions: Vec::new(),
            n_qubits,
            n_clbits: 0,
            qregs,
            cregs: Vec::new(),
        }
    }

    /// A circuit with the given registers, in declaration order.
    pub fn with_registers(qregs: &[(&str, usize)], cregs: &[(&str, usize)]) -> Self {
        let mut circuit = Circuit::default();
        for (name, size) in qregs {
            circuit.add_qreg(name, *size);
        }
        for (name, size) in cregs {
            circuit.add_creg(name, *size);
        }
        circuit
    }

    pub fn add_qreg(&mut self, name: &str, size: usize) -> Range<usize> {
        let start = self.n_qubits;
        self.qregs.push(Register {
            name: name.to_string(),
            start,
            size,
        });
        self.n_qubits += size;
        start..self.n_qubits
    }

    pub fn add_creg(&mut self, name: &str, size: usize) -> Range<usize> {
        let start = self.n_clbits;
        self.cregs.push(Register {
            name: name.to_string(),
            start,
            size,
        });
        self.n_clbits += size;
        start..self.n_clbits
    }

    /// Same registers, no instructions.
    pub fn empty_like(&self) -> Self {
        Circuit {
            instructions: Vec::new(),
            ..self.clone_header()
        }
    }

    fn clone_header(&self) -> Self {
        Circuit {
            instructions: Vec::new(),
            n_qubits: self.n_qubits,
            n_clbits: self.n_clbits,
            qregs: self.qregs.clone(),
            cregs: self.cregs.clone(),
        }
    }

    pub fn push(&mut self, instruction: Instruction) -> Result<usize, CircuitError> {
        self.validate(&instruction)?;
        self.instructions.push(instruction);
        Ok(self.instructions.len() - 1)
    }

    /// Convenience for building circuits in code; panics on invalid input.
    pub fn gate(&mut self, gate: Gate, params: &[f64], qubits: &[usize]) -> &mut Self {
        self.push(Instruction::gate(gate, params.to_vec(), qubits.to_vec()))
            .unwrap_or_else(|e| panic!("invalid gate application: {e}"));
        self
    }

    pub fn extend<I: IntoIterator<Item = Instruction>>(&mut self, instructions: I) -> Result<(), CircuitError> {
        for instruction in instructions {
            self.push(instruction)?;
        }
        Ok(())
    }

    fn validate(&self, instruction: &Instruction) -> Result<(), CircuitError> {
        for (i, &q) in instruction.qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    width: self.n_qubits,
                });
            }
            if instruction.qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateOperand(q));
            }
        }
        match &instruction.op {
            Op::Gate { gate, params } => {
                if instruction.qubits.len() != gate.num_qubits() {
                    return Err(CircuitError::QubitCount {
                        gate: *gate,
                        expected: gate.num_qubits(),
                        got: instruction.qubits.len(),
                    });
                }
                if params.len() != gate.num_params() {
                    return Err(CircuitError::ParamCount {
                        gate: *gate,
                        expected: gate.num_params(),
                        got: params.len(),
                    });
                }
            }
            Op::Measure { clbit } => {
                if *clbit >= self.n_clbits {
                    return Err(CircuitError::ClbitOutOfRange {
                        clbit: *clbit,
                        count: self.n_clbits,
                    });
                }
                if instruction.qubits.len() != 1 {
                    return Err(CircuitError::QubitCount {
                        gate: Gate::Id,
                        expected: 1,
                        got: instruction.qubits.len(),
                    });
                }
            }
            Op::Reset => {
                if instruction.qubits.len() != 1 {
                    return Err(CircuitError::QubitCount {
                        gate: Gate::Id,
                        expected: 1,
                        got: instruction.qubits.len(),
                    });
                }
            }
            Op::Barrier => {}
        }
        if let Some(guard) = &instruction.guard {
            if !matches!(instruction.op, Op::Gate { .. } | Op::Measure { .. }) {
                return Err(CircuitError::GuardNotAllowed);
            }
            if self.creg(&guard.register).is_none() {
                return Err(CircuitError::UnknownRegister(guard.register.clone()));
            }
        }
        Ok(())
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn qregs(&self) -> &[Register] {
        &self.qregs
    }

    pub fn cregs(&self) -> &[Register] {
        &self.cregs
    }

    pub fn creg(&self, name: &str) -> Option<&Register> {
        self.cregs.iter().find(|r| r.name == name)
    }

    pub fn qreg(&self, name: &str) -> Option<&Register> {
        self.qregs.iter().find(|r| r.name == name)
    }

    /// Register containing the classical bit.
    pub fn creg_of(&self, clbit: usize) -> Option<&Register> {
        self.cregs.iter().find(|r| r.contains(clbit))
    }

    /// Register name and local index of a global qubit.
    pub fn qubit_name(&self, qubit: usize) -> Option<(&str, usize)> {
        self.qregs
            .iter()
            .find(|r| r.contains(qubit))
            .map(|r| (r.name.as_str(), qubit - r.start))
    }

    /// Number of gate applications (barriers, measurements and resets excluded).
    pub fn gate_count(&self) -> usize {
        self.instructions.iter().filter(|i| i.as_gate().is_some()).count()
    }

    /// `self` followed by the instructions of `other` (same registers assumed).
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        let mut out = self.clone();
        out.extend(other.instructions.iter().cloned())?;
        Ok(out)
    }

    /// Structural equality with parameters compared within `tol`.
    pub fn approx_eq(&self, other: &Circuit, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self.instructions.len() == other.instructions.len()
            && self
                .instructions
                .iter()
                .zip(&other.instructions)
                .all(|(a, b)| instructions_approx_eq(a, b, tol))
    }
}

pub(crate) fn instructions_approx_eq(a: &Instruction, b: &Instruction, tol: f64) -> bool {
    if a.qubits != b.qubits || a.guard != b.guard {
        return false;
    }
    match (&a.op, &b.op) {
        (Op::Gate { gate: ga, params: pa }, Op::Gate { gate: gb, params: pb }) => {
            ga == gb && pa.len() == pb.len() && pa.iter().zip(pb).all(|(x, y)| (x - y).abs() <= tol)
        }
        (x, y) => x == y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_instructions() {
        let mut c = Circuit::new(2);
        assert_eq!(
            c.push(Instruction::gate(Gate::CX, vec![], vec![0, 0])),
            Err(CircuitError::DuplicateOperand(0))
        );
        assert!(matches!(
            c.push(Instruction::gate(Gate::H, vec![], vec![2])),
            Err(CircuitError::QubitOutOfRange { qubit: 2, width: 2 })
        ));
        assert!(matches!(
            c.push(Instruction::gate(Gate::RY, vec![], vec![0])),
            Err(CircuitError::ParamCount { .. })
        ));
        assert!(matches!(
            c.push(Instruction::gate(Gate::X, vec![], vec![0]).with_guard("c", 1)),
            Err(CircuitError::UnknownRegister(_))
        ));
        assert!(matches!(
            c.push(Instruction::measure(0, 0)),
            Err(CircuitError::ClbitOutOfRange { .. })
        ));
    }

    #[test]
    fn register_lookup() {
        let c = Circuit::with_registers(&[("a", 2), ("b", 3)], &[("c", 2)]);
        assert_eq!(c.n_qubits(), 5);
        assert_eq!(c.qubit_name(3), Some(("b", 1)));
        assert_eq!(c.creg("c").unwrap().range(), 0..2);
        assert!(c.qubit_name(5).is_none());
    }
}
