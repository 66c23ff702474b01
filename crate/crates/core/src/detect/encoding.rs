//! Basis and angle encoding: register-scoped checks on the first gate each
//! qubit receives.

use super::{PatternKind, PatternMatch, Payload};
use crate::circuit::{first_gate_map, Circuit, Gate, Register};

/// Basis encoding on register `reg`, if its first gates form one.
///
/// Qubits left at zero by the encoding may first be touched by a multi-qubit
/// gate, as long as that gate comes after every `x` of the register.
fn basis_on(circuit: &Circuit, reg: &Register, first: &[Option<usize>]) -> Option<PatternMatch> {
    let insts = circuit.instructions();
    let mut encoded = Vec::new();
    let mut deferred = Vec::new();
    for q in reg.range() {
        let Some(i) = first[q] else { continue };
        let inst = &insts[i];
        if inst.is_gate(Gate::X) {
            encoded.push((q, i));
        } else if inst.unitary_gate().is_some() && inst.qubits.len() > 1 {
            deferred.push(i);
        } else {
            return None;
        }
    }
    let last_x = encoded.iter().map(|&(_, i)| i).max()?;
    if deferred.iter().any(|&i| i < last_x) {
        return None;
    }
    let bitstring: String = reg
        .range()
        .rev()
        .map(|q| if encoded.iter().any(|&(e, _)| e == q) { '1' } else { '0' })
        .collect();
    let first_x = encoded.iter().map(|&(_, i)| i).min()?;
    Some(PatternMatch {
        kind: PatternKind::BE,
        span: [first_x, last_x],
        qubits: encoded.iter().map(|&(q, _)| q).collect(),
        payload: Payload::Basis {
            register: reg.name.clone(),
            bitstring,
        },
    })
}

pub fn detect_basis_encoding(circuit: &Circuit) -> Vec<PatternMatch> {
    let first = first_gate_map(circuit);
    circuit
        .qregs()
        .iter()
        .filter_map(|reg| basis_on(circuit, reg, &first))
        .collect()
}

/// Smallest angle magnitude that counts as encoded data.
const ZERO_ANGLE: f64 = 1e-9;

fn angles_on(circuit: &Circuit, reg: &Register, first: &[Option<usize>]) -> Option<PatternMatch> {
    if reg.size < 2 {
        return None;
    }
    let insts = circuit.instructions();
    let mut angles = Vec::with_capacity(reg.size);
    let mut indices = Vec::with_capacity(reg.size);
    for q in reg.range() {
        let i = first[q]?;
        match insts[i].unitary_gate() {
            Some((Gate::RY, params)) => {
                angles.push(params[0]);
                indices.push(i);
            }
            _ => return None,
        }
    }
    if angles.iter().all(|a| a.abs() <= ZERO_ANGLE) {
        return None;
    }
    Some(PatternMatch {
        kind: PatternKind::AE,
        span: [*indices.iter().min()?, *indices.iter().max()?],
        qubits: reg.range().collect(),
        payload: Payload::Angles {
            register: reg.name.clone(),
            angles,
        },
    })
}

pub fn detect_angle_encoding(circuit: &Circuit) -> Vec<PatternMatch> {
    let first = first_gate_map(circuit);
    circuit
        .qregs()
        .iter()
        .filter_map(|reg| angles_on(circuit, reg, &first))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_circuit;

    fn circuit(body: &str) -> Circuit {
        parse_circuit(&format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n{body}")).unwrap()
    }

    #[test]
    fn basis_bitstring() {
        let m = detect_basis_encoding(&circuit("qreg q[4]; x q[1]; x q[3];"));
        assert_eq!(m.len(), 1);
        assert_eq!(
            m[0].payload,
            Payload::Basis {
                register: "q".into(),
                bitstring: "1010".into()
            }
        );
        assert_eq!(m[0].qubits, vec![1, 3]);
        assert_eq!(m[0].span, [0, 1]);
    }

    #[test]
    fn basis_rejects_mixed_first_layer() {
        assert!(detect_basis_encoding(&circuit("qreg q[2]; h q[0]; x q[1];")).is_empty());
        assert!(detect_basis_encoding(&circuit("qreg q[2]; h q[0];")).is_empty());
        // an entangling gate before the encoding finishes
        assert!(detect_basis_encoding(&circuit("qreg q[3]; cx q[0],q[1]; x q[2];")).is_empty());
    }

    #[test]
    fn basis_per_register() {
        let src = "qreg a[2]; qreg b[2]; qreg c[1]; x a[0]; x b[1]; h c[0]; cx a[0],b[0]; ccx a[1],b[1],c[0];";
        let m = detect_basis_encoding(&circuit(src));
        let regs: Vec<_> = m
            .iter()
            .map(|m| match &m.payload {
                Payload::Basis { register, bitstring } => (register.clone(), bitstring.clone()),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(regs, vec![("a".into(), "01".into()), ("b".into(), "10".into())]);
    }

    #[test]
    fn angle_encoding() {
        let m = detect_angle_encoding(&circuit("qreg q[2]; ry(0.1) q[0]; ry(0.7) q[1]; cx q[0],q[1];"));
        assert_eq!(m.len(), 1);
        assert_eq!(
            m[0].payload,
            Payload::Angles {
                register: "q".into(),
                angles: vec![0.1, 0.7]
            }
        );
    }

    #[test]
    fn angle_encoding_rejections() {
        assert!(detect_angle_encoding(&circuit("qreg q[2]; ry(0) q[0]; ry(0) q[1];")).is_empty());
        assert!(detect_angle_encoding(&circuit("qreg q[1]; ry(0.3) q[0];")).is_empty());
        assert!(detect_angle_encoding(&circuit("qreg q[2]; ry(0.3) q[0];")).is_empty());
        assert!(detect_angle_encoding(&circuit("qreg q[2]; ry(0.3) q[0]; rx(0.3) q[1];")).is_empty());
    }
}
