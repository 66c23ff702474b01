use std::fmt::Write;

use super::{Circuit, Op};

/// Writes the circuit as OpenQASM 2.0. Angles are printed in shortest
/// round-trip form, so re-parsing recovers them exactly.
pub fn to_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for reg in circuit.qregs() {
        let _ = writeln!(out, "qreg {}[{}];", reg.name, reg.size);
    }
    for reg in circuit.cregs() {
        let _ = writeln!(out, "creg {}[{}];", reg.name, reg.size);
    }
    let qubit = |q: usize| match circuit.qubit_name(q) {
        Some((name, i)) => format!("{name}[{i}]"),
        None => format!("q[{q}]"),
    };
    for inst in circuit.instructions() {
        if let Some(guard) = &inst.guard {
            let _ = write!(out, "if({}=={}) ", guard.register, guard.value);
        }
        let operands: Vec<String> = inst.qubits.iter().map(|&q| qubit(q)).collect();
        match &inst.op {
            Op::Gate { gate, params } => {
                out.push_str(gate.name());
                if !params.is_empty() {
                    let ps: Vec<String> = params.iter().map(|p| format!("{p:?}")).collect();
                    let _ = write!(out, "({})", ps.join(","));
                }
                let _ = writeln!(out, " {};", operands.join(","));
            }
            Op::Measure { clbit } => {
                let target = match circuit.creg_of(*clbit) {
                    Some(reg) => format!("{}[{}]", reg.name, clbit - reg.start),
                    None => format!("c[{clbit}]"),
                };
                let _ = writeln!(out, "measure {} -> {};", operands[0], target);
            }
            Op::Reset => {
                let _ = writeln!(out, "reset {};", operands[0]);
            }
            Op::Barrier => {
                let _ = writeln!(out, "barrier {};", operands.join(","));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, Instruction};

    #[test]
    fn writes_registers_and_guards() {
        let mut c = Circuit::with_registers(&[("q", 2)], &[("c", 1)]);
        c.gate(Gate::RY, &[0.5], &[0]);
        c.push(Instruction::measure(0, 0)).unwrap();
        c.push(Instruction::gate(Gate::X, vec![], vec![1]).with_guard("c", 1))
            .unwrap();
        c.push(Instruction::barrier(vec![0, 1])).unwrap();
        let text = to_qasm(&c);
        assert_eq!(
            text,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[1];\n\
             ry(0.5) q[0];\nmeasure q[0] -> c[0];\nif(c==1) x q[1];\nbarrier q[0],q[1];\n"
        );
    }
}
