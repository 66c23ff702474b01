use super::{Circuit, CircuitError, Instruction, Op};

/// Structural dagger: reversed instruction order with every gate replaced by
/// its inverse. Barriers are kept (mirrored); measurements, resets and
/// classically guarded gates have no unitary inverse.
pub fn invert(circuit: &Circuit) -> Result<Circuit, CircuitError> {
    let mut out = circuit.empty_like();
    for (index, inst) in circuit.instructions().iter().enumerate().rev() {
        if inst.guard.is_some() {
            return Err(CircuitError::NotInvertible {
                index,
                what: "guarded instruction",
            });
        }
        let inverted = match &inst.op {
            Op::Gate { gate, params } => {
                let (gate, params) = gate.inverse(params);
                Instruction::gate(gate, params, inst.qubits.clone())
            }
            Op::Barrier => inst.clone(),
            Op::Measure { .. } => return Err(CircuitError::NotInvertible { index, what: "measure" }),
            Op::Reset => return Err(CircuitError::NotInvertible { index, what: "reset" }),
        };
        out.push(inverted)?;
    }
    Ok(out)
}
