//! As-soon-as-possible layering (time slices) and layer-range slicing.

use super::{Circuit, CircuitError, Op};

/// Time-slice decomposition of a circuit.
///
/// Barriers are not placed in any layer; each one is recorded with the index
/// of the layer it precedes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredCircuit {
    pub layers: Vec<Vec<usize>>,
    /// `(instruction index, boundary)`: the barrier sits before layer `boundary`.
    pub barriers: Vec<(usize, usize)>,
    layer_of: Vec<Option<usize>>,
}

impl LayeredCircuit {
    /// Circuit depth `m`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Layer holding instruction `index`, `None` for barriers.
    pub fn layer_of(&self, index: usize) -> Option<usize> {
        self.layer_of.get(index).copied().flatten()
    }

    /// Instruction indices of layers `from..from + count`, in program order.
    /// Barriers belong to the layer they precede; trailing barriers belong to
    /// the last layer.
    pub fn instructions_in(&self, from: usize, count: usize) -> Vec<usize> {
        let end = from + count;
        let mut indices: Vec<usize> = self.layers[from..end].iter().flatten().copied().collect();
        let depth = self.depth();
        for &(index, boundary) in &self.barriers {
            let inside = boundary >= from && boundary < end;
            let trailing = boundary == depth && end == depth;
            if inside || trailing {
                indices.push(index);
            }
        }
        indices.sort_unstable();
        indices
    }

    pub fn slice(&self, circuit: &Circuit, from: usize, count: usize) -> Result<Circuit, CircuitError> {
        if from + count > self.depth() {
            return Err(CircuitError::LayerRange {
                from,
                count,
                depth: self.depth(),
            });
        }
        let mut out = circuit.empty_like();
        let instructions = circuit.instructions();
        for index in self.instructions_in(from, count) {
            out.push(instructions[index].clone())?;
        }
        Ok(out)
    }
}

/// Greedy ASAP layering. Each instruction goes into the earliest layer after
/// every earlier instruction sharing a qubit or classical bit with it;
/// barriers align the fronts of all qubits they cross.
pub fn layers(circuit: &Circuit) -> LayeredCircuit {
    let mut qubit_front = vec![0usize; circuit.n_qubits()];
    let mut clbit_front = vec![0usize; circuit.n_clbits()];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut barriers = Vec::new();
    let mut layer_of = Vec::with_capacity(circuit.len());

    for (index, inst) in circuit.instructions().iter().enumerate() {
        if inst.is_barrier() {
            let boundary = inst.qubits.iter().map(|&q| qubit_front[q]).max().unwrap_or(0);
            for &q in &inst.qubits {
                qubit_front[q] = boundary;
            }
            barriers.push((index, boundary));
            layer_of.push(None);
            continue;
        }
        let mut clbits: Vec<usize> = Vec::new();
        if let Op::Measure { clbit } = inst.op {
            clbits.push(clbit);
        }
        if let Some(guard) = &inst.guard {
            if let Some(reg) = circuit.creg(&guard.register) {
                clbits.extend(reg.range());
            }
        }
        let layer = inst
            .qubits
            .iter()
            .map(|&q| qubit_front[q])
            .chain(clbits.iter().map(|&c| clbit_front[c]))
            .max()
            .unwrap_or(0);
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(index);
        for &q in &inst.qubits {
            qubit_front[q] = layer + 1;
        }
        for &c in &clbits {
            clbit_front[c] = layer + 1;
        }
        layer_of.push(Some(layer));
    }

    LayeredCircuit {
        layers,
        barriers,
        layer_of,
    }
}

/// The instructions of layers `layer_from..layer_from + layer_count` as a new
/// circuit of the same width.
pub fn subcircuit(circuit: &Circuit, layer_from: usize, layer_count: usize) -> Result<Circuit, CircuitError> {
    layers(circuit).slice(circuit, layer_from, layer_count)
}

/// For each qubit, the index of the first non-barrier instruction acting on it.
pub fn first_gate_map(circuit: &Circuit) -> Vec<Option<usize>> {
    let mut first = vec![None; circuit.n_qubits()];
    for (index, inst) in circuit.instructions().iter().enumerate() {
        if inst.is_barrier() {
            continue;
        }
        for &q in &inst.qubits {
            first[q].get_or_insert(index);
        }
    }
    first
}
