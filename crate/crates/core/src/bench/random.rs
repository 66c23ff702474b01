//! Seeded random circuits with every layer completely filled.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};

/// Gate pool, sampled uniformly among the gates that still fit in a layer.
pub const RANDOM_GATES: [Gate; 13] = [
    Gate::X,
    Gate::Y,
    Gate::Z,
    Gate::H,
    Gate::S,
    Gate::T,
    Gate::RX,
    Gate::RY,
    Gate::RZ,
    Gate::CX,
    Gate::CZ,
    Gate::Swap,
    Gate::CCX,
];

/// A circuit on `n` qubits whose layering has depth exactly `m`: each layer
/// places operands drawn without replacement until every qubit is used.
pub fn random_circuit(n: usize, m: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    let mut fitting: Vec<Gate> = Vec::with_capacity(RANDOM_GATES.len());
    for _ in 0..m {
        order.shuffle(&mut rng);
        let mut free = &order[..];
        while !free.is_empty() {
            fitting.clear();
            fitting.extend(RANDOM_GATES.iter().copied().filter(|g| g.num_qubits() <= free.len()));
            let gate = fitting[rng.gen_range(0..fitting.len())];
            let params: Vec<f64> = (0..gate.num_params()).map(|_| rng.gen_range(0.0..TAU)).collect();
            let (operands, rest) = free.split_at(gate.num_qubits());
            circuit.gate(gate, &params, operands);
            free = rest;
        }
    }
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{layers, to_qasm};

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(to_qasm(&random_circuit(3, 5, 42)), to_qasm(&random_circuit(3, 5, 42)));
        assert_ne!(to_qasm(&random_circuit(3, 5, 42)), to_qasm(&random_circuit(3, 5, 43)));
    }

    #[test]
    fn depth_is_exact_and_layers_full() {
        for (n, m) in [(1, 10), (2, 3), (5, 7), (17, 4)] {
            let c = random_circuit(n, m, 1);
            let lc = layers(&c);
            assert_eq!(lc.depth(), m);
            for layer in &lc.layers {
                let width: usize = layer.iter().map(|&i| c.instructions()[i].qubits.len()).sum();
                assert_eq!(width, n);
            }
        }
        assert_eq!(random_circuit(1, 10, 3).len(), 10);
    }

    #[test]
    fn angles_in_range() {
        let c = random_circuit(6, 20, 5);
        for inst in c.instructions() {
            for &p in inst.as_gate().unwrap().1 {
                assert!((0.0..TAU).contains(&p));
            }
        }
    }
}
