//! Uncompute: a layer range followed, possibly after a gap, by a layer range
//! that is its structural inverse.
//!
//! Two ranges are compared through their per-qubit projections: B inverts A
//! exactly when, on every qubit, B's gate sequence is A's reversed with each
//! gate inverted and multi-qubit gates keep their operand lists. This is
//! independent of how commuting gates happen to be layered.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use super::{is_entangled, CeMode, PatternKind, PatternMatch, Payload, UncomputeOptions, UncomputeStages};
use crate::circuit::{layers, Circuit, Gate, Instruction, LayeredCircuit};
use crate::numerics::StateVector;
use crate::sim;

/// A pair of equal-size layer ranges, the second inverting the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseHit {
    /// First layer of the compute range.
    pub a: usize,
    /// First layer of the inverse range.
    pub b: usize,
    /// Number of layers in each range.
    pub size: usize,
}

impl InverseHit {
    /// Inclusive layer range of the compute part.
    pub fn range_a(&self) -> [usize; 2] {
        [self.a, self.a + self.size - 1]
    }

    pub fn range_b(&self) -> [usize; 2] {
        [self.b, self.b + self.size - 1]
    }
}

/// Gate identity that a gate and its inverse share.
fn inverse_class(gate: Gate) -> Gate {
    match gate {
        Gate::Sdg => Gate::S,
        Gate::Tdg => Gate::T,
        other => other,
    }
}

fn fingerprint(inst: &Instruction) -> u64 {
    let mut h = DefaultHasher::new();
    if let Some((gate, _)) = inst.unitary_gate() {
        inverse_class(gate).hash(&mut h);
    }
    inst.qubits.hash(&mut h);
    h.finish()
}

fn inverts(a: &Instruction, b: &Instruction, tol: f64) -> bool {
    let (Some((ga, pa)), Some((gb, pb))) = (a.unitary_gate(), b.unitary_gate()) else {
        return false;
    };
    let (inv, params) = ga.inverse(pa);
    inv == gb && a.qubits == b.qubits && params.iter().zip(pb).all(|(x, y)| (x - y).abs() <= tol)
}

/// Per-layer prefix sums used to reject candidate pairs cheaply.
struct Scanner<'c> {
    circuit: &'c Circuit,
    layered: LayeredCircuit,
    hash_prefix: Vec<u64>,
    gate_prefix: Vec<usize>,
    blocked_prefix: Vec<usize>,
    tol: f64,
}

impl<'c> Scanner<'c> {
    fn new(circuit: &'c Circuit, tol: f64) -> Self {
        let layered = layers(circuit);
        let insts = circuit.instructions();
        let mut hash_prefix = vec![0u64];
        let mut gate_prefix = vec![0usize];
        let mut blocked_prefix = vec![0usize];
        for layer in &layered.layers {
            let h = layer
                .iter()
                .fold(0u64, |acc, &i| acc.wrapping_add(fingerprint(&insts[i])));
            let blocked = layer.iter().any(|&i| insts[i].unitary_gate().is_none());
            hash_prefix.push(hash_prefix.last().unwrap().wrapping_add(h));
            gate_prefix.push(gate_prefix.last().unwrap() + layer.len());
            blocked_prefix.push(blocked_prefix.last().unwrap() + usize::from(blocked));
        }
        Scanner {
            circuit,
            layered,
            hash_prefix,
            gate_prefix,
            blocked_prefix,
            tol,
        }
    }

    fn hash(&self, from: usize, size: usize) -> u64 {
        self.hash_prefix[from + size].wrapping_sub(self.hash_prefix[from])
    }

    fn gates(&self, from: usize, size: usize) -> usize {
        self.gate_prefix[from + size] - self.gate_prefix[from]
    }

    fn eligible(&self, from: usize, size: usize) -> bool {
        self.blocked_prefix[from + size] == self.blocked_prefix[from]
    }

    fn projections(&self, from: usize, size: usize) -> BTreeMap<usize, Vec<usize>> {
        let mut indices: Vec<usize> = self.layered.layers[from..from + size]
            .iter()
            .flatten()
            .copied()
            .collect();
        indices.sort_unstable();
        let mut per_qubit: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in indices {
            for &q in &self.circuit.instructions()[i].qubits {
                per_qubit.entry(q).or_default().push(i);
            }
        }
        per_qubit
    }

    fn is_inverse(&self, a: usize, b: usize, size: usize) -> bool {
        if !self.eligible(a, size) || !self.eligible(b, size) {
            return false;
        }
        if self.gates(a, size) != self.gates(b, size) || self.hash(a, size) != self.hash(b, size) {
            return false;
        }
        let (pa, pb) = (self.projections(a, size), self.projections(b, size));
        if !pa.keys().eq(pb.keys()) {
            return false;
        }
        let insts = self.circuit.instructions();
        pa.values().zip(pb.values()).all(|(sa, sb)| {
            sa.len() == sb.len()
                && sa
                    .iter()
                    .zip(sb.iter().rev())
                    .all(|(&x, &y)| inverts(&insts[x], &insts[y], self.tol))
        })
    }

    /// Grows a hit outwards while the enlarged ranges still invert each other.
    fn extend(&self, mut hit: InverseHit) -> InverseHit {
        while hit.a > 0 && hit.b + hit.size < self.layered.depth() && self.is_inverse(hit.a - 1, hit.b, hit.size + 1) {
            hit = InverseHit {
                a: hit.a - 1,
                b: hit.b,
                size: hit.size + 1,
            };
        }
        hit
    }

    /// First accepted hit in scan order: size, then start of A, then start of B.
    fn scan(&self, min_gates: usize, mut accept: impl FnMut(&InverseHit) -> bool) -> Option<InverseHit> {
        let m = self.layered.depth();
        for size in 1..=m / 2 {
            for a in 0..=m - 2 * size {
                if self.gates(a, size) < min_gates || !self.eligible(a, size) {
                    continue;
                }
                for b in a + size..=m - size {
                    if !self.is_inverse(a, b, size) {
                        continue;
                    }
                    let hit = self.extend(InverseHit { a, b, size });
                    if accept(&hit) {
                        return Some(hit);
                    }
                }
            }
        }
        None
    }
}

/// The first pair of layer ranges, each holding at least `min_gates` gates,
/// where the later range is the structural inverse of the earlier one.
pub fn find_inverse_subcircuit(circuit: &Circuit, min_gates: usize, tol: f64) -> Option<InverseHit> {
    Scanner::new(circuit, tol).scan(min_gates, |_| true)
}

/// Whether the state just before the inverse range is entangled. `None` when
/// it cannot be simulated.
fn entangled_before(scanner: &Scanner, b: usize, max_qubits: usize) -> Option<bool> {
    sim::check_width(scanner.circuit, max_qubits).ok()?;
    let mut state = StateVector::zero(scanner.circuit.n_qubits());
    for (i, inst) in scanner.circuit.instructions().iter().enumerate() {
        if scanner.layered.layer_of(i).is_none_or(|l| l >= b) {
            continue;
        }
        let (gate, params) = inst.unitary_gate()?;
        sim::apply_gate(&mut state, gate, params, &inst.qubits).ok()?;
    }
    Some(is_entangled(&state, CeMode::Fast))
}

fn range_instructions(scanner: &Scanner, from: usize, size: usize) -> Vec<usize> {
    let mut v: Vec<usize> = scanner.layered.layers[from..from + size]
        .iter()
        .flatten()
        .copied()
        .collect();
    v.sort_unstable();
    v
}

/// Fan-out `cx` gates between the two ranges and trailing swaps on the same
/// qubit pairs.
fn copy_and_swap(scanner: &Scanner, hit: &InverseHit, support: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let insts = scanner.circuit.instructions();
    let first = crate::circuit::first_gate_map(scanner.circuit);
    let mut copies = Vec::new();
    let mut pairs = Vec::new();
    for layer in hit.a + hit.size..hit.b {
        for &i in &scanner.layered.layers[layer] {
            let inst = &insts[i];
            if !inst.is_gate(Gate::CX) {
                continue;
            }
            let (c, t) = (inst.qubits[0], inst.qubits[1]);
            if support.binary_search(&c).is_ok() && support.binary_search(&t).is_err() && first[t] == Some(i) {
                copies.push(i);
                pairs.push((c.min(t), c.max(t)));
            }
        }
    }
    copies.sort_unstable();
    let mut swaps = Vec::new();
    for layer in hit.b + hit.size..scanner.layered.depth() {
        for &i in &scanner.layered.layers[layer] {
            let inst = &insts[i];
            if inst.is_gate(Gate::Swap) {
                let (x, y) = (inst.qubits[0], inst.qubits[1]);
                if pairs.contains(&(x.min(y), x.max(y))) {
                    swaps.push(i);
                }
            }
        }
    }
    swaps.sort_unstable();
    (copies, swaps)
}

pub fn detect_uncompute(
    circuit: &Circuit,
    options: &UncomputeOptions,
    tol: f64,
    max_sim_qubits: usize,
) -> Vec<PatternMatch> {
    let scanner = Scanner::new(circuit, tol);
    let hit = scanner.scan(options.min_gates, |hit| {
        !options.require_entangled || entangled_before(&scanner, hit.b, max_sim_qubits).unwrap_or(true)
    });
    let Some(hit) = hit else { return Vec::new() };

    let a_insts = range_instructions(&scanner, hit.a, hit.size);
    let b_insts = range_instructions(&scanner, hit.b, hit.size);
    let mut support: Vec<usize> = a_insts
        .iter()
        .flat_map(|&i| circuit.instructions()[i].qubits.iter().copied())
        .collect();
    support.sort_unstable();
    support.dedup();
    let (copy_gates, swap_gates) = if options.detect_copy_swap {
        copy_and_swap(&scanner, &hit, &support)
    } else {
        (Vec::new(), Vec::new())
    };
    let mut qubits = support.clone();
    for &i in &copy_gates {
        qubits.extend(&circuit.instructions()[i].qubits);
    }
    qubits.sort_unstable();
    qubits.dedup();
    vec![PatternMatch {
        kind: PatternKind::UNC,
        span: [a_insts[0], *b_insts.last().expect("range holds gates")],
        qubits,
        payload: Payload::Uncompute {
            range_a: hit.range_a(),
            range_b: hit.range_b(),
            stages: UncomputeStages {
                compute: true,
                copy: !copy_gates.is_empty(),
                uncompute: true,
                swap: !swap_gates.is_empty(),
            },
            copy_gates,
            swap_gates,
        },
    }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::invert;
    use crate::qasm::parse_circuit;

    fn circuit(body: &str) -> Circuit {
        parse_circuit(&format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n{body}")).unwrap()
    }

    #[test]
    fn mirrored_single_qubit_sequence() {
        let c = circuit("qreg q[1]; h q[0]; x q[0]; x q[0]; h q[0];");
        let hit = find_inverse_subcircuit(&c, 2, 1e-9).unwrap();
        assert_eq!((hit.range_a(), hit.range_b()), ([0, 1], [2, 3]));
        // without the floor the outer h pair is the first size-1 hit
        let hit = find_inverse_subcircuit(&c, 1, 1e-9).unwrap();
        assert_eq!((hit.range_a(), hit.range_b()), ([0, 0], [3, 3]));
    }

    #[test]
    fn no_repetition_no_hit() {
        assert!(find_inverse_subcircuit(&circuit("qreg q[2]; h q[0]; cx q[0],q[1];"), 2, 1e-9).is_none());
    }

    #[test]
    fn parameters_must_negate() {
        let good = circuit("qreg q[2]; rx(0.3) q[0]; s q[1]; sdg q[1]; rx(-0.3) q[0];");
        assert!(find_inverse_subcircuit(&good, 2, 1e-9).is_some());
        let bad = circuit("qreg q[2]; rx(0.3) q[0]; s q[1]; sdg q[1]; rx(0.3) q[0];");
        assert!(find_inverse_subcircuit(&bad, 2, 1e-9).is_none());
    }

    #[test]
    fn gap_between_ranges() {
        let c = circuit("qreg q[2]; h q[0]; cx q[0],q[1]; x q[0]; x q[0]; cx q[0],q[1]; h q[0];");
        let hit = find_inverse_subcircuit(&c, 2, 1e-9).unwrap();
        assert_eq!(hit.range_a(), [0, 1]);
        assert_eq!(hit.range_b(), [4, 5]);
    }

    #[test]
    fn outward_extension_covers_mirror() {
        let c = circuit("qreg q[2]; h q[0]; cx q[0],q[1]; s q[0]; t q[1]; tdg q[1]; sdg q[0]; cx q[0],q[1]; h q[0];");
        let hit = find_inverse_subcircuit(&c, 2, 1e-9).unwrap();
        assert_eq!((hit.range_a(), hit.range_b()), ([0, 2], [3, 5]));
    }

    #[test]
    fn measurement_blocks_a_range() {
        let c = circuit("qreg q[2]; creg c[1]; h q[0]; measure q[1] -> c[0]; h q[0];");
        assert!(find_inverse_subcircuit(&c, 1, 1e-9).is_none());
        // in the gap it does not matter
        let c = circuit("qreg q[1]; creg c[1]; h q[0]; measure q[0] -> c[0]; h q[0];");
        assert!(find_inverse_subcircuit(&c, 1, 1e-9).is_some());
    }

    #[test]
    fn constructed_inverse_composes_to_identity() {
        let a = circuit("qreg q[3]; h q[0]; cx q[0],q[1]; t q[2]; rz(0.4) q[1]; ccx q[0],q[1],q[2];");
        let c = a.compose(&invert(&a).unwrap()).unwrap();
        let hit = find_inverse_subcircuit(&c, 2, 1e-9).unwrap();
        let lc = layers(&c);
        let ra = lc.slice(&c, hit.a, hit.size).unwrap();
        let rb = lc.slice(&c, hit.b, hit.size).unwrap();
        let u = sim::unitary(&ra.compose(&rb).unwrap()).unwrap();
        assert!(u.max_abs_diff(&crate::numerics::CMatrix::identity(8)) < 1e-9);
    }

    #[test]
    fn require_entangled_filters_product_states() {
        let c = circuit("qreg q[2]; h q[0]; h q[1]; x q[0]; x q[1]; h q[0]; h q[1];");
        let plain = UncomputeOptions::default();
        assert_eq!(detect_uncompute(&c, &plain, 1e-9, 16).len(), 1);
        let strict = UncomputeOptions {
            require_entangled: true,
            ..plain
        };
        assert!(detect_uncompute(&c, &strict, 1e-9, 16).is_empty());
        // an entangled A state passes
        let e = circuit("qreg q[2]; h q[0]; cx q[0],q[1]; t q[1]; tdg q[1]; cx q[0],q[1]; h q[0];");
        assert_eq!(detect_uncompute(&e, &strict, 1e-9, 16).len(), 1);
    }

    #[test]
    fn copy_and_swap_stages() {
        // compute on f, copy into ancilla a, uncompute, swap f and a
        let src = "qreg f[2]; qreg a[2];
            h f[0]; cx f[0],f[1];
            cx f[0],a[0]; cx f[1],a[1];
            cx f[0],f[1]; h f[0];
            barrier f, a;
            swap f[0],a[0]; swap f[1],a[1];";
        let c = circuit(src);
        let opts = UncomputeOptions {
            detect_copy_swap: true,
            ..UncomputeOptions::default()
        };
        let m = detect_uncompute(&c, &opts, 1e-9, 16);
        assert_eq!(m.len(), 1);
        match &m[0].payload {
            Payload::Uncompute {
                range_a,
                range_b,
                stages,
                copy_gates,
                swap_gates,
            } => {
                assert_eq!(*range_a, [0, 1]);
                assert_eq!(*range_b, [3, 4]);
                assert!(stages.compute && stages.copy && stages.uncompute && stages.swap);
                assert_eq!(copy_gates, &vec![2, 3]);
                assert_eq!(swap_gates, &vec![7, 8]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(m[0].span, [0, 5]);
        assert_eq!(m[0].qubits, vec![0, 1, 2, 3]);
    }
}
