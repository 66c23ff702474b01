//! Checks on the bundled corpus circuits themselves.

use std::f64::consts::FRAC_1_SQRT_2;

use qpd::circuit::Circuit;
use qpd::qasm::parse_circuit;
use qpd::sim;

fn load(name: &str) -> Circuit {
    let path = format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_circuit(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// The unitary prefix of a corpus circuit, up to its first measurement.
fn final_state(name: &str) -> qpd::numerics::StateVector {
    let c = load(name);
    let trace = sim::trace(&c, 16).unwrap();
    trace.states.last().unwrap().clone()
}

#[test]
fn wstate_prepares_w() {
    let s = final_state("wstate.qasm");
    for (i, a) in s.amplitudes().iter().enumerate() {
        let want = if [1, 2, 4].contains(&i) { 1.0 / 3f64.sqrt() } else { 0.0 };
        assert!((a.norm() - want).abs() < 1e-9, "amplitude {i}: {a}");
    }
}

#[test]
fn ghz_and_bell() {
    let s = final_state("ghz.qasm");
    assert!((s.amplitudes()[0].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((s.amplitudes()[7].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
}

#[test]
fn adder_computes_sum() {
    // a = 01, b = 11: b + a = 100, so b ends 00 with the carry set
    let s = final_state("adder.qasm");
    let (idx, amp) = s
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .unwrap();
    assert!((amp.norm() - 1.0).abs() < 1e-12);
    let bit = |q: usize| (idx >> q) & 1;
    // qubits: cin 0, a 1..2, b 3..4, cout 5
    assert_eq!((bit(1), bit(2)), (1, 0), "a restored");
    assert_eq!((bit(3), bit(4), bit(5)), (0, 0, 1), "sum 100");
}

#[test]
fn grover_finds_marked_element() {
    let s = final_state("grover.qasm");
    assert!((s.amplitudes()[3].norm() - 1.0).abs() < 1e-12);
}

#[test]
fn deutsch_jozsa_balanced() {
    // all-zero input outcome has probability 0 for a balanced oracle
    let s = final_state("deutsch_jozsa.qasm");
    let p0: f64 = s
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & 0b111 == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    assert!(p0 < 1e-12);
}
