//! Amplitude encoding in the multiplexed-rotation form: each target qubit of
//! a register starts with a uniformly controlled `ry` (optionally followed by
//! a uniformly controlled `rz`) whose controls were prepared earlier.
//!
//! A multiplexor over `k` controls is `2^k` repetitions of
//! `rot(t); cx(c, t)`. The first prepared qubit may instead carry a bare `ry`
//! (or `ry; rz`).

use super::{PatternKind, PatternMatch, Payload, RotationBlock};
use crate::circuit::{Circuit, Gate, Register};

#[derive(Debug, Clone)]
struct Candidate {
    block: RotationBlock,
    multiplexed: bool,
}

/// Per-qubit instruction indices in program order, barriers excluded.
fn timelines(circuit: &Circuit) -> Vec<Vec<usize>> {
    let mut lines = vec![Vec::new(); circuit.n_qubits()];
    for (i, inst) in circuit.instructions().iter().enumerate() {
        if inst.is_barrier() {
            continue;
        }
        for &q in &inst.qubits {
            lines[q].push(i);
        }
    }
    lines
}

/// Longest multiplexor of `rot` on `t` starting at timeline position `pos`.
/// Returns the position after it and the distinct controls.
fn multiplexor(
    circuit: &Circuit,
    line: &[usize],
    pos: usize,
    t: usize,
    rot: Gate,
    reg: &Register,
) -> Option<(usize, Vec<usize>)> {
    let insts = circuit.instructions();
    let mut pairs: Vec<usize> = Vec::new();
    let mut p = pos;
    while p + 1 < line.len() {
        let r = &insts[line[p]];
        let c = &insts[line[p + 1]];
        let rot_ok = r.is_gate(rot) && r.qubits[0] == t;
        let cx_ok = c.is_gate(Gate::CX) && c.qubits[1] == t && reg.contains(c.qubits[0]);
        if !(rot_ok && cx_ok) {
            break;
        }
        pairs.push(c.qubits[0]);
        p += 2;
    }
    // Largest prefix whose length is 2^(number of distinct controls).
    for len in (2..=pairs.len()).rev() {
        if !len.is_power_of_two() {
            continue;
        }
        let mut controls = pairs[..len].to_vec();
        controls.sort_unstable();
        controls.dedup();
        if 1usize << controls.len() == len {
            return Some((pos + 2 * len, controls));
        }
    }
    None
}

fn candidate(circuit: &Circuit, line: &[usize], t: usize, reg: &Register) -> Option<Candidate> {
    let insts = circuit.instructions();
    let start = *line.first()?;
    if let Some((next, mut controls)) = multiplexor(circuit, line, 0, t, Gate::RY, reg) {
        let mut end = next;
        if let Some((after, more)) = multiplexor(circuit, line, next, t, Gate::RZ, reg) {
            end = after;
            controls.extend(more);
            controls.sort_unstable();
            controls.dedup();
        }
        return Some(Candidate {
            block: RotationBlock {
                target: t,
                span: [start, line[end - 1]],
                controls,
            },
            multiplexed: true,
        });
    }
    if !insts[start].is_gate(Gate::RY) {
        return None;
    }
    let mut last = start;
    if let Some(&next) = line.get(1) {
        if insts[next].is_gate(Gate::RZ) {
            last = next;
        }
    }
    Some(Candidate {
        block: RotationBlock {
            target: t,
            span: [start, last],
            controls: Vec::new(),
        },
        multiplexed: false,
    })
}

fn amplitude_on(circuit: &Circuit, reg: &Register, lines: &[Vec<usize>]) -> Option<PatternMatch> {
    if reg.size < 2 {
        return None;
    }
    let mut candidates: Vec<Candidate> = reg
        .range()
        .filter_map(|t| candidate(circuit, &lines[t], t, reg))
        .collect();
    candidates.sort_by_key(|c| c.block.span[0]);

    let mut prepared: Vec<Option<usize>> = vec![None; circuit.n_qubits()];
    let mut accepted: Vec<Candidate> = Vec::new();
    for cand in candidates {
        let start = cand.block.span[0];
        let ok = if cand.multiplexed {
            cand.block.controls.iter().all(|&c| {
                let idle = lines[c].first().is_none_or(|&i| i >= start);
                prepared[c].is_some_and(|end| end < start) || idle
            })
        } else {
            accepted.is_empty()
        };
        if ok {
            prepared[cand.block.target] = Some(cand.block.span[1]);
            accepted.push(cand);
        }
    }
    let needed = (reg.size - 1).max(1);
    if accepted.len() < needed || !accepted.iter().any(|c| c.multiplexed) {
        return None;
    }
    let mut qubits: Vec<usize> = accepted
        .iter()
        .flat_map(|c| std::iter::once(c.block.target).chain(c.block.controls.iter().copied()))
        .collect();
    qubits.sort_unstable();
    qubits.dedup();
    let span = [
        accepted.iter().map(|c| c.block.span[0]).min()?,
        accepted.iter().map(|c| c.block.span[1]).max()?,
    ];
    Some(PatternMatch {
        kind: PatternKind::AMP,
        span,
        qubits,
        payload: Payload::Amplitude {
            register: reg.name.clone(),
            blocks: accepted.into_iter().map(|c| c.block).collect(),
        },
    })
}

pub fn detect_amplitude_encoding(circuit: &Circuit) -> Vec<PatternMatch> {
    let lines = timelines(circuit);
    circuit
        .qregs()
        .iter()
        .filter_map(|reg| amplitude_on(circuit, reg, &lines))
        .collect()
}
