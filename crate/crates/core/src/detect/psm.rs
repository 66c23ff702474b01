//! Post-selective measurement: a measurement whose result later gates
//! instructions through a classical condition.

use std::collections::BTreeMap;

use super::{PatternKind, PatternMatch, Payload};
use crate::circuit::{Circuit, Op};

/// One match per (measurement, register), covering every guarded instruction
/// whose most recent prior measurement into that register it is.
pub fn detect_post_selective_measurement(circuit: &Circuit) -> Vec<PatternMatch> {
    let insts = circuit.instructions();
    let mut last_measure: BTreeMap<&str, usize> = BTreeMap::new();
    let mut groups: BTreeMap<(usize, String), Vec<usize>> = BTreeMap::new();
    for (i, inst) in insts.iter().enumerate() {
        if let Some(guard) = &inst.guard {
            if let Some(&m) = last_measure.get(guard.register.as_str()) {
                groups.entry((m, guard.register.clone())).or_default().push(i);
            }
        }
        if let Op::Measure { clbit } = inst.op {
            if let Some(reg) = circuit.creg_of(clbit) {
                last_measure.insert(reg.name.as_str(), i);
            }
        }
    }
    groups
        .into_iter()
        .map(|((measure, register), guarded)| {
            let mut qubits: Vec<usize> = std::iter::once(measure)
                .chain(guarded.iter().copied())
                .flat_map(|i| insts[i].qubits.iter().copied())
                .collect();
            qubits.sort_unstable();
            qubits.dedup();
            let values = guarded
                .iter()
                .map(|&i| insts[i].guard.as_ref().map_or(0, |g| g.value))
                .collect();
            PatternMatch {
                kind: PatternKind::PSM,
                span: [measure, *guarded.last().expect("groups are non-empty")],
                qubits,
                payload: Payload::PostSelection {
                    measure,
                    guarded,
                    register,
                    values,
                },
            }
        })
        .collect()
}
