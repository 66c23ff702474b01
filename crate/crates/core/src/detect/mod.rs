//! The eight pattern detectors.
//!
//! Uniform Superposition and Creating Entanglement are state-based and work
//! on a [`StateTrace`]; the other six inspect the circuit structure only.

mod amplitude;
mod encoding;
mod entanglement;
mod psm;
mod qpe;
mod report;
mod superposition;
mod uncompute;

pub use amplitude::detect_amplitude_encoding;
pub use encoding::{detect_angle_encoding, detect_basis_encoding};
pub use entanglement::{detect_creating_entanglement, entanglement_witness, is_entangled};
pub use psm::detect_post_selective_measurement;
pub use qpe::detect_qpe;
pub use report::{DetectionReport, Skipped};
pub use superposition::detect_uniform_superposition;
pub use uncompute::{detect_uncompute, find_inverse_subcircuit, InverseHit};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::sim::{self, StateTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternKind {
    US,
    CE,
    BE,
    AE,
    AMP,
    QPE,
    UNC,
    PSM,
}

impl PatternKind {
    pub const ALL: [PatternKind; 8] = [
        PatternKind::US,
        PatternKind::CE,
        PatternKind::BE,
        PatternKind::AE,
        PatternKind::AMP,
        PatternKind::QPE,
        PatternKind::UNC,
        PatternKind::PSM,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::US => "US",
            PatternKind::CE => "CE",
            PatternKind::BE => "BE",
            PatternKind::AE => "AE",
            PatternKind::AMP => "AMP",
            PatternKind::QPE => "QPE",
            PatternKind::UNC => "UNC",
            PatternKind::PSM => "PSM",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            PatternKind::US => "uniform superposition",
            PatternKind::CE => "creating entanglement",
            PatternKind::BE => "basis encoding",
            PatternKind::AE => "angle encoding",
            PatternKind::AMP => "amplitude encoding",
            PatternKind::QPE => "quantum phase estimation",
            PatternKind::UNC => "uncompute",
            PatternKind::PSM => "post-selective measurement",
        }
    }

    /// Detectors that need a simulated state trace.
    pub fn is_state_based(self) -> bool {
        matches!(self, PatternKind::US | PatternKind::CE)
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown pattern `{0}` (expected one of US, CE, BE, AE, AMP, QPE, UNC, PSM)")]
pub struct UnknownPattern(pub String);

impl FromStr for PatternKind {
    type Err = UnknownPattern;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PatternKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownPattern(s.to_string()))
    }
}

/// Bipartition enumeration for Creating Entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CeMode {
    /// Every bipartition, as subsets containing qubit 0.
    #[default]
    Faithful,
    /// Only the `n` single-qubit-versus-rest cuts.
    Fast,
}

impl FromStr for CeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "faithful" => Ok(CeMode::Faithful),
            "fast" => Ok(CeMode::Fast),
            other => Err(format!("unknown CE mode `{other}` (expected faithful or fast)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncomputeOptions {
    /// Minimum gate count of each of the two ranges.
    pub min_gates: usize,
    /// Keep a hit only if the state before the inverse range is entangled.
    pub require_entangled: bool,
    /// Also look for the fan-out copy stage and the trailing swaps.
    pub detect_copy_swap: bool,
}

impl Default for UncomputeOptions {
    fn default() -> Self {
        UncomputeOptions {
            min_gates: 2,
            require_entangled: false,
            detect_copy_swap: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Controlled-phase angle matching in QPE blocks and the verification check.
    pub angle: f64,
    /// Equal-magnitude test for uniform superposition.
    pub amplitude: f64,
    /// Parameter comparison in the inverse-subcircuit check.
    pub inverse: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            angle: 1e-6,
            amplitude: 1e-8,
            inverse: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub patterns: BTreeSet<PatternKind>,
    pub max_sim_qubits: usize,
    pub ce_mode: CeMode,
    pub uncompute: UncomputeOptions,
    /// Require the QPE inverse-QFT block to match the inverse DFT numerically.
    pub qpe_verify: bool,
    pub tolerances: Tolerances,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            patterns: PatternKind::ALL.into_iter().collect(),
            max_sim_qubits: sim::DEFAULT_MAX_QUBITS,
            ce_mode: CeMode::Faithful,
            uncompute: UncomputeOptions::default(),
            qpe_verify: false,
            tolerances: Tolerances::default(),
        }
    }
}

/// One multiplexed-rotation block found by the amplitude-encoding detector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationBlock {
    pub target: usize,
    pub span: [usize; 2],
    pub controls: Vec<usize>,
}

/// Which parts of the compute / copy / uncompute / swap shape were found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UncomputeStages {
    pub compute: bool,
    pub copy: bool,
    pub uncompute: bool,
    pub swap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    SuperposedQubit {
        qubit: usize,
    },
    SuperposedRegister {
        register: String,
    },
    Entanglement {
        /// Lowest qubit whose single-qubit cut is entangled.
        witness: usize,
        coefficients: Vec<f64>,
    },
    Basis {
        register: String,
        /// Most significant qubit first.
        bitstring: String,
    },
    Angles {
        register: String,
        angles: Vec<f64>,
    },
    Amplitude {
        register: String,
        blocks: Vec<RotationBlock>,
    },
    PhaseEstimation {
        counting: Vec<usize>,
        targets: Vec<usize>,
        stages: [[usize; 2]; 3],
        verified: Option<bool>,
    },
    Uncompute {
        /// Inclusive layer ranges.
        range_a: [usize; 2],
        range_b: [usize; 2],
        stages: UncomputeStages,
        copy_gates: Vec<usize>,
        swap_gates: Vec<usize>,
    },
    PostSelection {
        measure: usize,
        guarded: Vec<usize>,
        register: String,
        values: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternMatch {
    pub kind: PatternKind,
    /// Inclusive instruction index range.
    pub span: [usize; 2],
    pub qubits: Vec<usize>,
    pub payload: Payload,
}

impl PatternMatch {
    pub fn start(&self) -> usize {
        self.span[0]
    }
}

/// Runs the selected detectors. State-based detectors are skipped, with the
/// reason recorded, when the circuit is wider than the simulation limit.
pub fn detect_all(name: &str, circuit: &Circuit, config: &DetectorConfig) -> DetectionReport {
    let mut matches = Vec::new();
    let mut skipped = Vec::new();
    let wants = |k: PatternKind| config.patterns.contains(&k);

    if wants(PatternKind::US) || wants(PatternKind::CE) {
        match sim::trace(circuit, config.max_sim_qubits) {
            Ok(trace) => {
                if wants(PatternKind::US) {
                    matches.extend(detect_uniform_superposition(
                        circuit,
                        &trace,
                        config.tolerances.amplitude,
                    ));
                }
                if wants(PatternKind::CE) {
                    matches.extend(detect_creating_entanglement(circuit, &trace, config.ce_mode));
                }
            }
            Err(err) => {
                for kind in [PatternKind::US, PatternKind::CE] {
                    if wants(kind) {
                        skipped.push(Skipped {
                            detector: kind,
                            reason: err.to_string(),
                        });
                    }
                }
            }
        }
    }
    if wants(PatternKind::BE) {
        matches.extend(detect_basis_encoding(circuit));
    }
    if wants(PatternKind::AE) {
        matches.extend(detect_angle_encoding(circuit));
    }
    if wants(PatternKind::AMP) {
        matches.extend(detect_amplitude_encoding(circuit));
    }
    if wants(PatternKind::QPE) {
        matches.extend(detect_qpe(circuit, config.qpe_verify, config.tolerances.angle));
    }
    if wants(PatternKind::UNC) {
        matches.extend(detect_uncompute(
            circuit,
            &config.uncompute,
            config.tolerances.inverse,
            config.max_sim_qubits,
        ));
    }
    if wants(PatternKind::PSM) {
        matches.extend(detect_post_selective_measurement(circuit));
    }
    matches.sort_by_key(|m| (m.kind, m.start()));
    DetectionReport {
        circuit: name.to_string(),
        matches,
        skipped,
    }
}

/// Runs one detector on its own, including the trace for state-based ones.
pub fn run_detector(
    kind: PatternKind,
    circuit: &Circuit,
    config: &DetectorConfig,
) -> Result<Vec<PatternMatch>, sim::SimError> {
    let trace = |c: &Circuit| -> Result<StateTrace, sim::SimError> { sim::trace(c, config.max_sim_qubits) };
    Ok(match kind {
        PatternKind::US => detect_uniform_superposition(circuit, &trace(circuit)?, config.tolerances.amplitude),
        PatternKind::CE => detect_creating_entanglement(circuit, &trace(circuit)?, config.ce_mode),
        PatternKind::BE => detect_basis_encoding(circuit),
        PatternKind::AE => detect_angle_encoding(circuit),
        PatternKind::AMP => detect_amplitude_encoding(circuit),
        PatternKind::QPE => detect_qpe(circuit, config.qpe_verify, config.tolerances.angle),
        PatternKind::UNC => detect_uncompute(
            circuit,
            &config.uncompute,
            config.tolerances.inverse,
            config.max_sim_qubits,
        ),
        PatternKind::PSM => detect_post_selective_measurement(circuit),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn pattern_names() {
        for k in PatternKind::ALL {
            assert_eq!(k.as_str().parse::<PatternKind>().unwrap(), k);
        }
        assert_eq!("amp".parse::<PatternKind>().unwrap(), PatternKind::AMP);
        assert!("XYZ".parse::<PatternKind>().is_err());
    }

    #[test]
    fn bell_report() {
        let mut c = Circuit::new(2);
        c.gate(Gate::H, &[], &[0]).gate(Gate::CX, &[], &[0, 1]);
        let r = detect_all("bell", &c, &DetectorConfig::default());
        let kinds: Vec<PatternKind> = r.matches.iter().map(|m| m.kind).collect();
        assert_eq!(kinds, vec![PatternKind::US, PatternKind::CE]);
        assert_eq!(r.matches[0].payload, Payload::SuperposedQubit { qubit: 0 });
        assert_eq!(r.matches[1].span, [1, 1]);
    }

    #[test]
    fn wide_circuit_skips_state_detectors() {
        let mut c = Circuit::new(20);
        for q in 0..20 {
            c.gate(Gate::X, &[], &[q]);
        }
        let r = detect_all("wide", &c, &DetectorConfig::default());
        assert_eq!(r.skipped.len(), 2);
        assert!(r.skipped[0].reason.contains("16"));
        assert!(r.matches.iter().any(|m| m.kind == PatternKind::BE));
    }

    #[test]
    fn empty_circuit() {
        let r = detect_all("empty", &Circuit::new(0), &DetectorConfig::default());
        assert!(r.matches.is_empty() && r.skipped.is_empty());
    }
}
