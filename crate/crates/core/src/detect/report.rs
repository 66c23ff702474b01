//! Detection results and their JSON and text renderings.

use std::fmt::Write as _;

use serde::Serialize;

use super::{PatternKind, PatternMatch};

/// A detector that did not run, and why.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub detector: PatternKind,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReport {
    pub circuit: String,
    pub matches: Vec<PatternMatch>,
    pub skipped: Vec<Skipped>,
}

impl DetectionReport {
    pub fn kinds(&self) -> Vec<PatternKind> {
        let mut kinds: Vec<PatternKind> = self.matches.iter().map(|m| m.kind).collect();
        kinds.dedup();
        kinds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.circuit);
        if self.matches.is_empty() {
            let _ = writeln!(out, "  no patterns found");
        }
        for m in &self.matches {
            let payload = serde_json::to_string(&m.payload).expect("payload serializes");
            let _ = writeln!(
                out,
                "  {:<4} [{}..{}] qubits {:?} {}",
                m.kind.as_str(),
                m.span[0],
                m.span[1],
                m.qubits,
                payload
            );
        }
        for s in &self.skipped {
            let _ = writeln!(out, "  {:<4} skipped: {}", s.detector.as_str(), s.reason);
        }
        out
    }
}
