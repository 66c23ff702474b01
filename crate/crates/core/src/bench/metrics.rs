//! Presence-per-circuit scoring against a ground-truth file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::detect::{detect_all, DetectorConfig, PatternKind};
use crate::qasm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub file: PathBuf,
    pub patterns: BTreeSet<PatternKind>,
}

pub fn load_truth(path: &Path) -> Result<Vec<TruthEntry>, BenchError> {
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| BenchError::Truth {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Score {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// `None` when nothing was detected.
    pub precision: Option<f64>,
    /// `None` when nothing was expected.
    pub recall: Option<f64>,
    pub f1: f64,
}

impl Score {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let (p, r) = (precision.unwrap_or(0.0), recall.unwrap_or(0.0));
        let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        Score {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileResult {
    pub file: PathBuf,
    pub expected: BTreeSet<PatternKind>,
    pub detected: BTreeSet<PatternKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub per_pattern: BTreeMap<PatternKind, Score>,
    /// Sorted by file path.
    pub files: Vec<FileResult>,
    pub micro: Score,
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }

    pub fn to_text(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8}{:>4}{:>4}{:>4}{:>11}{:>8}{:>6}",
            "pattern", "tp", "fp", "fn", "precision", "recall", "f1"
        );
        let rows = self.per_pattern.iter().map(|(k, s)| (k.as_str(), s));
        for (name, s) in rows.chain(std::iter::once(("micro", &self.micro))) {
            let _ = writeln!(
                out,
                "{:<8}{:>4}{:>4}{:>4}{:>11}{:>8}{:>6.2}",
                name,
                s.tp,
                s.fp,
                s.fn_,
                fmt(s.precision),
                fmt(s.recall),
                s.f1
            );
        }
        for f in self.files.iter().filter(|f| f.error.is_some()) {
            let _ = writeln!(
                out,
                "error in {}: {}",
                f.file.display(),
                f.error.as_deref().unwrap_or_default()
            );
        }
        out
    }
}

fn detect_file(path: &Path, config: &DetectorConfig) -> Result<BTreeSet<PatternKind>, String> {
    let source = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let circuit = qasm::parse_circuit(&source).map_err(|e| e.to_string())?;
    let report = detect_all(&path.display().to_string(), &circuit, config);
    Ok(report.matches.iter().map(|m| m.kind).collect())
}

/// Scores every truth entry; files that fail to load are recorded with an
/// error and count as detecting nothing.
pub fn evaluate(corpus_dir: &Path, truth: &[TruthEntry], config: &DetectorConfig) -> MetricsReport {
    let mut files: Vec<FileResult> = truth
        .iter()
        .map(|entry| {
            let (detected, error) = match detect_file(&corpus_dir.join(&entry.file), config) {
                Ok(d) => (d.intersection(&config.patterns).copied().collect(), None),
                Err(e) => (BTreeSet::new(), Some(e)),
            };
            FileResult {
                file: entry.file.clone(),
                expected: entry.patterns.clone(),
                detected,
                error,
            }
        })
        .collect();
    files.sort_by(|a, b| a.file.cmp(&b.file));

    let mut per_pattern = BTreeMap::new();
    let (mut tp_all, mut fp_all, mut fn_all) = (0, 0, 0);
    for &kind in &config.patterns {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for f in &files {
            match (f.expected.contains(&kind), f.detected.contains(&kind)) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                (false, false) => {}
            }
        }
        tp_all += tp;
        fp_all += fp;
        fn_all += fn_;
        per_pattern.insert(kind, Score::from_counts(tp, fp, fn_));
    }
    MetricsReport {
        per_pattern,
        files,
        micro: Score::from_counts(tp_all, fp_all, fn_all),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_identities() {
        let s = Score::from_counts(3, 1, 0);
        assert_eq!(s.precision, Some(0.75));
        assert_eq!(s.recall, Some(1.0));
        assert!((s.f1 - 6.0 / 7.0).abs() < 1e-15);
        let empty = Score::from_counts(0, 0, 0);
        assert_eq!((empty.precision, empty.recall, empty.f1), (None, None, 0.0));
        let missed = Score::from_counts(0, 0, 2);
        assert_eq!((missed.precision, missed.recall, missed.f1), (None, Some(0.0), 0.0));
    }

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(
            dir.join(name),
            format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n{body}"),
        )
        .unwrap();
    }

    #[test]
    fn bell_and_false_negative() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "bell.qasm", "qreg q[2]; h q[0]; cx q[0],q[1];");
        write(dir.path(), "hlayer.qasm", "qreg q[2]; h q;");
        fs::write(dir.path().join("broken.qasm"), "OPENQASM 2.0; qreg q[1]; h q[0]").unwrap();
        let truth = vec![
            TruthEntry {
                file: "bell.qasm".into(),
                patterns: [PatternKind::US, PatternKind::CE].into(),
            },
            TruthEntry {
                file: "hlayer.qasm".into(),
                patterns: [PatternKind::US, PatternKind::AMP].into(),
            },
            TruthEntry {
                file: "broken.qasm".into(),
                patterns: [PatternKind::US].into(),
            },
        ];
        let r = evaluate(dir.path(), &truth, &DetectorConfig::default());
        assert_eq!(r.per_pattern[&PatternKind::CE].tp, 1);
        assert_eq!(r.per_pattern[&PatternKind::US].tp, 2);
        assert_eq!(r.per_pattern[&PatternKind::US].fn_, 1);
        assert_eq!(r.per_pattern[&PatternKind::AMP].fn_, 1);
        assert!(r
            .files
            .iter()
            .find(|f| f.file == Path::new("broken.qasm"))
            .unwrap()
            .error
            .is_some());

        // order independence
        let mut shuffled = truth.clone();
        shuffled.reverse();
        assert_eq!(evaluate(dir.path(), &shuffled, &DetectorConfig::default()), r);

        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["per_pattern"]["CE"]["fn"], 0);
        assert!(json["per_pattern"]["PSM"]["precision"].is_null());
        assert!(r.to_text().contains("micro"));
    }
}
