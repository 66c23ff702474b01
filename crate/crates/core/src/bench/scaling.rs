//! Runtime of detectors on random circuits of growing width or depth.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::random_circuit;
use crate::detect::{run_detector, DetectorConfig, PatternKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleMode {
    /// Vary the qubit count, fixing the depth.
    Width,
    /// Vary the depth, fixing the qubit count.
    Depth,
}

impl fmt::Display for ScaleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleMode::Width => "width",
            ScaleMode::Depth => "depth",
        })
    }
}

impl FromStr for ScaleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "width" => Ok(ScaleMode::Width),
            "depth" => Ok(ScaleMode::Depth),
            other => Err(format!("unknown scaling mode `{other}` (expected width or depth)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub detector: PatternKind,
    pub mode: ScaleMode,
    pub fixed: usize,
    pub size: usize,
    pub repeats: usize,
    /// `None` when the detector could not run at this size.
    pub mean_s: Option<f64>,
    pub std_s: Option<f64>,
    #[serde(skip)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSpec {
    pub mode: ScaleMode,
    pub fixed: usize,
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub detectors: Vec<PatternKind>,
    pub seed: u64,
}

/// Mean and sample standard deviation.
fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Times each detector `repeats` times per size. The clock covers the
/// detector call, including the state trace for state-based detectors, and
/// excludes circuit generation.
pub fn measure_scaling(spec: &ScalingSpec, config: &DetectorConfig) -> Vec<ScalingRow> {
    let repeats = spec.repeats.max(1);
    let mut rows = Vec::new();
    for &size in &spec.sizes {
        let (n, m) = match spec.mode {
            ScaleMode::Width => (size, spec.fixed),
            ScaleMode::Depth => (spec.fixed, size),
        };
        let circuit = random_circuit(n, m, spec.seed);
        for &detector in &spec.detectors {
            let mut samples = Vec::with_capacity(repeats);
            let mut error = None;
            for _ in 0..repeats {
                let start = Instant::now();
                let outcome = run_detector(detector, &circuit, config);
                let elapsed = start.elapsed().as_secs_f64();
                if let Err(e) = outcome {
                    error = Some(e.to_string());
                    break;
                }
                samples.push(elapsed);
            }
            let stats = error.is_none().then(|| mean_std(&samples));
            rows.push(ScalingRow {
                detector,
                mode: spec.mode,
                fixed: spec.fixed,
                size,
                repeats,
                mean_s: stats.map(|s| s.0),
                std_s: stats.map(|s| s.1),
                error,
            });
        }
    }
    rows
}

pub const SCALING_HEADER: [&str; 7] = ["detector", "mode", "fixed", "size", "repeats", "mean_s", "std_s"];

/// Writes rows as CSV; rows that could not run carry `nan` timings.
pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCALING_HEADER)?;
    let num = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), |v| format!("{v:.9}"));
    for r in rows {
        w.write_record([
            r.detector.as_str().to_string(),
            r.mode.to_string(),
            r.fixed.to_string(),
            r.size.to_string(),
            r.repeats.to_string(),
            num(r.mean_s),
            num(r.std_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}
