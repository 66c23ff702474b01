//! Ground-truth evaluation, random circuits and runtime scaling.

mod metrics;
mod random;
mod scaling;

pub use metrics::{evaluate, load_truth, FileResult, MetricsReport, Score, TruthEntry};
pub use random::{random_circuit, RANDOM_GATES};
pub use scaling::{measure_scaling, write_scaling_csv, ScaleMode, ScalingRow, ScalingSpec, SCALING_HEADER};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid ground-truth file {}: {source}", path.display())]
    Truth {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
