//! Command-line interface: `detect`, `bench`, `scale` and `random`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bench::{self, ScaleMode, ScalingSpec};
use crate::circuit::to_qasm;
use crate::detect::{detect_all, CeMode, DetectorConfig, PatternKind, Tolerances, UncomputeOptions};
use crate::qasm;
use crate::sim::DEFAULT_MAX_QUBITS;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qpd",
    version,
    about = "Detect quantum computing patterns in OpenQASM 2.0 circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the pattern detectors on one QASM file.
    Detect(DetectArgs),
    /// Score the detectors against a ground-truth file.
    Bench(BenchArgs),
    /// Time detectors on random circuits of growing width or depth.
    Scale(ScaleArgs),
    /// Write a seeded random circuit as QASM.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct DetectorArgs {
    /// Comma-separated pattern kinds to run (default: all).
    #[arg(long, value_delimiter = ',', value_parser = parse_pattern)]
    patterns: Vec<PatternKind>,
    /// Bipartition enumeration for entanglement: faithful or fast.
    #[arg(long, default_value = "faithful", value_parser = CeMode::from_str)]
    ce_mode: CeMode,
    /// Widest circuit the state-based detectors simulate.
    #[arg(long, env = "QPD_MAX_SIM_QUBITS", default_value_t = DEFAULT_MAX_QUBITS)]
    max_sim_qubits: usize,
    /// Minimum gates in each range of an uncompute match.
    #[arg(long, default_value_t = 2)]
    unc_min_gates: usize,
    /// Keep uncompute matches only if the state before the inverse is entangled.
    #[arg(long)]
    unc_require_entangled: bool,
    /// Also report the copy and swap stages around an uncompute match.
    #[arg(long)]
    unc_copy_swap: bool,
    /// Check the QPE inverse-QFT block against the inverse DFT matrix.
    #[arg(long)]
    qpe_verify: bool,
    #[arg(long, default_value_t = Tolerances::default().angle)]
    angle_tol: f64,
    #[arg(long, default_value_t = Tolerances::default().amplitude)]
    amp_tol: f64,
    #[arg(long, default_value_t = Tolerances::default().inverse)]
    inverse_tol: f64,
}

impl DetectorArgs {
    fn config(&self) -> DetectorConfig {
        let patterns: BTreeSet<PatternKind> = if self.patterns.is_empty() {
            PatternKind::ALL.into_iter().collect()
        } else {
            self.patterns.iter().copied().collect()
        };
        DetectorConfig {
            patterns,
            max_sim_qubits: self.max_sim_qubits,
            ce_mode: self.ce_mode,
            uncompute: UncomputeOptions {
                min_gates: self.unc_min_gates,
                require_entangled: self.unc_require_entangled,
                detect_copy_swap: self.unc_copy_swap,
            },
            qpe_verify: self.qpe_verify,
            tolerances: Tolerances {
                angle: self.angle_tol,
                amplitude: self.amp_tol,
                inverse: self.inverse_tol,
            },
        }
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    detectors: DetectorArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Directory the truth file's paths are relative to.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Write the JSON metrics here; the text table goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    detectors: DetectorArgs,
}

#[derive(Debug, Args)]
struct ScaleArgs {
    #[arg(long, value_parser = ScaleMode::from_str)]
    mode: ScaleMode,
    /// Depth in width mode, qubit count in depth mode.
    #[arg(long)]
    fixed: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_pattern)]
    detectors: Vec<PatternKind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "faithful", value_parser = CeMode::from_str)]
    ce_mode: CeMode,
    #[arg(long, env = "QPD_MAX_SIM_QUBITS", default_value_t = DEFAULT_MAX_QUBITS)]
    max_sim_qubits: usize,
}

#[derive(Debug, Args)]
struct RandomArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    qubits: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pattern(s: &str) -> Result<PatternKind, String> {
    s.parse().map_err(|e: crate::detect::UnknownPattern| e.to_string())
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: qasm::QasmError },
    #[error("cannot write to stdout: {0}")]
    Stdout(std::io::Error),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Stdout(e)),
        _ => Ok(()),
    }
}

fn detect(args: &DetectArgs) -> Result<(), CliError> {
    let source = read(&args.file)?;
    let circuit = qasm::parse_circuit(&source).map_err(|source| CliError::Parse {
        path: args.file.clone(),
        source,
    })?;
    let report = detect_all(&args.file.display().to_string(), &circuit, &args.detectors.config());
    match args.format {
        Format::Json => emit(&format!("{}\n", report.to_json())),
        Format::Text => emit(&report.to_text()),
    }
}

fn bench_cmd(args: &BenchArgs) -> Result<(), CliError> {
    let truth = bench::load_truth(&args.truth)?;
    let report = bench::evaluate(&args.corpus, &truth, &args.detectors.config());
    emit(&report.to_text())?;
    if let Some(out) = &args.out {
        write(out, &report.to_json())?;
    }
    Ok(())
}

fn scale(args: &ScaleArgs) -> Result<(), CliError> {
    let spec = ScalingSpec {
        mode: args.mode,
        fixed: args.fixed,
        sizes: args.sizes.clone(),
        repeats: args.repeats as usize,
        detectors: args.detectors.clone(),
        seed: args.seed,
    };
    let config = DetectorConfig {
        ce_mode: args.ce_mode,
        max_sim_qubits: args.max_sim_qubits,
        ..DetectorConfig::default()
    };
    let rows = bench::measure_scaling(&spec, &config);
    for row in &rows {
        if let Some(e) = &row.error {
            eprintln!("{} at size {}: {e}", row.detector, row.size);
        }
    }
    let file = fs::File::create(&args.out).map_err(|source| CliError::Write {
        path: args.out.clone(),
        source,
    })?;
    bench::write_scaling_csv(&rows, file)?;
    Ok(())
}

fn random(args: &RandomArgs) -> Result<(), CliError> {
    let circuit = bench::random_circuit(args.qubits as usize, args.depth as usize, args.seed);
    let text = to_qasm(&circuit);
    match &args.out {
        Some(path) => write(path, &text),
        None => emit(&text),
    }
}

/// Parses `args` (program name first) and runs the subcommand, returning the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Detect(a) => detect(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Scale(a) => scale(a),
        Command::Random(a) => random(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
