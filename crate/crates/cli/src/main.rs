//! `dqc1`: build phase masks, ingest beam scans, estimate traces and run
//! Deutsch-Jozsa oracles on the simulated modulator.
//!
//! Exit codes: 0 success, 1 I/O or unreadable input, 2 usage, 3 dimension or tiling
//! mismatch, 4 domain validation failure.

mod angle;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slm_dqc1::{PanelDims, SamplingMode, DEFAULT_DEPHASING};

use crate::angle::parse_angle;
use crate::commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "dqc1", version, about = "DQC1 trace estimation on a simulated phase-only SLM")]
struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true, env = "DQC1_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a PMASK1 phase mask.
    MakeMask(MakeMaskArgs),
    /// Analytic, Monte Carlo and exact flat-beam trace of a mask; writes a JSON report.
    Trace(TraceArgs),
    /// Classify a {0, π} oracle mask as constant or balanced.
    Dj(DjArgs),
    /// Misclassification sweep over random balanced oracles; writes CSV.
    Sweep(SweepArgs),
    /// Convert a CGRID1 count grid into an IPROF1 intensity profile.
    IngestBeam(IngestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaskKind {
    Constant,
    HalfSplit,
    RandomBalanced,
    LinearRamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Binomial,
    PerPhoton,
}

impl From<Mode> for SamplingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Binomial => SamplingMode::Binomial,
            Mode::PerPhoton => SamplingMode::PerPhoton,
        }
    }
}

/// Mask generator parameters shared by `make-mask` and `dj`. Angles take radians or
/// `<k>pi[/<d>]`.
#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value = "1920x1080")]
    pub dims: PanelDims,
    /// Phase of a constant mask.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, required_if_eq("kind", "constant"))]
    pub phase: Option<f64>,
    /// Phase of the top half of a half-split mask.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub phase_upper: f64,
    /// Phase of the bottom half of a half-split mask.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "pi")]
    pub phase_lower: f64,
    /// Edge of the square cells of a random balanced mask, in pixels.
    #[arg(long, required_if_eq("kind", "random-balanced"))]
    pub cells: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, required_if_eq("kind", "linear-ramp"))]
    pub phi_start: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, required_if_eq("kind", "linear-ramp"))]
    pub phi_end: Option<f64>,
    /// Ramp increments by `(end − start) / N_y` per row instead of spanning [start, end).
    #[arg(long)]
    pub literal: bool,
    /// Quantize the phases to this many levels.
    #[arg(long)]
    pub levels: Option<u32>,
}

#[derive(Debug, Args)]
struct MakeMaskArgs {
    #[arg(value_enum)]
    kind: MaskKind,
    #[command(flatten)]
    gen: GenArgs,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub mask: PathBuf,
    /// IPROF1 intensity profile (flat beam when neither this nor --counts is given).
    #[arg(long, conflicts_with = "counts")]
    pub profile: Option<PathBuf>,
    /// CGRID1 count grid; also enables the Poisson systematic term.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Dephasing parameter.
    #[arg(long, default_value_t = DEFAULT_DEPHASING)]
    pub p: f64,
    /// Photons per basis for the Monte Carlo estimate (analytic only when omitted).
    #[arg(long)]
    pub photons: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "binomial")]
    pub mode: Mode,
    /// Phase levels for the quantization error (defaults to the mask's, else 256).
    #[arg(long)]
    pub levels: Option<u32>,
    /// Report path, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct DjArgs {
    #[arg(long, conflicts_with = "kind", required_unless_present = "kind")]
    pub mask: Option<PathBuf>,
    /// Generate the oracle instead of loading it; --seed seeds both mask and photons.
    #[arg(long, value_enum)]
    pub kind: Option<MaskKind>,
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEPHASING)]
    pub p: f64,
    /// Photons for the σx measurement (noiseless analytic statistic when omitted).
    #[arg(long)]
    pub photons: Option<u64>,
    /// Decision threshold (defaults to (1 − 2p) / 2).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "binomial")]
    pub mode: Mode,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Cell edges in pixels, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,5,10")]
    pub cells: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Panel size (taken from --profile when given).
    #[arg(long)]
    pub dims: Option<PanelDims>,
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEPHASING)]
    pub p: f64,
    /// Photons per oracle (noiseless analytic statistic when omitted).
    #[arg(long)]
    pub photons: Option<u64>,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "binomial")]
    pub mode: Mode,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub counts: PathBuf,
    #[arg(long, default_value = "1920x1080")]
    pub dims: PanelDims,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    match cli.command {
        Command::MakeMask(a) => commands::make_mask(a.kind, &a.gen, &a.out),
        Command::Trace(a) => commands::trace(&a, argv),
        Command::Dj(a) => commands::dj(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::IngestBeam(a) => commands::ingest_beam(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            if matches!(f, Failure::Usage(_)) {
                eprintln!("\nFor more information, try '--help'.");
            }
            ExitCode::from(f.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
