//! Command-line workflows wiring synthesis, preprocessing, peak detection
//! and metrics into reproducible file-based pipelines.
//!
//! Exit codes: 0 success, 2 usage error, 3 data/validation error,
//! 4 numerical failure.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pulsesynth::Error;

#[derive(Parser)]
#[command(
    name = "pulsesynth",
    version,
    about = "Synthesize paired ECG-PPG signals and quantify RR-distribution and waveform fidelity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an ECG-PPG pair from a rhythm template and an RR prescription
    Synth(SynthArgs),
    /// Bandpass-filter, resample, align and normalize a pair CSV
    Preprocess(PreprocessArgs),
    /// Detect peaks on one channel and derive its RR series
    Peaks(PeaksArgs),
    /// Compare recordings
    #[command(subcommand)]
    Metrics(MetricsCommand),
}

#[derive(Args)]
struct SynthArgs {
    /// Built-in rhythm preset: rsr, sa or afib
    #[arg(long, conflicts_with = "template", required_unless_present = "template")]
    rhythm: Option<String>,

    /// Rhythm template JSON file {name, a[], b[], theta[]}
    #[arg(long)]
    template: Option<PathBuf>,

    /// Output duration in seconds, beats drawn from a Gaussian RR prescription
    #[arg(
        long = "duration-s",
        requires = "rr_mean_ms",
        requires = "rr_std_ms",
        conflicts_with = "rr_file",
        required_unless_present = "rr_file"
    )]
    duration_s: Option<f64>,

    /// Mean of the Gaussian RR prescription in milliseconds
    #[arg(long = "rr-mean-ms", conflicts_with = "rr_file")]
    rr_mean_ms: Option<f64>,

    /// Standard deviation of the Gaussian RR prescription in milliseconds
    #[arg(long = "rr-std-ms", conflicts_with = "rr_file")]
    rr_std_ms: Option<f64>,

    /// RR prescription CSV (columns interval,unit)
    #[arg(long = "rr-file")]
    rr_file: Option<PathBuf>,

    /// Output sample rate in Hz
    #[arg(long, default_value_t = 125.0)]
    fs: f64,

    /// RNG seed; falls back to PULSESYNTH_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,

    /// Relative std of the template parameter noise (0.1 = 10%)
    #[arg(long = "noise-rel-std", default_value_t = 0.0)]
    noise_rel_std: f64,

    /// Integrator steps per output sample
    #[arg(long, default_value_t = 8)]
    oversample: u32,

    /// Output pair CSV; the run manifest lands next to it
    #[arg(long)]
    out: PathBuf,

    /// Also write the RR prescription actually consumed
    #[arg(long = "emit-rr")]
    emit_rr: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug)]
struct Band {
    low_hz: f64,
    high_hz: f64,
}

fn parse_band(s: &str) -> Result<Band, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let low_hz: f64 = lo.parse().map_err(|_| format!("bad low edge `{lo}`"))?;
    let high_hz: f64 = hi.parse().map_err(|_| format!("bad high edge `{hi}`"))?;
    if !(low_hz.is_finite() && high_hz.is_finite() && low_hz > 0.0 && low_hz < high_hz) {
        return Err(format!("band must satisfy 0 < lo < hi, got `{s}`"));
    }
    Ok(Band { low_hz, high_hz })
}

#[derive(Args)]
struct PreprocessArgs {
    /// Input pair CSV
    #[arg(long)]
    input: PathBuf,

    /// Output pair CSV
    #[arg(long)]
    out: PathBuf,

    /// ECG passband as lo:hi in Hz
    #[arg(long = "ecg-band", default_value = "0.4:45", value_parser = parse_band)]
    ecg_band: Band,

    /// PPG passband as lo:hi in Hz
    #[arg(long = "ppg-band", default_value = "0.3:8", value_parser = parse_band)]
    ppg_band: Band,

    /// Resample both channels to this rate after filtering
    #[arg(long = "resample-hz")]
    resample_hz: Option<f64>,

    /// Crop both channels to start at their first detected peak
    #[arg(long)]
    align: bool,

    /// Peak distance used by --align
    #[arg(long = "align-min-distance", default_value_t = 50)]
    align_min_distance: usize,

    /// Min-max normalize both channels to [-1, 1]
    #[arg(long)]
    normalize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Channel {
    Ecg,
    Ppg,
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Channel::Ecg => "ecg",
            Channel::Ppg => "ppg",
        })
    }
}

#[derive(Args)]
struct PeaksArgs {
    /// Input CSV: a single-channel waveform or a pair
    #[arg(long)]
    input: PathBuf,

    /// Channel to analyse when the input is a pair CSV
    #[arg(long, value_enum, default_value_t = Channel::Ecg)]
    channel: Channel,

    /// Minimum distance between surviving peaks, in samples
    #[arg(long = "min-distance", default_value_t = 50)]
    min_distance: usize,

    /// Minimum peak prominence (0 disables the filter)
    #[arg(long, default_value_t = 0.0)]
    prominence: f64,

    /// Output CSV of peak indices
    #[arg(long = "out-peaks")]
    out_peaks: PathBuf,

    /// Output CSV of RR intervals in samples
    #[arg(long = "out-rr")]
    out_rr: PathBuf,
}

#[derive(Subcommand)]
enum MetricsCommand {
    /// rHI, rRMSE, rEMD, KL, KS plus HRV and MAE_HR from two RR CSVs
    Rr(MetricsRrArgs),
    /// Waveform RMSE between two equally long recordings
    Waveform(MetricsWaveformArgs),
    /// Fréchet distance between segment-feature distributions
    Fd(MetricsFdArgs),
}

#[derive(Args)]
struct MetricsRrArgs {
    /// Reference RR CSV
    truth: PathBuf,

    /// Reconstructed RR CSV
    recon: PathBuf,

    /// Report JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write both unit histograms over the union support
    #[arg(long = "emit-hist")]
    emit_hist: Option<PathBuf>,

    /// Also write the per-cycle RR deviation report
    #[arg(long = "emit-rr-report")]
    emit_rr_report: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsWaveformArgs {
    /// Reference recording (waveform or pair CSV)
    truth: PathBuf,

    /// Reconstructed recording (waveform or pair CSV)
    recon: PathBuf,

    /// Channel to compare when an input is a pair CSV
    #[arg(long, value_enum, default_value_t = Channel::Ecg)]
    channel: Channel,

    /// Report JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsFdArgs {
    /// Reference recording (waveform or pair CSV)
    real: PathBuf,

    /// Generated recording (waveform or pair CSV)
    generated: PathBuf,

    /// Channel to compare when an input is a pair CSV
    #[arg(long, value_enum, default_value_t = Channel::Ecg)]
    channel: Channel,

    /// Segment window length in samples
    #[arg(long, default_value_t = 512)]
    window: usize,

    /// Segment overlap fraction in [0, 1)
    #[arg(long, default_value_t = 0.5)]
    overlap: f64,

    /// Report JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => commands::synth(args),
        Command::Preprocess(args) => commands::preprocess(args),
        Command::Peaks(args) => commands::peaks(args),
        Command::Metrics(MetricsCommand::Rr(args)) => commands::metrics_rr(args),
        Command::Metrics(MetricsCommand::Waveform(args)) => commands::metrics_waveform(args),
        Command::Metrics(MetricsCommand::Fd(args)) => commands::metrics_fd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidBand { .. }
        | Error::InvalidParameter { .. }
        | Error::UnitMismatch { .. }
        | Error::UnknownRhythm(_) => 2,
        Error::IntegrationDiverged { .. } | Error::DegenerateRange => 4,
        _ => 3,
    }
}
