//! Implementations of the four subcommands.

use std::fs;
use std::path::Path;

use pulsesynth::error::{Error, Result};
use pulsesynth::io;
use pulsesynth::metrics::{self, MetricReport};
use pulsesynth::ode::{self, Rhythm, SynthesisConfig};
use pulsesynth::peaks::{find_peaks, rr_from_peaks, rr_report, RrSeries, RrUnit};
use pulsesynth::signal::{self, EcgPpgPair, Waveform};

use crate::manifest::RunManifest;
use crate::{
    Channel, MetricsFdArgs, MetricsRrArgs, MetricsWaveformArgs, PeaksArgs, PreprocessArgs,
    SynthArgs,
};

fn effective_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("PULSESYNTH_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

/// Read a waveform from either a single-channel or a pair CSV, picking
/// `channel` in the pair case.
fn load_channel(path: &Path, channel: Channel) -> Result<Waveform> {
    let header = sniff_header(path)?;
    match header.as_str() {
        "index,value" => io::read_waveform_csv(path),
        "index,ecg,ppg" => {
            let pair = io::read_pair_csv(path)?;
            Ok(match channel {
                Channel::Ecg => pair.ecg,
                Channel::Ppg => pair.ppg,
            })
        }
        other => Err(Error::Format {
            path: path.display().to_string(),
            line: 0,
            reason: format!("unrecognized header `{other}`"),
        }),
    }
}

fn sniff_header(path: &Path) -> Result<String> {
    let contents = fs::read_to_string(path)?;
    contents
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .ok_or_else(|| Error::Format {
            path: path.display().to_string(),
            line: 0,
            reason: "missing header line".into(),
        })
}

fn emit_report(report: &MetricReport, out: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(report).map_err(Error::from)?;
    match out {
        Some(path) => io::write_text_atomic(path, &format!("{json}\n")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

pub fn synth(args: SynthArgs) -> Result<()> {
    let seed = effective_seed(args.seed);
    let template = match (&args.rhythm, &args.template) {
        (Some(name), None) => ode::preset(name.parse::<Rhythm>()?),
        (None, Some(path)) => io::read_template_json(path)?,
        _ => unreachable!("clap enforces exactly one rhythm source"),
    };

    let rr_targets = match (&args.rr_file, args.duration_s) {
        (Some(path), None) => {
            let rr = io::read_rr_csv(path)?;
            resample_prescription(&rr, args.fs)?
        }
        (None, Some(duration_s)) => ode::prescribe_gaussian_rr(
            args.rr_mean_ms.expect("clap requires rr-mean-ms"),
            args.rr_std_ms.expect("clap requires rr-std-ms"),
            args.fs,
            duration_s,
            seed,
        )?,
        _ => unreachable!("clap enforces exactly one RR source"),
    };

    let cfg = SynthesisConfig {
        template,
        constants: ode::ModelConstants::default(),
        rr_targets: rr_targets.clone(),
        sample_rate_hz: args.fs,
        oversample: args.oversample,
        noise_rel_std: args.noise_rel_std,
        seed,
    };
    let mut pair = ode::synthesize(&cfg)?;
    if let Some(duration_s) = args.duration_s {
        let wanted = (duration_s * args.fs).round() as usize;
        if wanted < pair.len() {
            pair = pair.truncated(wanted)?;
        }
    }

    io::write_pair_csv(&args.out, &pair)?;
    if let Some(path) = &args.emit_rr {
        io::write_rr_csv(path, &rr_targets)?;
    }

    RunManifest::new("synth", seed)
        .param_opt("rhythm", args.rhythm.as_ref())
        .param_opt("template", args.template.as_ref().map(|p| p.display()))
        .param_opt("duration_s", args.duration_s)
        .param_opt("rr_mean_ms", args.rr_mean_ms)
        .param_opt("rr_std_ms", args.rr_std_ms)
        .param_opt("rr_file", args.rr_file.as_ref().map(|p| p.display()))
        .param("fs", args.fs)
        .param("noise_rel_std", args.noise_rel_std)
        .param("oversample", args.oversample)
        .param("out", args.out.display())
        .param_opt("emit_rr", args.emit_rr.as_ref().map(|p| p.display()))
        .write_next_to(&args.out)
}

/// Express an RR prescription in samples at the synthesis rate, whatever
/// unit and rate it was recorded at.
fn resample_prescription(rr: &RrSeries, fs: f64) -> Result<RrSeries> {
    if rr.unit() == RrUnit::Samples && rr.sample_rate_hz() == Some(fs) {
        return Ok(rr.clone());
    }
    rr.to_milliseconds()?.to_samples(fs)
}

pub fn preprocess(args: PreprocessArgs) -> Result<()> {
    let pair = io::read_pair_csv(&args.input)?;
    let mut ecg = signal::bandpass(&pair.ecg, args.ecg_band.low_hz, args.ecg_band.high_hz)?;
    let mut ppg = signal::bandpass(&pair.ppg, args.ppg_band.low_hz, args.ppg_band.high_hz)?;
    if let Some(target) = args.resample_hz {
        ecg = signal::resample(&ecg, target)?;
        ppg = signal::resample(&ppg, target)?;
    }
    let mut pair = EcgPpgPair::new(ecg, ppg)?;
    if args.align {
        pair = signal::align_first_peaks(&pair, args.align_min_distance)?;
    }
    if args.normalize {
        pair = EcgPpgPair::new(
            signal::minmax_normalize(&pair.ecg)?,
            signal::minmax_normalize(&pair.ppg)?,
        )?;
    }
    io::write_pair_csv(&args.out, &pair)?;

    RunManifest::new("preprocess", 0)
        .param("input", args.input.display())
        .param("ecg_band", format!("{}:{}", args.ecg_band.low_hz, args.ecg_band.high_hz))
        .param("ppg_band", format!("{}:{}", args.ppg_band.low_hz, args.ppg_band.high_hz))
        .param_opt("resample_hz", args.resample_hz)
        .param("align", args.align)
        .param("align_min_distance", args.align_min_distance)
        .param("normalize", args.normalize)
        .param("out", args.out.display())
        .write_next_to(&args.out)
}

pub fn peaks(args: PeaksArgs) -> Result<()> {
    let w = load_channel(&args.input, args.channel)?;
    let peaks = find_peaks(&w, args.min_distance, args.prominence)?;
    let rr = rr_from_peaks(&peaks, w.sample_rate_hz())?;
    io::write_peaks_csv(&args.out_peaks, &peaks)?;
    io::write_rr_csv(&args.out_rr, &rr)?;

    RunManifest::new("peaks", 0)
        .param("input", args.input.display())
        .param("channel", args.channel)
        .param("min_distance", args.min_distance)
        .param("prominence", args.prominence)
        .param("out_peaks", args.out_peaks.display())
        .param("out_rr", args.out_rr.display())
        .write_next_to(&args.out_rr)
}

pub fn metrics_rr(args: MetricsRrArgs) -> Result<()> {
    let truth = io::read_rr_csv(&args.truth)?;
    let recon = io::read_rr_csv(&args.recon)?;
    if truth.unit() != recon.unit() {
        return Err(Error::UnitMismatch {
            left: truth.unit().as_str(),
            right: recon.unit().as_str(),
        });
    }
    // Chronological pairing truncated to the common length, applied to the
    // histograms as well so boundary beats cannot skew the distributions.
    let n = truth.len().min(recon.len());
    let truth_t = truth.truncated(n)?;
    let recon_t = recon.truncated(n)?;
    let hist_truth = metrics::unit_histogram(&truth_t);
    let hist_recon = metrics::unit_histogram(&recon_t);

    let (hrv_mean, hrv_std) = metrics::hrv(&recon_t)?;
    let mut report = MetricReport {
        rhi: Some(metrics::rhi(&hist_truth, &hist_recon)),
        rrmse: Some(metrics::rrmse_rr(&truth_t, &recon_t)?),
        remd: Some(metrics::remd(&hist_truth, &hist_recon)),
        kl: Some(metrics::kl(&hist_truth, &hist_recon)),
        ks: Some(metrics::ks(&truth_t, &recon_t)?),
        mae_hr: Some(metrics::mae_hr(&truth_t, &recon_t)?),
        hrv_mean: Some(hrv_mean),
        hrv_std: Some(hrv_std),
        ..MetricReport::default()
    };
    report.inputs.insert("truth".into(), args.truth.display().to_string());
    report.inputs.insert("recon".into(), args.recon.display().to_string());
    report.inputs.insert("unit".into(), truth.unit().to_string());
    report.inputs.insert("paired_length".into(), n.to_string());
    report.inputs.insert("hrv_series".into(), "recon".into());

    if let Some(path) = &args.emit_hist {
        io::write_histogram_pair_csv(path, &hist_truth, &hist_recon)?;
    }
    if let Some(path) = &args.emit_rr_report {
        io::write_rr_report_csv(path, &rr_report(&truth_t, &recon_t)?)?;
    }
    emit_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        RunManifest::new("metrics rr", 0)
            .param("truth", args.truth.display())
            .param("recon", args.recon.display())
            .param("out", out.display())
            .param_opt("emit_hist", args.emit_hist.as_ref().map(|p| p.display()))
            .param_opt(
                "emit_rr_report",
                args.emit_rr_report.as_ref().map(|p| p.display()),
            )
            .write_next_to(out)?;
    }
    Ok(())
}

pub fn metrics_waveform(args: MetricsWaveformArgs) -> Result<()> {
    let truth = load_channel(&args.truth, args.channel)?;
    let recon = load_channel(&args.recon, args.channel)?;
    let mut report = MetricReport {
        waveform_rmse: Some(metrics::waveform_rmse(&truth, &recon)?),
        ..MetricReport::default()
    };
    report.inputs.insert("truth".into(), args.truth.display().to_string());
    report.inputs.insert("recon".into(), args.recon.display().to_string());
    report.inputs.insert("channel".into(), args.channel.to_string());

    emit_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        RunManifest::new("metrics waveform", 0)
            .param("truth", args.truth.display())
            .param("recon", args.recon.display())
            .param("channel", args.channel)
            .param("out", out.display())
            .write_next_to(out)?;
    }
    Ok(())
}

pub fn metrics_fd(args: MetricsFdArgs) -> Result<()> {
    let real = load_channel(&args.real, args.channel)?;
    let generated = load_channel(&args.generated, args.channel)?;
    let real_features = metrics::segment_features(&real, args.window, args.overlap)?;
    let generated_features = metrics::segment_features(&generated, args.window, args.overlap)?;
    let mut report = MetricReport {
        fd: Some(metrics::frechet_distance(&real_features, &generated_features)?),
        ..MetricReport::default()
    };
    report.inputs.insert("real".into(), args.real.display().to_string());
    report
        .inputs
        .insert("generated".into(), args.generated.display().to_string());
    report.inputs.insert("channel".into(), args.channel.to_string());
    report.inputs.insert("window".into(), args.window.to_string());
    report.inputs.insert("overlap".into(), args.overlap.to_string());

    emit_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        RunManifest::new("metrics fd", 0)
            .param("real", args.real.display())
            .param("generated", args.generated.display())
            .param("channel", args.channel)
            .param("window", args.window)
            .param("overlap", args.overlap)
            .param("out", out.display())
            .write_next_to(out)?;
    }
    Ok(())
}
