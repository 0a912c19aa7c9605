//! Text file formats: waveform and pair CSVs (with a `# fs_hz=` comment
//! carrying the sample rate), peak-index and RR-interval CSVs, rhythm
//! template JSON and histogram/report CSVs.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! write-then-read reproduces every sample exactly. Files are written to a
//! temporary sibling and renamed into place.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::metrics::UnitHistogram;
use crate::peaks::{PeakList, RrReport, RrSeries, RrUnit};
use crate::signal::{EcgPpgPair, Waveform};
use crate::ode::RhythmTemplate;

/// Write a text file through a temporary sibling plus rename, so concurrent
/// invocations on distinct outputs never interleave partial contents.
pub fn write_text_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp_path = std::path::PathBuf::from(tmp);
    {
        let mut file = fs::File::create(&tmp_path)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp_path, path)?;
    if let Some(dir) = dir {
        // Directory entry durability is best-effort.
        let _ = fs::File::open(dir).and_then(|d| d.sync_all());
    }
    Ok(())
}

struct CommentedCsv {
    comments: Vec<String>,
    header: String,
    rows: Vec<(usize, String)>,
}

fn read_commented_csv(path: &Path) -> Result<CommentedCsv> {
    let file = fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut comments = Vec::new();
    let mut header = None;
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            comments.push(trimmed.trim_start_matches('#').trim().to_string());
        } else if header.is_none() {
            header = Some(trimmed.to_string());
        } else {
            rows.push((idx + 1, trimmed.to_string()));
        }
    }
    let header = header.ok_or_else(|| Error::Format {
        path: path.display().to_string(),
        line: 0,
        reason: "missing header line".into(),
    })?;
    Ok(CommentedCsv {
        comments,
        header,
        rows,
    })
}

fn format_error(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

fn comment_value(comments: &[String], key: &str) -> Option<String> {
    comments.iter().find_map(|c| {
        c.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .map(|v| v.trim().to_string())
    })
}

fn parse_fs(csv: &CommentedCsv, path: &Path) -> Result<f64> {
    let raw = comment_value(&csv.comments, "fs_hz")
        .ok_or_else(|| format_error(path, 0, "missing `# fs_hz=` comment"))?;
    raw.parse::<f64>()
        .map_err(|_| format_error(path, 0, format!("bad fs_hz value `{raw}`")))
}

pub fn write_waveform_csv(path: &Path, w: &Waveform) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# fs_hz={}\n", w.sample_rate_hz()));
    out.push_str("index,value\n");
    for (i, v) in w.samples().iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    write_text_atomic(path, &out)
}

pub fn read_waveform_csv(path: &Path) -> Result<Waveform> {
    let csv = read_commented_csv(path)?;
    if csv.header != "index,value" {
        return Err(format_error(
            path,
            0,
            format!("expected header `index,value`, got `{}`", csv.header),
        ));
    }
    let fs = parse_fs(&csv, path)?;
    let mut samples = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        let value = row
            .split(',')
            .nth(1)
            .ok_or_else(|| format_error(path, *line, "expected two columns"))?;
        samples.push(
            value
                .parse::<f64>()
                .map_err(|_| format_error(path, *line, format!("bad value `{value}`")))?,
        );
    }
    Waveform::new(samples, fs)
}

pub fn write_pair_csv(path: &Path, pair: &EcgPpgPair) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# fs_hz={}\n", pair.sample_rate_hz()));
    out.push_str("index,ecg,ppg\n");
    for (i, (e, p)) in pair
        .ecg
        .samples()
        .iter()
        .zip(pair.ppg.samples())
        .enumerate()
    {
        out.push_str(&format!("{i},{e},{p}\n"));
    }
    write_text_atomic(path, &out)
}

pub fn read_pair_csv(path: &Path) -> Result<EcgPpgPair> {
    let csv = read_commented_csv(path)?;
    if csv.header != "index,ecg,ppg" {
        return Err(format_error(
            path,
            0,
            format!("expected header `index,ecg,ppg`, got `{}`", csv.header),
        ));
    }
    let fs = parse_fs(&csv, path)?;
    let mut ecg = Vec::with_capacity(csv.rows.len());
    let mut ppg = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        let mut cols = row.split(',');
        let _ = cols.next();
        let e = cols
            .next()
            .ok_or_else(|| format_error(path, *line, "expected three columns"))?;
        let p = cols
            .next()
            .ok_or_else(|| format_error(path, *line, "expected three columns"))?;
        ecg.push(
            e.parse::<f64>()
                .map_err(|_| format_error(path, *line, format!("bad ecg value `{e}`")))?,
        );
        ppg.push(
            p.parse::<f64>()
                .map_err(|_| format_error(path, *line, format!("bad ppg value `{p}`")))?,
        );
    }
    EcgPpgPair::new(Waveform::new(ecg, fs)?, Waveform::new(ppg, fs)?)
}

pub fn write_peaks_csv(path: &Path, peaks: &PeakList) -> Result<()> {
    let mut out = String::from("index\n");
    for i in peaks.indices() {
        out.push_str(&format!("{i}\n"));
    }
    write_text_atomic(path, &out)
}

pub fn read_peaks_csv(path: &Path) -> Result<PeakList> {
    let csv = read_commented_csv(path)?;
    if csv.header != "index" {
        return Err(format_error(
            path,
            0,
            format!("expected header `index`, got `{}`", csv.header),
        ));
    }
    let mut indices = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        indices.push(
            row.parse::<usize>()
                .map_err(|_| format_error(path, *line, format!("bad index `{row}`")))?,
        );
    }
    PeakList::new(indices)
}

pub fn write_rr_csv(path: &Path, rr: &RrSeries) -> Result<()> {
    let mut out = String::new();
    if rr.unit() == RrUnit::Samples {
        let fs = rr.sample_rate_hz().ok_or(Error::MissingSampleRate)?;
        out.push_str(&format!("# fs_hz={fs}\n"));
    }
    out.push_str("interval,unit\n");
    for v in rr.intervals() {
        out.push_str(&format!("{v},{}\n", rr.unit()));
    }
    write_text_atomic(path, &out)
}

pub fn read_rr_csv(path: &Path) -> Result<RrSeries> {
    let csv = read_commented_csv(path)?;
    if csv.header != "interval,unit" {
        return Err(format_error(
            path,
            0,
            format!("expected header `interval,unit`, got `{}`", csv.header),
        ));
    }
    let mut intervals = Vec::with_capacity(csv.rows.len());
    let mut unit: Option<RrUnit> = None;
    for (line, row) in &csv.rows {
        let mut cols = row.split(',');
        let v = cols
            .next()
            .ok_or_else(|| format_error(path, *line, "expected two columns"))?;
        let u = cols
            .next()
            .ok_or_else(|| format_error(path, *line, "expected two columns"))?;
        let parsed_unit: RrUnit = u
            .parse()
            .map_err(|_| format_error(path, *line, format!("bad unit `{u}`")))?;
        match unit {
            None => unit = Some(parsed_unit),
            Some(prev) if prev != parsed_unit => {
                return Err(format_error(path, *line, "unit changes mid-file"));
            }
            _ => {}
        }
        intervals.push(
            v.parse::<f64>()
                .map_err(|_| format_error(path, *line, format!("bad interval `{v}`")))?,
        );
    }
    let unit = unit.ok_or_else(|| format_error(path, 0, "file has no rows"))?;
    let fs = match unit {
        RrUnit::Samples => Some(parse_fs(&csv, path)?),
        RrUnit::Milliseconds => comment_value(&csv.comments, "fs_hz")
            .and_then(|v| v.parse::<f64>().ok()),
    };
    RrSeries::new(intervals, unit, fs)
}

#[derive(Deserialize)]
struct RawTemplate {
    name: String,
    a: Vec<f64>,
    b: Vec<f64>,
    theta: Vec<f64>,
}

pub fn write_template_json(path: &Path, template: &RhythmTemplate) -> Result<()> {
    let value = serde_json::json!({
        "name": template.name(),
        "a": template.amplitudes(),
        "b": template.widths(),
        "theta": template.angles(),
    });
    write_text_atomic(path, &format!("{}\n", serde_json::to_string_pretty(&value)?))
}

pub fn read_template_json(path: &Path) -> Result<RhythmTemplate> {
    let raw: RawTemplate = serde_json::from_str(&fs::read_to_string(path)?)?;
    RhythmTemplate::new(raw.name, raw.a, raw.b, raw.theta)
}

/// Side-by-side counts of two unit histograms over their union support.
pub fn write_histogram_pair_csv(
    path: &Path,
    truth: &UnitHistogram,
    recon: &UnitHistogram,
) -> Result<()> {
    let lo = truth.origin().min(recon.origin());
    let hi = truth.last_bin().max(recon.last_bin());
    let mut out = String::from("bin,count_truth,count_recon\n");
    for bin in lo..=hi {
        out.push_str(&format!(
            "{bin},{},{}\n",
            truth.count_at(bin),
            recon.count_at(bin)
        ));
    }
    write_text_atomic(path, &out)
}

/// Per-cycle RR deviations with the summary carried in leading comments.
pub fn write_rr_report_csv(path: &Path, report: &RrReport) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# mean_deviation={}\n", report.mean_deviation));
    out.push_str(&format!("# max_abs_deviation={}\n", report.max_abs_deviation));
    out.push_str("index,truth,recon,deviation\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.index, row.truth, row.recon, row.deviation
        ));
    }
    write_text_atomic(path, &out)
}
