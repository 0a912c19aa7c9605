//! Distance-constrained local-maximum peak detection and RR-interval
//! extraction.
//!
//! The detector finds strict local maxima (plateaus resolve to their
//! midpoint), filters them by prominence, then thins survivors
//! highest-amplitude-first until all remaining peaks honour the minimum
//! distance. With prominence 0 it is a pure distance filter.

use crate::error::{Error, Result};
use crate::signal::Waveform;

/// Strictly increasing sample indices of detected peaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakList {
    indices: Vec<usize>,
}

impl PeakList {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "indices",
                reason: "peak indices must be strictly increasing".into(),
            });
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Find local maxima at least `min_distance` samples apart with prominence
/// at least `min_prominence`.
pub fn find_peaks(w: &Waveform, min_distance: usize, min_prominence: f64) -> Result<PeakList> {
    if min_distance < 1 {
        return Err(Error::InvalidParameter {
            name: "min_distance",
            reason: "must be at least 1".into(),
        });
    }
    let x = w.samples();
    let mut candidates = local_maxima(x);
    if min_prominence > 0.0 {
        candidates.retain(|&p| prominence(x, p) >= min_prominence);
    }

    // Thin by descending amplitude; ties keep the earlier index.
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        x[candidates[j]]
            .partial_cmp(&x[candidates[i]])
            .unwrap()
            .then(candidates[i].cmp(&candidates[j]))
    });
    let mut keep = vec![true; candidates.len()];
    for &i in &order {
        if !keep[i] {
            continue;
        }
        let mut k = i;
        while k > 0 && candidates[i] - candidates[k - 1] < min_distance {
            k -= 1;
            keep[k] = false;
        }
        let mut k = i + 1;
        while k < candidates.len() && candidates[k] - candidates[i] < min_distance {
            keep[k] = false;
            k += 1;
        }
    }

    let indices = candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    PeakList::new(indices)
}

/// Strict local maxima; a flat run higher than both sides resolves to its
/// midpoint (ties toward the earlier sample). Boundary samples never
/// qualify.
fn local_maxima(x: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    if x.len() < 3 {
        return peaks;
    }
    let last = x.len() - 1;
    let mut i = 1;
    while i < last {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead < last && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                peaks.push((i + ahead - 1) / 2);
                i = ahead;
            }
        }
        i += 1;
    }
    peaks
}

/// Height above the higher of the two valley floors reached before a
/// larger sample (or the signal edge) on each side.
fn prominence(x: &[f64], peak: usize) -> f64 {
    let h = x[peak];
    let mut left_min = h;
    let mut i = peak;
    while i > 0 {
        i -= 1;
        if x[i] > h {
            break;
        }
        left_min = left_min.min(x[i]);
    }
    let mut right_min = h;
    let mut i = peak;
    while i + 1 < x.len() {
        i += 1;
        if x[i] > h {
            break;
        }
        right_min = right_min.min(x[i]);
    }
    h - left_min.max(right_min)
}

/// Unit of measure for RR intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrUnit {
    Samples,
    Milliseconds,
}

impl RrUnit {
    pub fn as_str(&self) -> &'static str {
        match self {
            RrUnit::Samples => "samples",
            RrUnit::Milliseconds => "milliseconds",
        }
    }
}

impl std::fmt::Display for RrUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RrUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "samples" => Ok(RrUnit::Samples),
            "milliseconds" | "ms" => Ok(RrUnit::Milliseconds),
            other => Err(Error::InvalidParameter {
                name: "unit",
                reason: format!("unknown RR unit `{other}`"),
            }),
        }
    }
}

/// Ordered beat-to-beat intervals. Sample-unit series carry the rate they
/// were measured at so conversions round-trip.
#[derive(Debug, Clone, PartialEq)]
pub struct RrSeries {
    intervals: Vec<f64>,
    unit: RrUnit,
    sample_rate_hz: Option<f64>,
}

impl RrSeries {
    pub fn new(intervals: Vec<f64>, unit: RrUnit, sample_rate_hz: Option<f64>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidParameter {
                name: "intervals",
                reason: "series is empty".into(),
            });
        }
        if let Some(&bad) = intervals.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositiveInterval(bad));
        }
        if unit == RrUnit::Samples {
            match sample_rate_hz {
                Some(fs) if fs.is_finite() && fs > 0.0 => {}
                _ => return Err(Error::MissingSampleRate),
            }
        }
        Ok(Self {
            intervals,
            unit,
            sample_rate_hz,
        })
    }

    pub fn intervals(&self) -> &[f64] {
        &self.intervals
    }

    pub fn unit(&self) -> RrUnit {
        self.unit
    }

    pub fn sample_rate_hz(&self) -> Option<f64> {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.intervals.iter().sum::<f64>() / self.intervals.len() as f64
    }

    pub fn to_milliseconds(&self) -> Result<RrSeries> {
        match self.unit {
            RrUnit::Milliseconds => Ok(self.clone()),
            RrUnit::Samples => {
                let fs = self.sample_rate_hz.ok_or(Error::MissingSampleRate)?;
                let ms = self.intervals.iter().map(|v| v * 1000.0 / fs).collect();
                RrSeries::new(ms, RrUnit::Milliseconds, Some(fs))
            }
        }
    }

    pub fn to_samples(&self, sample_rate_hz: f64) -> Result<RrSeries> {
        match self.unit {
            RrUnit::Samples => Ok(self.clone()),
            RrUnit::Milliseconds => {
                let samples = self
                    .intervals
                    .iter()
                    .map(|v| v * sample_rate_hz / 1000.0)
                    .collect();
                RrSeries::new(samples, RrUnit::Samples, Some(sample_rate_hz))
            }
        }
    }

    /// Per-interval values in seconds.
    pub fn seconds(&self) -> Result<Vec<f64>> {
        match self.unit {
            RrUnit::Milliseconds => Ok(self.intervals.iter().map(|v| v / 1000.0).collect()),
            RrUnit::Samples => {
                let fs = self.sample_rate_hz.ok_or(Error::MissingSampleRate)?;
                Ok(self.intervals.iter().map(|v| v / fs).collect())
            }
        }
    }

    pub fn truncated(&self, n: usize) -> Result<RrSeries> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("cannot truncate {} intervals to {n}", self.len()),
            });
        }
        RrSeries::new(self.intervals[..n].to_vec(), self.unit, self.sample_rate_hz)
    }
}

/// Differences between consecutive peak indices, in samples.
pub fn rr_from_peaks(peaks: &PeakList, sample_rate_hz: f64) -> Result<RrSeries> {
    if peaks.len() < 2 {
        return Err(Error::InsufficientPeaks {
            required: 2,
            found: peaks.len(),
        });
    }
    let intervals = peaks
        .indices()
        .windows(2)
        .map(|w| (w[1] - w[0]) as f64)
        .collect();
    RrSeries::new(intervals, RrUnit::Samples, Some(sample_rate_hz))
}

/// One row of a per-cycle RR comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct RrDeviation {
    pub index: usize,
    pub truth: f64,
    pub recon: f64,
    /// recon - truth, in the series' unit.
    pub deviation: f64,
}

/// Chronological per-beat comparison of two RR series.
#[derive(Debug, Clone, PartialEq)]
pub struct RrReport {
    pub rows: Vec<RrDeviation>,
    pub mean_deviation: f64,
    pub max_abs_deviation: f64,
}

/// Pair the two series chronologically up to the shorter length and report
/// the signed deviation of each reconstructed interval.
pub fn rr_report(truth: &RrSeries, recon: &RrSeries) -> Result<RrReport> {
    if truth.unit() != recon.unit() {
        return Err(Error::UnitMismatch {
            left: truth.unit().as_str(),
            right: recon.unit().as_str(),
        });
    }
    let rows: Vec<RrDeviation> = truth
        .intervals()
        .iter()
        .zip(recon.intervals())
        .enumerate()
        .map(|(index, (&t, &r))| RrDeviation {
            index,
            truth: t,
            recon: r,
            deviation: r - t,
        })
        .collect();
    let mean_deviation = rows.iter().map(|r| r.deviation).sum::<f64>() / rows.len() as f64;
    let max_abs_deviation = rows
        .iter()
        .map(|r| r.deviation.abs())
        .fold(0.0f64, f64::max);
    Ok(RrReport {
        rows,
        mean_deviation,
        max_abs_deviation,
    })
}
