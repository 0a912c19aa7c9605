//! Signal containers and the preprocessing pipeline: zero-phase bandpass
//! filtering, anti-aliased resampling, min-max normalization, first-peak
//! alignment of ECG-PPG pairs, fixed-window segmentation and the
//! log-magnitude STFT.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! once constructed and safe to share across threads.

mod filter;
mod resample;
mod stft;

pub use filter::bandpass;
pub use resample::resample;
pub use stft::{stft_spectrogram, Spectrogram};

pub(crate) use stft::dft_magnitudes;

use crate::error::{Error, Result};
use crate::peaks::find_peaks;

/// Uniformly sampled real-valued signal with an explicit sample rate.
///
/// Invariants enforced at construction: at least one sample, a positive
/// finite sample rate, and no NaN/Inf values.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidWaveform("no samples".into()));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidWaveform(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidWaveform(format!(
                "non-finite sample at index {i}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// First `n` samples as a new waveform.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("cannot truncate {} samples to {n}", self.len()),
            });
        }
        Self::new(self.samples[..n].to_vec(), self.sample_rate_hz)
    }
}

/// Synchronized ECG and PPG waveforms sharing a sample rate and time base.
#[derive(Debug, Clone, PartialEq)]
pub struct EcgPpgPair {
    pub ecg: Waveform,
    pub ppg: Waveform,
}

impl EcgPpgPair {
    pub fn new(ecg: Waveform, ppg: Waveform) -> Result<Self> {
        if ecg.sample_rate_hz() != ppg.sample_rate_hz() {
            return Err(Error::InvalidWaveform(format!(
                "channel sample rates differ: {} vs {}",
                ecg.sample_rate_hz(),
                ppg.sample_rate_hz()
            )));
        }
        if ecg.len() != ppg.len() {
            return Err(Error::LengthMismatch {
                left: ecg.len(),
                right: ppg.len(),
            });
        }
        Ok(Self { ecg, ppg })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.ecg.sample_rate_hz()
    }

    pub fn len(&self) -> usize {
        self.ecg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ecg.is_empty()
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        Self::new(self.ecg.truncated(n)?, self.ppg.truncated(n)?)
    }
}

/// Fixed-length window cut from a waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start_index: usize,
    pub values: Vec<f64>,
}

/// Affine map of the samples onto [-1, 1] with both endpoints attained.
///
/// A constant signal has no usable range and is rejected rather than
/// silently mapped to zeros, so dead channels surface early.
pub fn minmax_normalize(w: &Waveform) -> Result<Waveform> {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in w.samples() {
        min = min.min(v);
        max = max.max(v);
    }
    if min >= max {
        return Err(Error::DegenerateRange);
    }
    // Dividing per sample keeps both endpoints exact: max maps to 1.0 and
    // min to -1.0 with no rounding excursion outside [-1, 1].
    let range = max - min;
    let out = w
        .samples()
        .iter()
        .map(|&v| (v - min) / range * 2.0 - 1.0)
        .collect();
    Waveform::new(out, w.sample_rate_hz())
}

/// Crop both channels to start at their first detected peak, then truncate
/// to the common length.
pub fn align_first_peaks(pair: &EcgPpgPair, min_distance: usize) -> Result<EcgPpgPair> {
    let first = |w: &Waveform, channel: &'static str| -> Result<usize> {
        let peaks = find_peaks(w, min_distance, 0.0)?;
        peaks
            .indices()
            .first()
            .copied()
            .ok_or(Error::NoPeakFound { channel })
    };
    let ecg_start = first(&pair.ecg, "ecg")?;
    let ppg_start = first(&pair.ppg, "ppg")?;
    let common = (pair.ecg.len() - ecg_start).min(pair.ppg.len() - ppg_start);
    let ecg = Waveform::new(
        pair.ecg.samples()[ecg_start..ecg_start + common].to_vec(),
        pair.sample_rate_hz(),
    )?;
    let ppg = Waveform::new(
        pair.ppg.samples()[ppg_start..ppg_start + common].to_vec(),
        pair.sample_rate_hz(),
    )?;
    EcgPpgPair::new(ecg, ppg)
}

/// Cut a waveform into fixed windows advancing by `window * (1 - overlap)`.
///
/// Trailing samples that do not fill a whole window are discarded; a window
/// longer than the signal yields no segments.
pub fn segment(w: &Waveform, window: usize, overlap_fraction: f64) -> Result<Vec<Segment>> {
    if window == 0 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "must be at least 1".into(),
        });
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::InvalidParameter {
            name: "overlap_fraction",
            reason: format!("must be in [0, 1), got {overlap_fraction}"),
        });
    }
    let stride = ((window as f64 * (1.0 - overlap_fraction)).round() as usize).max(1);
    let x = w.samples();
    let mut out = Vec::new();
    let mut start = 0;
    while start + window <= x.len() {
        out.push(Segment {
            start_index: start,
            values: x[start..start + window].to_vec(),
        });
        start += stride;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wf(samples: Vec<f64>, fs: f64) -> Waveform {
        Waveform::new(samples, fs).unwrap()
    }

    #[test]
    fn waveform_rejects_empty_and_nonfinite() {
        assert!(Waveform::new(vec![], 125.0).is_err());
        assert!(Waveform::new(vec![1.0, f64::NAN], 125.0).is_err());
        assert!(Waveform::new(vec![1.0], 0.0).is_err());
        assert!(Waveform::new(vec![1.0], -5.0).is_err());
    }

    #[test]
    fn normalize_maps_endpoints() {
        let w = wf(vec![0.0, 5.0, 10.0], 1.0);
        let n = minmax_normalize(&w).unwrap();
        assert_eq!(n.samples(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn normalize_identity_when_extremes_attained() {
        let w = wf(vec![-1.0, 0.25, 1.0], 1.0);
        let n = minmax_normalize(&w).unwrap();
        assert_eq!(n.samples(), w.samples());
    }

    #[test]
    fn normalize_rejects_constant() {
        let w = wf(vec![2.0, 2.0, 2.0], 1.0);
        assert!(matches!(
            minmax_normalize(&w),
            Err(Error::DegenerateRange)
        ));
    }

    #[test]
    fn segment_stride_arithmetic() {
        let w = wf(vec![0.0; 1024], 125.0);
        let segs = segment(&w, 512, 0.5).unwrap();
        let starts: Vec<usize> = segs.iter().map(|s| s.start_index).collect();
        assert_eq!(starts, vec![0, 256, 512]);
    }

    #[test]
    fn segment_exact_fit_and_short_input() {
        let w = wf(vec![0.0; 512], 125.0);
        assert_eq!(segment(&w, 512, 0.5).unwrap().len(), 1);
        let w = wf(vec![0.0; 511], 125.0);
        assert_eq!(segment(&w, 512, 0.5).unwrap().len(), 0);
    }

    #[test]
    fn segment_halves_reconstruct_prefix() {
        let samples: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let w = wf(samples.clone(), 1.0);
        let segs = segment(&w, 64, 0.5).unwrap();
        let stride = 32;
        let mut rebuilt = Vec::new();
        for s in &segs {
            rebuilt.extend_from_slice(&s.values[..stride]);
        }
        rebuilt.extend_from_slice(&segs.last().unwrap().values[stride..]);
        let covered = (segs.len() - 1) * stride + 64;
        assert_eq!(rebuilt, samples[..covered]);
    }

    #[test]
    fn align_crops_to_common_length() {
        let mut ecg = vec![0.0; 1000];
        let mut ppg = vec![0.0; 1000];
        ecg[40] = 1.0;
        ppg[55] = 1.0;
        let pair = EcgPpgPair::new(wf(ecg, 125.0), wf(ppg, 125.0)).unwrap();
        let aligned = align_first_peaks(&pair, 1).unwrap();
        assert_eq!(aligned.len(), 945);
        assert_eq!(aligned.ecg.samples()[0], 1.0);
        assert_eq!(aligned.ppg.samples()[0], 1.0);
    }

    #[test]
    fn align_identity_when_peaks_at_zero() {
        // Peaks need a neighbour on each side, so "first peak at index 0"
        // in practice means both channels peak at the same index.
        let mut ecg = vec![0.0; 100];
        let mut ppg = vec![0.0; 100];
        ecg[3] = 1.0;
        ppg[3] = 1.0;
        let pair = EcgPpgPair::new(wf(ecg, 125.0), wf(ppg, 125.0)).unwrap();
        let aligned = align_first_peaks(&pair, 1).unwrap();
        assert_eq!(aligned.len(), 97);
        assert_eq!(aligned.ecg.samples(), aligned.ppg.samples());
    }

    #[test]
    fn align_rejects_flat_channel() {
        let mut ecg = vec![0.0; 100];
        ecg[10] = 1.0;
        let ppg = vec![0.5; 100];
        let pair = EcgPpgPair::new(wf(ecg, 125.0), wf(ppg, 125.0)).unwrap();
        assert!(matches!(
            align_first_peaks(&pair, 1),
            Err(Error::NoPeakFound { channel: "ppg" })
        ));
    }
}
