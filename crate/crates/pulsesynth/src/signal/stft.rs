//! Log-magnitude short-time Fourier transform.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::Waveform;
use crate::error::{Error, Result};

/// Log-magnitude spectrogram: one row per frame, one column per one-sided
/// frequency bin. Entries are `ln(|X| + delta)`, so every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub magnitudes: Vec<Vec<f64>>,
    pub hop: usize,
    pub window_len: usize,
}

impl Spectrogram {
    pub fn frames(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn bins(&self) -> usize {
        self.magnitudes.first().map_or(0, Vec::len)
    }
}

/// Hann-windowed STFT with frames every `hop` samples and magnitudes
/// `ln(|DFT frame| + delta)`.
pub fn stft_spectrogram(
    w: &Waveform,
    window_len: usize,
    hop: usize,
    delta: f64,
) -> Result<Spectrogram> {
    if window_len == 0 || window_len > w.len() {
        return Err(Error::InvalidParameter {
            name: "window_len",
            reason: format!("must be in 1..={}, got {window_len}", w.len()),
        });
    }
    if hop == 0 {
        return Err(Error::InvalidParameter {
            name: "hop",
            reason: "must be at least 1".into(),
        });
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("must be positive, got {delta}"),
        });
    }

    let window = hann(window_len);
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(window_len);
    let bins = window_len / 2 + 1;
    let x = w.samples();

    let mut magnitudes = Vec::new();
    let mut start = 0;
    while start + window_len <= x.len() {
        let mut buf: Vec<Complex64> = x[start..start + window_len]
            .iter()
            .zip(&window)
            .map(|(&v, &h)| Complex64::new(v * h, 0.0))
            .collect();
        fft.process(&mut buf);
        magnitudes.push(buf[..bins].iter().map(|c| (c.norm() + delta).ln()).collect());
        start += hop;
    }

    Ok(Spectrogram {
        magnitudes,
        hop,
        window_len,
    })
}

/// One-sided DFT magnitude spectrum of a raw (unwindowed) frame.
pub(crate) fn dft_magnitudes(frame: &[f64]) -> Vec<f64> {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(frame.len());
    let mut buf: Vec<Complex64> = frame.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.process(&mut buf);
    buf[..frame.len() / 2 + 1].iter().map(|c| c.norm()).collect()
}

fn hann(n: usize) -> Vec<f64> {
    // Periodic window, as used for spectral analysis.
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_input_is_uniform_log_delta() {
        let w = Waveform::new(vec![0.0; 512], 125.0).unwrap();
        let s = stft_spectrogram(&w, 128, 64, 1e-10).unwrap();
        let expected = 1e-10f64.ln();
        for row in &s.magnitudes {
            for &v in row {
                assert_eq!(v, expected);
            }
        }
    }

    #[test]
    fn frame_count_follows_hop_arithmetic() {
        let w = Waveform::new(vec![0.0; 512], 125.0).unwrap();
        let s = stft_spectrogram(&w, 128, 64, 1e-10).unwrap();
        assert_eq!(s.frames(), 7);
        assert_eq!(s.bins(), 65);
    }

    #[test]
    fn bin_centered_sine_peaks_at_its_bin() {
        let n = 512;
        let window = 128;
        let bin = 12;
        let fs = 125.0;
        let freq = bin as f64 * fs / window as f64;
        let samples: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * freq * i as f64 / fs).sin())
            .collect();
        let w = Waveform::new(samples.clone(), fs).unwrap();
        let s = stft_spectrogram(&w, window, 64, 1e-10).unwrap();
        for row in &s.magnitudes {
            let argmax = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert_eq!(argmax, bin);
        }

        // Against a direct O(n^2) DFT of the first Hann-windowed frame.
        let hann = super::hann(window);
        let frame: Vec<f64> = samples[..window]
            .iter()
            .zip(&hann)
            .map(|(&v, &h)| v * h)
            .collect();
        for (k, &mag) in s.magnitudes[0].iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &v) in frame.iter().enumerate() {
                let phase = -2.0 * PI * (k * i) as f64 / window as f64;
                re += v * phase.cos();
                im += v * phase.sin();
            }
            let direct = (re * re + im * im).sqrt();
            // Undo the log to compare raw magnitudes; near-zero bins only
            // differ by accumulation roundoff.
            let raw = mag.exp() - 1e-10;
            assert!(
                (raw - direct).abs() < 1e-9,
                "bin {k}: |X| {raw} vs direct {direct}"
            );
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let w = Waveform::new(vec![0.0; 100], 125.0).unwrap();
        assert!(stft_spectrogram(&w, 128, 64, 1e-10).is_err());
        assert!(stft_spectrogram(&w, 64, 0, 1e-10).is_err());
        assert!(stft_spectrogram(&w, 64, 32, 0.0).is_err());
    }
}
