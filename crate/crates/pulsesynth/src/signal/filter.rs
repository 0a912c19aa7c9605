//! Zero-phase Butterworth bandpass filtering.
//!
//! The filter is a 4th-order Butterworth bandpass designed with the bilinear
//! transform (prewarped band edges), factored into second-order sections and
//! applied forward-backward so R-peak timing is never shifted. Edges are
//! extended by odd reflection over one settling length before filtering and
//! trimmed afterwards.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Waveform;
use crate::error::{Error, Result};

const PROTOTYPE_ORDER: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Biquad {
    b0: f64,
    b1: f64,
    b2: f64,
    a1: f64,
    a2: f64,
}

/// Attenuate frequency content outside [low_hz, high_hz].
///
/// Output has the same length and sample rate as the input and zero phase
/// distortion. The band must satisfy 0 < low < high < Nyquist.
pub fn bandpass(w: &Waveform, low_hz: f64, high_hz: f64) -> Result<Waveform> {
    let fs = w.sample_rate_hz();
    if !(low_hz.is_finite() && high_hz.is_finite()) || low_hz <= 0.0 || low_hz >= high_hz
        || high_hz >= fs / 2.0
    {
        return Err(Error::InvalidBand {
            low_hz,
            high_hz,
            sample_rate_hz: fs,
        });
    }
    let sos = butter_bandpass_sos(PROTOTYPE_ORDER, low_hz, high_hz, fs);
    // The slowest transient is set by the low band edge.
    let settle = (2.0 * fs / low_hz).ceil() as usize;
    let pad = settle.max(3 * (2 * sos.len() + 1)).min(w.len() - 1);
    let filtered = sosfiltfilt(&sos, w.samples(), pad);
    Waveform::new(filtered, fs)
}

/// Butterworth bandpass as second-order sections. `order` is the analog
/// lowpass prototype order (must be even); the bandpass has 2×order poles.
fn butter_bandpass_sos(order: usize, low_hz: f64, high_hz: f64, fs: f64) -> Vec<Biquad> {
    assert!(order >= 2 && order % 2 == 0);
    let fs2 = 2.0 * fs;
    // Prewarp the digital band edges onto the analog axis.
    let w1 = fs2 * (PI * low_hz / fs).tan();
    let w2 = fs2 * (PI * high_hz / fs).tan();
    let w0 = (w1 * w2).sqrt();
    let bw = w2 - w1;

    // Upper-half-plane prototype poles; conjugates are implied.
    let mut digital_pole_pairs = Vec::with_capacity(order);
    for k in 1..=order / 2 {
        let angle = PI * (2 * k + order - 1) as f64 / (2 * order) as f64;
        let proto = Complex64::from_polar(1.0, angle);
        // Lowpass-to-bandpass: s -> (s^2 + w0^2) / (bw s). Each prototype
        // pole maps to two analog poles.
        let bp = bw * proto;
        let disc = (bp * bp - 4.0 * w0 * w0).sqrt();
        for s in [(bp + disc) / 2.0, (bp - disc) / 2.0] {
            // Bilinear transform.
            let zp = (fs2 + s) / (fs2 - s);
            digital_pole_pairs.push(zp);
        }
    }

    // Each digital pole pairs with its conjugate to form one real biquad.
    // Numerator zeros sit at z = +1 and z = -1 (one of each per section).
    let mut sos: Vec<Biquad> = digital_pole_pairs
        .iter()
        .map(|zp| Biquad {
            b0: 1.0,
            b1: 0.0,
            b2: -1.0,
            a1: -2.0 * zp.re,
            a2: zp.norm_sqr(),
        })
        .collect();

    // Normalize to unit gain at the (digitized) center frequency, spreading
    // the correction evenly across sections.
    let wc = 2.0 * (w0 / fs2).atan();
    let z = Complex64::from_polar(1.0, wc);
    let mut gain = 1.0;
    for s in &sos {
        let num = s.b0 * z * z + s.b1 * z + Complex64::new(s.b2, 0.0);
        let den = z * z + s.a1 * z + Complex64::new(s.a2, 0.0);
        gain *= (num / den).norm();
    }
    let per_section = (1.0 / gain).powf(1.0 / sos.len() as f64);
    for s in &mut sos {
        s.b0 *= per_section;
        s.b1 *= per_section;
        s.b2 *= per_section;
    }
    sos
}

/// Cascade of biquads in transposed direct form II.
fn sosfilt(sos: &[Biquad], x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    for s in sos {
        let mut z1 = 0.0;
        let mut z2 = 0.0;
        for v in y.iter_mut() {
            let xn = *v;
            let yn = s.b0 * xn + z1;
            z1 = s.b1 * xn - s.a1 * yn + z2;
            z2 = s.b2 * xn - s.a2 * yn;
            *v = yn;
        }
    }
    y
}

/// Forward-backward filtering with odd-reflection padding of `pad` samples
/// at each end.
fn sosfiltfilt(sos: &[Biquad], x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    let pad = pad.min(n.saturating_sub(1));
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        ext.push(2.0 * x[0] - x[i]);
    }
    ext.extend_from_slice(x);
    for i in 1..=pad {
        ext.push(2.0 * x[n - 1] - x[n - 1 - i]);
    }

    let mut y = sosfilt(sos, &ext);
    y.reverse();
    let mut y = sosfilt(sos, &y);
    y.reverse();
    y[pad..pad + n].to_vec()
}
