//! Band-limited resampling onto a new sample rate.

use super::Waveform;
use crate::error::{Error, Result};

/// Zero crossings kept on each side of the interpolation kernel.
const KERNEL_LOBES: f64 = 16.0;

/// Resample onto `target_rate_hz`.
///
/// Output instants are evaluated with a Blackman-windowed sinc kernel cut
/// off at 0.45× the lower of the two rates, so decimation is band-limited
/// before the rate drops. Kernel weights are renormalized per output sample,
/// which preserves constants exactly and keeps edges usable. The output
/// length is `round(len * target / source)`.
pub fn resample(w: &Waveform, target_rate_hz: f64) -> Result<Waveform> {
    if !(target_rate_hz.is_finite() && target_rate_hz > 0.0) {
        return Err(Error::InvalidParameter {
            name: "target_rate_hz",
            reason: format!("must be positive, got {target_rate_hz}"),
        });
    }
    let source = w.sample_rate_hz();
    if target_rate_hz == source {
        return Ok(w.clone());
    }

    let x = w.samples();
    let out_len = (x.len() as f64 * target_rate_hz / source).round() as usize;
    if out_len == 0 {
        return Err(Error::InvalidParameter {
            name: "target_rate_hz",
            reason: "resampling would produce an empty signal".into(),
        });
    }

    // Cutoff relative to the source Nyquist; 1.0 would be the Nyquist itself.
    let cutoff = 0.9 * (target_rate_hz / source).min(1.0);
    let half_width = (KERNEL_LOBES / cutoff).ceil();
    let step = source / target_rate_hz;

    let mut out = Vec::with_capacity(out_len);
    for k in 0..out_len {
        let pos = k as f64 * step;
        let lo = ((pos - half_width).ceil() as isize).max(0) as usize;
        let hi = ((pos + half_width).floor() as isize).min(x.len() as isize - 1) as usize;
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for (n, &v) in x.iter().enumerate().take(hi + 1).skip(lo) {
            let u = n as f64 - pos;
            let weight = sinc(cutoff * u) * blackman(u / half_width);
            acc += weight * v;
            wsum += weight;
        }
        out.push(acc / wsum);
    }
    Waveform::new(out, target_rate_hz)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

fn blackman(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let pr = std::f64::consts::PI * r;
    0.42 + 0.5 * pr.cos() + 0.08 * (2.0 * pr).cos()
}
