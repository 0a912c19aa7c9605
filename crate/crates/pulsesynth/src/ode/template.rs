//! Rhythm templates: the wave-parameter vectors (amplitudes, angular widths,
//! reference angles) that shape one synthetic rhythm, the three built-in
//! presets, and the seeded parameter perturbation used to diversify
//! synthesized pairs.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Narrowest width a perturbed wave may collapse to, in radians.
const WIDTH_FLOOR: f64 = 1e-3;

/// Wave parameters of one rhythm: amplitude, angular width and reference
/// angle per wave, at least five waves (P, Q, R, S, T), angles strictly
/// increasing within (-pi, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct RhythmTemplate {
    name: String,
    a: Vec<f64>,
    b: Vec<f64>,
    theta: Vec<f64>,
}

impl RhythmTemplate {
    pub fn new(
        name: impl Into<String>,
        a: Vec<f64>,
        b: Vec<f64>,
        theta: Vec<f64>,
    ) -> Result<Self> {
        let invalid = |field: &str, reason: String| Error::InvalidTemplate {
            field: field.to_string(),
            reason,
        };
        if a.len() < 5 {
            return Err(invalid("a", format!("need at least 5 waves, got {}", a.len())));
        }
        if b.len() != a.len() || theta.len() != a.len() {
            return Err(invalid(
                "b/theta",
                format!(
                    "length mismatch: a has {}, b has {}, theta has {}",
                    a.len(),
                    b.len(),
                    theta.len()
                ),
            ));
        }
        for (i, &v) in a.iter().enumerate() {
            if !v.is_finite() {
                return Err(invalid(&format!("a[{i}]"), "must be finite".into()));
            }
        }
        for (i, &v) in b.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    &format!("b[{i}]"),
                    format!("width must be positive, got {v}"),
                ));
            }
        }
        for (i, &v) in theta.iter().enumerate() {
            if !v.is_finite() || v <= -PI || v > PI {
                return Err(invalid(
                    &format!("theta[{i}]"),
                    format!("angle must lie in (-pi, pi], got {v}"),
                ));
            }
            if i > 0 && v <= theta[i - 1] {
                return Err(invalid(
                    &format!("theta[{i}]"),
                    format!("angles must be strictly increasing ({} then {v})", theta[i - 1]),
                ));
            }
        }
        Ok(Self {
            name: name.into(),
            a,
            b,
            theta,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.a
    }

    pub fn widths(&self) -> &[f64] {
        &self.b
    }

    pub fn angles(&self) -> &[f64] {
        &self.theta
    }

    pub fn wave_count(&self) -> usize {
        self.a.len()
    }
}

/// The three built-in rhythm classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rhythm {
    /// Regular sinus rhythm.
    Rsr,
    /// Sinus arrhythmia.
    Sa,
    /// Atrial fibrillation.
    Afib,
}

impl std::str::FromStr for Rhythm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rsr" => Ok(Rhythm::Rsr),
            "sa" => Ok(Rhythm::Sa),
            "afib" => Ok(Rhythm::Afib),
            other => Err(Error::UnknownRhythm(other.to_string())),
        }
    }
}

impl std::fmt::Display for Rhythm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rhythm::Rsr => "rsr",
            Rhythm::Sa => "sa",
            Rhythm::Afib => "afib",
        })
    }
}

/// Published parameter vectors for the three rhythm classes.
pub fn preset(rhythm: Rhythm) -> RhythmTemplate {
    let template = match rhythm {
        Rhythm::Rsr => RhythmTemplate::new(
            "rsr",
            vec![1.2, -5.0, 30.0, -7.5, 0.75],
            vec![0.25, 0.1, 0.1, 0.1, 0.4],
            vec![-PI / 3.0, -PI / 12.0, 0.0, PI / 12.0, PI / 2.0],
        ),
        Rhythm::Sa => RhythmTemplate::new(
            "sa",
            vec![1.0, 2.0, 3.0, 3.0, 2.5, -1.0, 0.5],
            vec![0.2, 0.15, 0.15, 0.2, 0.15, 0.2, 0.4],
            vec![
                -PI / 1.5,
                -PI / 2.0,
                -PI / 6.5,
                -PI / 12.0,
                0.0,
                PI / 12.0,
                PI / 1.5,
            ],
        ),
        Rhythm::Afib => RhythmTemplate::new(
            "afib",
            vec![
                -1.0, 0.5, 1.0, -2.0, 25.0, -10.0, 2.0, -2.0, 0.5, 0.5, 0.5,
            ],
            vec![0.1, 0.15, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.2, 0.2, 0.2],
            vec![
                -PI / 2.0,
                -PI / 3.0,
                -PI / 5.0,
                -PI / 12.0,
                0.0,
                PI / 12.0,
                PI / 6.0,
                PI / 5.0,
                PI / 2.5,
                PI / 2.0,
                PI / 1.5,
            ],
        ),
    };
    template.expect("presets are valid")
}

/// Wrap an angle into (-pi, pi].
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut r = x.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Add zero-mean Gaussian noise with standard deviation `rel_std * |p|` to
/// every parameter. Widths are floored at a small positive value, angles
/// are wrapped back into (-pi, pi), and the wave triples are re-sorted by
/// angle if the noise broke their ordering. Deterministic for a fixed seed.
pub fn perturb_template(
    template: &RhythmTemplate,
    rel_std: f64,
    seed: u64,
) -> Result<RhythmTemplate> {
    if !(rel_std.is_finite() && rel_std >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "rel_std",
            reason: format!("must be non-negative, got {rel_std}"),
        });
    }
    if rel_std == 0.0 {
        return Ok(template.clone());
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut draw = |p: f64| -> f64 {
        let normal = Normal::new(0.0, rel_std * p.abs()).expect("finite std");
        p + normal.sample(&mut rng)
    };

    let a: Vec<f64> = template.amplitudes().iter().map(|&p| draw(p)).collect();
    let b: Vec<f64> = template
        .widths()
        .iter()
        .map(|&p| draw(p).max(WIDTH_FLOOR))
        .collect();
    let theta: Vec<f64> = template.angles().iter().map(|&p| wrap_angle(draw(p))).collect();

    let mut waves: Vec<(f64, f64, f64)> = theta
        .into_iter()
        .zip(a)
        .zip(b)
        .map(|((t, a), b)| (t, a, b))
        .collect();
    waves.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    // Exact collisions after wrapping are nudged apart to keep the
    // strict-ordering invariant.
    for i in 1..waves.len() {
        if waves[i].0 <= waves[i - 1].0 {
            waves[i].0 = waves[i - 1].0 + 1e-9;
        }
    }

    RhythmTemplate::new(
        template.name(),
        waves.iter().map(|w| w.1).collect(),
        waves.iter().map(|w| w.2).collect(),
        waves.iter().map(|w| w.0).collect(),
    )
}
