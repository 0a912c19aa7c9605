//! Error and result types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("invalid band {low_hz}..{high_hz} Hz for sample rate {sample_rate_hz} Hz")]
    InvalidBand {
        low_hz: f64,
        high_hz: f64,
        sample_rate_hz: f64,
    },

    #[error("signal has zero amplitude range")]
    DegenerateRange,

    #[error("no peak found in {channel} channel")]
    NoPeakFound { channel: &'static str },

    #[error("found {found} peaks, need at least {required}")]
    InsufficientPeaks { required: usize, found: usize },

    #[error("unknown rhythm `{0}` (expected rsr, sa or afib)")]
    UnknownRhythm(String),

    #[error("template field {field}: {reason}")]
    InvalidTemplate { field: String, reason: String },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("interval must be positive, got {0}")]
    NonPositiveInterval(f64),

    #[error("integration diverged at t = {t}")]
    IntegrationDiverged { t: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("feature dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("found {found} segments, need at least {required}")]
    InsufficientSegments { required: usize, found: usize },

    #[error("standard deviation undefined for fewer than two intervals")]
    StdUndefined,

    #[error("RR units differ: {left} vs {right}")]
    UnitMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("sample rate required to convert sample-unit intervals")]
    MissingSampleRate,

    #[error("{path}:{line}: {reason}")]
    Format {
        path: String,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
