//! Deterministic synthesis of paired ECG-PPG signals from a coupled
//! five-state dynamical model driven by prescribed RR-interval sequences,
//! together with the signal-preprocessing pipeline and the distribution and
//! waveform fidelity metrics used to evaluate them.
//!
//! The crate is organized around five concerns:
//!
//! - [`signal`]: waveform containers, zero-phase bandpass filtering,
//!   resampling, normalization, alignment, segmentation and the STFT;
//! - [`ode`]: rhythm templates, the five-state model, RK4 integration and
//!   ECG-PPG synthesis;
//! - [`peaks`]: distance-constrained peak detection and RR extraction;
//! - [`metrics`]: rHI, rRMSE, rEMD, KL, KS, waveform RMSE, HRV, heart-rate
//!   MAE and the Fréchet distance over segment features;
//! - [`io`]: the CSV and JSON file formats shared with the command-line
//!   tool.
//!
//! A longer guide with runnable walkthroughs lives in the `book/` directory
//! of the repository; its code blocks compile and run as doc-tests of this
//! crate.

pub mod error;
pub mod io;
pub mod metrics;
pub mod ode;
pub mod peaks;
pub mod signal;

pub use error::{Error, Result};

// The book's code blocks are doc-tested here so the guide cannot drift from
// the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(index, "../../../book/src/index.md");
    chapter!(model, "../../../book/src/model.md");
    chapter!(synthesis, "../../../book/src/synthesis.md");
    chapter!(preprocessing, "../../../book/src/preprocessing.md");
    chapter!(peaks_and_rr, "../../../book/src/peaks-and-rr.md");
    chapter!(metrics, "../../../book/src/metrics.md");
    chapter!(cli, "../../../book/src/cli.md");
    chapter!(file_formats, "../../../book/src/file-formats.md");
}
