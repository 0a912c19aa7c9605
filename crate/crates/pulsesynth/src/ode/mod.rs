//! The coupled five-state dynamical model: rhythm templates and presets,
//! the vector field and RK4 integrator, per-cycle frequency adaptation and
//! ECG-PPG pair synthesis from prescribed RR sequences.

mod model;
mod synth;
mod template;

pub use model::{
    cycle_frequency, derivatives, integrate_constant_frequency, rk4_step, ModelConstants, State,
};
pub use synth::{prescribe_gaussian_rr, synthesize, SynthesisConfig};
pub use template::{perturb_template, preset, Rhythm, RhythmTemplate};
