//! The coupled five-state dynamical model and its fixed-step RK4 integrator.
//!
//! States (x, y) form a planar oscillator attracted to the unit circle whose
//! phase theta = atan2(y, x) drives the ECG state z through a sum of
//! Gaussian wave bumps anchored at the template angles. Two further states
//! couple z into the PPG: w integrates z^2 with linear decay and feeds v.
//!
//! Time is measured in model units: the reference frequency puts one cycle
//! at 1/f_bar time units, so with f_bar = 0.1 a beat spans 10 units and the
//! radial dynamics relax well within a single cycle.

use std::f64::consts::TAU;

use super::template::{wrap_angle, RhythmTemplate};
use crate::error::{Error, Result};

/// Fixed model constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    /// Baseline-wander amplitude added to the ECG relaxation target.
    pub baseline_amplitude: f64,
    /// Baseline-wander frequency in cycles per model time unit.
    pub baseline_frequency: f64,
    /// Decay rate of the PPG state v.
    pub ppg_decay_rate: f64,
    /// Coupling rate from the drive state w into v.
    pub ppg_coupling_rate: f64,
    /// Decay rate of the drive state w.
    pub drive_decay_rate: f64,
    /// Cycle frequency at the mean RR interval (0.1 at 60 BPM).
    pub reference_frequency: f64,
}

impl Default for ModelConstants {
    fn default() -> Self {
        Self {
            baseline_amplitude: 0.01,
            baseline_frequency: 0.25,
            ppg_decay_rate: 0.5,
            ppg_coupling_rate: 0.5,
            drive_decay_rate: 1.25,
            reference_frequency: 0.1,
        }
    }
}

/// The state vector (x, y, z, v, w); also used for its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub v: f64,
    pub w: f64,
}

impl State {
    /// Published initial conditions.
    pub fn initial() -> Self {
        Self {
            x: 1.0 / 2.0f64.sqrt(),
            y: 1.0 / 2.0f64.sqrt(),
            z: 0.2,
            v: 0.005,
            w: 0.0,
        }
    }

    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn phase(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.z.is_finite()
            && self.v.is_finite()
            && self.w.is_finite()
    }

    fn add_scaled(&self, rate: &State, h: f64) -> State {
        State {
            x: self.x + h * rate.x,
            y: self.y + h * rate.y,
            z: self.z + h * rate.z,
            v: self.v + h * rate.v,
            w: self.w + h * rate.w,
        }
    }
}

/// Cycle frequency for an interval `rr_c` relative to the series mean:
/// `f_bar * rr_mean / rr_c`. Shorter beats spin the oscillator faster.
pub fn cycle_frequency(f_bar: f64, rr_mean: f64, rr_c: f64) -> Result<f64> {
    if !(rr_mean.is_finite() && rr_mean > 0.0) {
        return Err(Error::NonPositiveInterval(rr_mean));
    }
    if !(rr_c.is_finite() && rr_c > 0.0) {
        return Err(Error::NonPositiveInterval(rr_c));
    }
    Ok(f_bar * rr_mean / rr_c)
}

/// Time derivative of the state at time `t` with cycle frequency `f`.
pub fn derivatives(
    state: &State,
    t: f64,
    template: &RhythmTemplate,
    constants: &ModelConstants,
    f: f64,
) -> State {
    let alpha = 1.0 - state.radius();
    let omega = TAU * f;
    let theta = state.phase();
    let baseline =
        constants.baseline_amplitude * (TAU * constants.baseline_frequency * t).sin();

    let mut wave = 0.0;
    for ((&a, &b), &anchor) in template
        .amplitudes()
        .iter()
        .zip(template.widths())
        .zip(template.angles())
    {
        let dtheta = wrap_angle(theta - anchor);
        wave += a * dtheta * (-dtheta * dtheta / (2.0 * b * b)).exp();
    }

    State {
        x: alpha * state.x - omega * state.y,
        y: alpha * state.y + omega * state.x,
        z: -wave - (state.z - baseline),
        v: -constants.ppg_decay_rate * state.v + constants.ppg_coupling_rate * state.w,
        w: state.z * state.z - constants.drive_decay_rate * state.w,
    }
}

/// One classical RK4 step of size `h`.
pub fn rk4_step(
    state: &State,
    t: f64,
    h: f64,
    template: &RhythmTemplate,
    constants: &ModelConstants,
    f: f64,
) -> State {
    let k1 = derivatives(state, t, template, constants, f);
    let k2 = derivatives(&state.add_scaled(&k1, h / 2.0), t + h / 2.0, template, constants, f);
    let k3 = derivatives(&state.add_scaled(&k2, h / 2.0), t + h / 2.0, template, constants, f);
    let k4 = derivatives(&state.add_scaled(&k3, h), t + h, template, constants, f);
    State {
        x: state.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        y: state.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        z: state.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
        v: state.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
        w: state.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
    }
}

/// Integrate from `initial` at a constant cycle frequency, returning the
/// state at every step including the initial one.
pub fn integrate_constant_frequency(
    initial: State,
    f: f64,
    h: f64,
    steps: usize,
    template: &RhythmTemplate,
    constants: &ModelConstants,
) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial);
    let mut state = initial;
    let mut t = 0.0;
    for _ in 0..steps {
        state = rk4_step(&state, t, h, template, constants, f);
        t += h;
        if !state.is_finite() {
            return Err(Error::IntegrationDiverged { t });
        }
        out.push(state);
    }
    Ok(out)
}
