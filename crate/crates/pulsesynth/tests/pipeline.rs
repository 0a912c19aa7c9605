//! End-to-end synthesis, detection and preprocessing round trips.

use pulsesynth::metrics;
use pulsesynth::ode::{preset, prescribe_gaussian_rr, synthesize, Rhythm, SynthesisConfig};
use pulsesynth::peaks::{find_peaks, rr_from_peaks, RrSeries, RrUnit};
use pulsesynth::signal::{align_first_peaks, bandpass, minmax_normalize, EcgPpgPair};

fn rr_samples(intervals: Vec<f64>, fs: f64) -> RrSeries {
    RrSeries::new(intervals, RrUnit::Samples, Some(fs)).unwrap()
}

/// Prescribed intervals of at least 40 samples come back from detection
/// within one sample each, beat for beat.
///
/// The detector distance must exceed the R-to-T spacing of the slowest
/// beat (about a quarter interval) while staying at or below the fastest
/// interval, or T waves leak through as false R peaks — the same failure
/// mode real peak finders show on slow rhythms.
#[test]
fn rr_fidelity_for_varying_prescriptions() {
    let fs = 125.0;
    let prescriptions: Vec<Vec<f64>> = vec![
        vec![40.0, 120.0].repeat(12).to_vec(),
        (0..30).map(|i| 60.0 + 3.0 * i as f64).collect(),
        vec![140.0, 41.0, 90.0, 55.0, 130.0, 70.0].repeat(5),
    ];
    for (case, targets) in prescriptions.into_iter().enumerate() {
        let cfg = SynthesisConfig::new(
            preset(Rhythm::Rsr),
            rr_samples(targets.clone(), fs),
            fs,
        )
        .unwrap();
        let pair = synthesize(&cfg).unwrap();
        let peaks = find_peaks(&pair.ecg, 40, 0.3).unwrap();
        let detected = rr_from_peaks(&peaks, fs).unwrap();
        assert!(
            detected.len() + 2 >= targets.len(),
            "case {case}: {} of {} beats detected",
            detected.len(),
            targets.len()
        );
        for (i, (&d, &p)) in detected.intervals().iter().zip(&targets).enumerate() {
            assert!(
                (d - p).abs() <= 1.0,
                "case {case}, beat {i}: detected {d}, prescribed {p}"
            );
        }
    }
}

/// Parameter noise diversifies wave shapes without breaking beat timing.
#[test]
fn perturbed_templates_keep_beat_timing() {
    let fs = 125.0;
    for rhythm in [Rhythm::Rsr, Rhythm::Afib] {
        let targets = prescribe_gaussian_rr(700.0, 15.0, fs, 40.0, 11).unwrap();
        let mut cfg = SynthesisConfig::new(preset(rhythm), targets.clone(), fs).unwrap();
        cfg.noise_rel_std = 0.1;
        cfg.seed = 3;
        let pair = synthesize(&cfg).unwrap();
        let peaks = find_peaks(&pair.ecg, 50, 0.3).unwrap();
        let detected = rr_from_peaks(&peaks, fs).unwrap();
        let n = detected.len().min(targets.len());
        for i in 0..n {
            let (d, p) = (detected.intervals()[i], targets.intervals()[i]);
            assert!(
                (d - p).abs() <= 2.0,
                "{rhythm:?} beat {i}: detected {d}, prescribed {p}"
            );
        }
    }
}

/// The paper's preprocessing chain applied to a synthetic pair keeps the
/// channels aligned, normalized and beat-detectable.
#[test]
fn preprocess_chain_on_synthetic_pair() {
    let fs = 125.0;
    let targets = prescribe_gaussian_rr(800.0, 20.0, fs, 60.0, 5).unwrap();
    let cfg = SynthesisConfig::new(preset(Rhythm::Rsr), targets, fs).unwrap();
    let pair = synthesize(&cfg).unwrap();

    let ecg = bandpass(&pair.ecg, 0.4, 45.0).unwrap();
    let ppg = bandpass(&pair.ppg, 0.3, 8.0).unwrap();
    let filtered = EcgPpgPair::new(ecg, ppg).unwrap();
    let aligned = align_first_peaks(&filtered, 50).unwrap();
    let normalized = EcgPpgPair::new(
        minmax_normalize(&aligned.ecg).unwrap(),
        minmax_normalize(&aligned.ppg).unwrap(),
    )
    .unwrap();

    assert_eq!(normalized.ecg.len(), normalized.ppg.len());
    let peaks = find_peaks(&normalized.ecg, 50, 0.3).unwrap();
    assert!(peaks.len() > 50, "beats survive preprocessing");
    for &v in normalized.ecg.samples() {
        assert!((-1.0..=1.0).contains(&v));
    }
}

/// Synthesized pairs score perfectly against themselves and poorly against
/// a different rhythm's RR distribution.
#[test]
fn metric_suite_separates_matching_from_mismatched() {
    let fs = 125.0;
    let slow = prescribe_gaussian_rr(900.0, 10.0, fs, 60.0, 1).unwrap();
    let fast = prescribe_gaussian_rr(500.0, 10.0, fs, 60.0, 2).unwrap();

    let h_slow = metrics::unit_histogram(&slow);
    let h_fast = metrics::unit_histogram(&fast);
    assert_eq!(metrics::rhi(&h_slow, &h_slow), 1.0);
    assert_eq!(metrics::rhi(&h_slow, &h_fast), 0.0);
    assert!(metrics::ks(&slow, &fast).unwrap() > 0.9);
    assert!(metrics::kl(&h_slow, &h_fast) > 1.0);

    let cfg = SynthesisConfig::new(preset(Rhythm::Rsr), slow.clone(), fs).unwrap();
    let pair = synthesize(&cfg).unwrap();
    let detected = rr_from_peaks(&find_peaks(&pair.ecg, 50, 0.0).unwrap(), fs).unwrap();
    let n = detected.len().min(slow.len());
    let (truth, recon) = (slow.truncated(n).unwrap(), detected.truncated(n).unwrap());
    assert!(metrics::rrmse_rr(&truth, &recon).unwrap() < 0.01);
    assert!(metrics::mae_hr(&truth, &recon).unwrap() < 0.2);
}

/// PPG pulses land once per beat: the pulse-peak count tracks the R-peak
/// count on the paired channel.
#[test]
fn ppg_pulses_track_ecg_beats() {
    let fs = 125.0;
    let targets = rr_samples(vec![100.0; 30], fs);
    let cfg = SynthesisConfig::new(preset(Rhythm::Rsr), targets, fs).unwrap();
    let pair = synthesize(&cfg).unwrap();
    let ecg_peaks = find_peaks(&pair.ecg, 50, 0.3).unwrap();
    let ppg_peaks = find_peaks(&pair.ppg, 50, 0.3).unwrap();
    let diff = ecg_peaks.len() as i64 - ppg_peaks.len() as i64;
    assert!(
        diff.abs() <= 2,
        "ecg {} vs ppg {} pulse peaks",
        ecg_peaks.len(),
        ppg_peaks.len()
    );
}
