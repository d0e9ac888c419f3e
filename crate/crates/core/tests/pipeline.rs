mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use wavecoa_core::pipeline::{detect_harmonics, diagnose, PipelineConfig};
use wavecoa_core::signal::{EnvelopeSpectrum, Signal};
use wavecoa_core::synth::{synth_fault_signal, Preset};
use wavecoa_core::Error;

#[test]
fn bearing_preset_is_diagnosed() {
    let spec = Preset::ConveyorBearing.spec();
    for seed in [1, 4] {
        let (s, truth) = synth_fault_signal(&spec, seed).unwrap();
        let r = diagnose(&s, &PipelineConfig::for_fault(12.6, seed)).unwrap();
        let fc = r.optimal_params.center_freq_hz;
        assert!((fc - truth.resonance_hz).abs() <= 500.0, "seed {seed}: f_c {fc}");
        assert!(r.harmonics.len() >= 3, "seed {seed}: {:?}", r.harmonics);
        assert!(r.envsi_processed >= 1.5 * r.envsi_raw);
        assert!(r.kurtosis_processed > r.kurtosis_raw);
        assert!(rel_err(r.final_period_samples, truth.period_samples) < 0.005);
        assert_eq!(r.fault_freq_hz, 19_200.0 / r.final_period_samples);
    }
}

#[test]
fn gearbox_preset_is_diagnosed() {
    let spec = Preset::ConveyorGearbox.spec();
    for seed in [0, 7] {
        let (s, _) = synth_fault_signal(&spec, seed).unwrap();
        let r = diagnose(&s, &PipelineConfig::for_fault(4.1, seed)).unwrap();
        assert!(r.harmonics.len() >= 3, "seed {seed}");
        assert!(r.envsi_processed > r.envsi_raw);
    }
}

/// Noise-free impact train, exact period, refinement off.
#[test]
fn clean_train_never_loses_envsi() {
    let mut spec = Preset::ConveyorGearbox.spec();
    spec.noise_snr_db = 200.0;
    spec.jitter_frac = 0.0;
    spec.interference_tones.clear();
    let (s, _) = synth_fault_signal(&spec, 3).unwrap();
    let mut cfg = PipelineConfig::for_fault(4.1, 3);
    cfg.refine_period = false;
    cfg.optimizer.max_iterations = 20;
    let r = diagnose(&s, &cfg).unwrap();
    assert!(r.envsi_processed >= r.envsi_raw, "{} < {}", r.envsi_processed, r.envsi_raw);
    assert_eq!(r.final_period_samples, r.initial_period_samples);
    // With a fixed objective the recorded CK history is the optimizer's own.
    assert_eq!(r.evaluations, 30 * 21);
    assert!(r.ck_history.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(*r.ck_history.last().unwrap(), r.best_ck);
}

#[test]
fn repeated_runs_are_identical() {
    let (s, _) = synth_fault_signal(&Preset::ConveyorGearbox.spec(), 5).unwrap();
    let mut cfg = PipelineConfig::for_fault(4.1, 5);
    cfg.optimizer.max_iterations = 15;
    let a = diagnose(&s, &cfg).unwrap();
    let b = diagnose(&s, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn detects_exactly_the_injected_peaks() {
    let res = 0.5;
    let f = 12.6;
    let mut mags = vec![0.0; 600];
    let mut r = rng(8);
    for m in mags.iter_mut() {
        *m = 0.05 + 0.02 * r.sample::<f64, _>(rand_distr::StandardNormal).abs();
    }
    let orders = [1, 2, 4, 7, 9];
    for &k in &orders {
        mags[(k as f64 * f / res).round() as usize] = 1.0;
    }
    let ses = EnvelopeSpectrum::from_magnitudes(mags, res).unwrap();
    let h = detect_harmonics(&ses, f, 10, 0.75, 4.0).unwrap();
    assert_eq!(h.iter().map(|h| h.order).collect::<Vec<_>>(), orders);
    for x in &h {
        assert!((x.freq_hz - x.order as f64 * f).abs() <= res / 2.0 + 1e-9);
        assert_eq!(x.magnitude, 1.0);
    }
}

#[test]
fn rejects_unusable_configurations() {
    let x: Vec<f64> = (0..4096).map(|i| (2.0 * PI * 50.0 * i as f64 / 1000.0).sin()).collect();
    let s = Signal::new(x, 1000.0).unwrap();
    // Fewer than two fault periods in the record.
    assert!(matches!(diagnose(&s, &PipelineConfig::for_fault(0.2, 0)), Err(Error::Config(_))));
    let mut cfg = PipelineConfig::for_fault(10.0, 0);
    cfg.shift_order = 0;
    assert!(matches!(diagnose(&s, &cfg), Err(Error::Config(_))));
    let mut cfg = PipelineConfig::for_fault(10.0, 0);
    cfg.optimizer.population_size = 2;
    assert!(matches!(diagnose(&s, &cfg), Err(Error::Config(_))));
}
