mod common;

use std::f64::consts::PI;

use common::*;
use wavecoa_core::kurtogram::{band_filter, fast_kurtogram};
use wavecoa_core::signal::Signal;
use wavecoa_core::synth::{synth_fault_signal, Preset};

#[test]
fn bearing_best_band_holds_the_resonance() {
    for seed in [0, 3] {
        let (s, truth) = synth_fault_signal(&Preset::ConveyorBearing.spec(), seed).unwrap();
        let k = fast_kurtogram(&s, 7).unwrap();
        let (lo, hi) = k.best_band();
        assert!(lo <= truth.resonance_hz && truth.resonance_hz <= hi, "[{lo}, {hi}]");
    }
}

/// Kurtosis of a Rayleigh variable, the envelope of complex Gaussian noise.
const RAYLEIGH_KURTOSIS: f64 = (32.0 - 3.0 * PI * PI) / ((4.0 - PI) * (4.0 - PI));

// Long records keep the per-band estimator spread well inside the margin;
// at 16k samples the deepest levels already wander past it.
#[test]
fn white_noise_has_no_outstanding_band() {
    let mut quiet = 0;
    for seed in 0..10 {
        let s = Signal::new(gaussian(1 << 17, 500 + seed), 10_000.0).unwrap();
        let k = fast_kurtogram(&s, 6).unwrap();
        assert!((k.levels[0].kurtosis[0] - RAYLEIGH_KURTOSIS).abs() < 0.1);
        if k.best_kurtosis <= 1.5 * RAYLEIGH_KURTOSIS {
            quiet += 1;
        }
    }
    assert!(quiet >= 9, "{quiet}/10");
}

#[test]
fn bursty_tone_wins_its_band() {
    let fs = 8000.0;
    let n = 16_384;
    let noise = gaussian(n, 12);
    // The steady tone sits on a DFT bin so the record wraps without a jump.
    let steady = 6349.0 * fs / n as f64;
    let x: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            // Hann bursts of 400 samples every 3200.
            let phase = i % 3200;
            let burst = if phase < 400 { (PI * phase as f64 / 400.0).sin().powi(2) } else { 0.0 };
            burst * (2.0 * PI * 1234.0 * t).sin() + 0.05 * (2.0 * PI * steady * t).sin() + 0.01 * noise[i]
        })
        .collect();
    let s = Signal::new(x, fs).unwrap();
    let k = fast_kurtogram(&s, 5).unwrap();
    let (lo, hi) = k.best_band();
    assert!(lo <= 1234.0 && 1234.0 <= hi, "[{lo}, {hi}]");
}

#[test]
fn level_partitions_cover_the_band() {
    let s = Signal::new(gaussian(8192, 1), 1000.0).unwrap();
    let k = fast_kurtogram(&s, 5).unwrap();
    let levels: Vec<f64> = k.levels.iter().map(|l| l.level).collect();
    assert_eq!(levels, [0.0, 1.0, 1.6, 2.0, 2.6, 3.0, 3.6, 4.0, 4.6, 5.0]);
    for l in &k.levels {
        assert!(rel_err(l.bandwidth_hz * l.band_count() as f64, 500.0) < 1e-12);
        assert!(l.kurtosis.iter().all(|v| v.is_finite() && *v >= 0.0));
    }
    assert!(fast_kurtogram(&s, 1).is_err());
    assert!(fast_kurtogram(&Signal::new(gaussian(100, 1), 1000.0).unwrap(), 7).is_err());
}

#[test]
fn band_filter_passes_and_stops() {
    let fs = 1000.0;
    let n = 4000;
    let tone = |f: f64| -> Vec<f64> { (0..n).map(|i| (2.0 * PI * f * i as f64 / fs).cos()).collect() };
    let pass = band_filter(&Signal::new(tone(100.0), fs).unwrap(), 100.0, 50.0).unwrap();
    let out = pass.real_part();
    assert!((tone_amplitude(&out, 400) - 1.0).abs() < 1e-9);
    let stop = band_filter(&Signal::new(tone(300.0), fs).unwrap(), 100.0, 50.0).unwrap();
    assert!(stop.values().iter().all(|v| v.norm() < 1e-9));
    let s = Signal::new(tone(100.0), fs).unwrap();
    assert!(band_filter(&s, 490.0, 40.0).is_err());
    assert!(band_filter(&s, 100.0, 0.0).is_err());
}
