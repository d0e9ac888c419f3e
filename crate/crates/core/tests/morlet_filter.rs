mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use common::*;
use wavecoa_core::morlet::{morlet_gain, time_domain_wavelet, wavelet_filter, MorletParams, SpectralFilter};
use wavecoa_core::signal::Signal;

fn tone(freq: f64, n: usize, fs: f64) -> Vec<f64> {
    (0..n).map(|i| (2.0 * PI * freq * i as f64 / fs).cos()).collect()
}

#[test]
fn tone_at_centre_passes_unchanged() {
    let (n, fs) = (8192, 8192.0);
    let p = MorletParams::new(1000.0, 200.0).unwrap();
    let x = tone(1000.0, n, fs);
    let y = wavelet_filter(&Signal::new(x.clone(), fs).unwrap(), &p).unwrap().real_part();
    let ratio = tone_amplitude(&y, 1000) / tone_amplitude(&x, 1000);
    assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    let peak = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!((peak - 1.0).abs() < 0.01);
}

#[test]
fn tone_at_half_bandwidth_is_attenuated() {
    let (n, fs) = (8192, 8192.0);
    let p = MorletParams::new(1000.0, 200.0).unwrap();
    let expect = (-PI * PI / 4.0).exp();
    for f in [900.0, 1100.0] {
        let x = tone(f, n, fs);
        let y = wavelet_filter(&Signal::new(x.clone(), fs).unwrap(), &p).unwrap().real_part();
        let ratio = tone_amplitude(&y, f as usize) / tone_amplitude(&x, f as usize);
        assert!(rel_err(ratio, expect) < 0.02, "{f}: {ratio}");
        assert!((ratio - 0.0847).abs() < 0.02 * 0.0847);
    }
}

#[test]
fn zero_signal_gives_zero_output() {
    let s = Signal::new(vec![0.0; 300], 1000.0).unwrap();
    let y = wavelet_filter(&s, &MorletParams::new(200.0, 40.0).unwrap()).unwrap();
    assert!(y.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
}

#[test]
fn gain_closed_forms() {
    let p = MorletParams::new(3000.0, 600.0).unwrap();
    assert_eq!(morlet_gain(&p, 3000.0), 1.0);
    assert!(rel_err(morlet_gain(&p, 3300.0), (-PI * PI / 4.0).exp()) < 1e-14);
    assert!(rel_err(morlet_gain(&p, 2400.0), (-PI * PI).exp()) < 1e-14);
    assert!(((-PI * PI).exp() - 5.172e-5).abs() < 1e-8);
}

#[test]
fn wavelet_value_at_origin_and_symmetry() {
    let p = MorletParams::new(700.0, 150.0).unwrap();
    let n = 1024;
    let w = time_domain_wavelet(&p, n, 8000.0).unwrap();
    let c = 150.0 / PI.sqrt();
    assert_eq!(w.values()[n / 2], Complex64::new(c, 0.0));
    let m = w.modulus();
    for k in 1..n / 2 {
        assert!((m[n / 2 + k] - m[n / 2 - k]).abs() <= 1e-15 * c);
    }
    assert!(time_domain_wavelet(&p, 32, 8000.0).is_err());
}

/// The sampled time-domain wavelet, transformed and scaled by the grid step,
/// reproduces the closed-form gain across the band.
#[test]
fn wavelet_dft_matches_gain() {
    for (fc, sigma, fs, n) in [(1000.0, 200.0, 8192.0, 4096), (3000.0, 750.0, 19_200.0, 4096)] {
        let p = MorletParams::new(fc, sigma).unwrap();
        let w = time_domain_wavelet(&p, n, fs).unwrap();
        let res = fs / n as f64;
        let lo = ((fc - sigma) / res).ceil() as usize;
        let hi = ((fc + sigma) / res).floor() as usize;
        let mut worst: f64 = 0.0;
        for k in lo..=hi {
            let mag = dft_bin(w.values(), k).norm() / fs;
            worst = worst.max(rel_err(mag, morlet_gain(&p, k as f64 * res)));
        }
        assert!(worst < 1e-3, "fc {fc}: {worst}");
    }
}

#[test]
fn spectral_filter_reuse_matches_one_shot() {
    let s = Signal::new(gaussian(1000, 3), 500.0).unwrap();
    let p = MorletParams::new(120.0, 30.0).unwrap();
    let f = SpectralFilter::new(&s);
    assert_eq!(f.apply(&p), wavelet_filter(&s, &p).unwrap());
    assert_eq!(f.apply_real(&p), f.apply(&p).real_part());
}

fn dyadic() -> impl Strategy<Value = f64> {
    (0i64..4_000_000).prop_map(|v| v as f64 / 1024.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gain_is_exactly_symmetric(fc in dyadic(), d in dyadic(), sigma in 1.0f64..2000.0) {
        let p = MorletParams::new(fc + 1.0, sigma).unwrap();
        let c = p.center_freq_hz;
        prop_assert_eq!(morlet_gain(&p, c + d), morlet_gain(&p, c - d));
    }

    #[test]
    fn filter_is_linear(
        seed in 0u64..1000,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        n in 64usize..1500,
    ) {
        let fs = 1000.0;
        let x = gaussian(n, seed);
        let y = gaussian(n, seed + 7919);
        let mix: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let p = MorletParams::new(200.0, 80.0).unwrap();
        let fx = wavelet_filter(&Signal::new(x, fs).unwrap(), &p).unwrap();
        let fy = wavelet_filter(&Signal::new(y, fs).unwrap(), &p).unwrap();
        let fm = wavelet_filter(&Signal::new(mix, fs).unwrap(), &p).unwrap();
        let scale = fm.values().iter().map(|v| v.norm()).fold(1.0, f64::max);
        for ((m, u), v) in fm.values().iter().zip(fx.values()).zip(fy.values()) {
            prop_assert!((m - (u * a + v * b)).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn output_energy_never_exceeds_input(
        seed in 0u64..1000,
        n in 64usize..2000,
        fc in 50.0f64..450.0,
        sigma in 5.0f64..200.0,
    ) {
        let x = gaussian(n, seed);
        let p = MorletParams::new(fc, sigma).unwrap();
        prop_assume!(p.fits(1000.0));
        let y = wavelet_filter(&Signal::new(x.clone(), 1000.0).unwrap(), &p).unwrap().real_part();
        let ex: f64 = x.iter().map(|v| v * v).sum();
        let ey: f64 = y.iter().map(|v| v * v).sum();
        prop_assert!(ey <= ex * (1.0 + 1e-12));
    }
}
