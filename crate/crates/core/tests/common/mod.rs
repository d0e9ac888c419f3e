//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()
}

/// Single DFT bin by direct summation, phase reduced modulo N.
pub fn dft_bin<T: Copy + Into<Complex64>>(x: &[T], k: usize) -> Complex64 {
    let n = x.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in x.iter().enumerate() {
        let phase = -2.0 * PI * ((k * i) % n) as f64 / n as f64;
        acc += (*v).into() * Complex64::from_polar(1.0, phase);
    }
    acc
}

/// Correlated kurtosis by explicit nested loops with a zero boundary.
pub fn ck_oracle(y: &[f64], m: usize, t: usize) -> f64 {
    let at = |i: isize| if i < 0 { 0.0 } else { y[i as usize] };
    let mut num = 0.0;
    for n in 0..y.len() {
        let mut p = 1.0;
        for k in 0..=m {
            p *= at(n as isize - (k * t) as isize);
        }
        num += p * p;
    }
    let mut energy = 0.0;
    for v in y {
        energy += v * v;
    }
    let mut den = 1.0;
    for _ in 0..=m {
        den *= energy;
    }
    num / den
}

/// Two-pass kurtosis straight from the definition.
pub fn kurtosis_oracle(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2)
}

/// Membership of bin `k` in any harmonic window, tested harmonic by harmonic.
pub fn in_harmonic_window(k: usize, res: f64, f: f64, n: usize, tol: f64) -> bool {
    (1..=n).any(|h| {
        let c = h as f64 * f;
        (k as f64 * res - c).abs() <= tol + 1e-9 * res || k == (c / res).round() as usize
    })
}

/// In-window and total SES energy over bins `1..=floor((n f + tol) / res)`.
pub fn window_energies(mags: &[f64], res: f64, f: f64, n: usize, tol: f64) -> (f64, f64) {
    let end = (((n as f64 * f + tol) / res) + 1e-9).floor() as usize;
    let mut inside = 0.0;
    let mut total = 0.0;
    for (k, m) in mags.iter().enumerate().take(end + 1).skip(1) {
        total += m * m;
        if in_harmonic_window(k, res, f, n, tol) {
            inside += m * m;
        }
    }
    (inside, total)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Peak amplitude of a sampled sinusoid, from its DFT bin.
pub fn tone_amplitude(x: &[f64], bin: usize) -> f64 {
    2.0 * dft_bin(x, bin).norm() / x.len() as f64
}
