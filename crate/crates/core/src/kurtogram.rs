//! Fast-kurtogram baseline for demodulation band selection.
//!
//! The spectrum is split into dyadic bands (level `k` has `2^k` bands) plus
//! the intermediate thirds levels (`k.6` has `3 * 2^(k-1)` bands), each band is
//! brought back to the time domain by an ideal one-sided band-pass, and the
//! kurtosis of its envelope scores the band. The split is done directly in the
//! frequency domain rather than with a quasi-analytic FIR tree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morlet::SpectralFilter;
use crate::signal::{kurtosis, ComplexSeries, Signal};

pub const DEFAULT_MAX_LEVEL: usize = 7;

/// Bands with less than this share of the record energy are scored zero.
const EMPTY_BAND_ENERGY: f64 = 1e-20;

/// Relative envelope spread below which an envelope counts as constant.
const FLAT_ENVELOPE_SPREAD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KurtogramLevel {
    /// 0, 1, 1.6, 2, 2.6, ...
    pub level: f64,
    pub bandwidth_hz: f64,
    pub kurtosis: Vec<f64>,
}

impl KurtogramLevel {
    pub fn band_count(&self) -> usize {
        self.kurtosis.len()
    }

    pub fn band_center_hz(&self, band: usize) -> f64 {
        (band as f64 + 0.5) * self.bandwidth_hz
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KurtogramResult {
    pub levels: Vec<KurtogramLevel>,
    pub best_level: f64,
    pub best_center_hz: f64,
    pub best_bandwidth_hz: f64,
    pub best_kurtosis: f64,
}

impl KurtogramResult {
    pub fn best_band(&self) -> (f64, f64) {
        (
            self.best_center_hz - 0.5 * self.best_bandwidth_hz,
            self.best_center_hz + 0.5 * self.best_bandwidth_hz,
        )
    }
}

/// Levels and band counts for a decomposition down to `max_level`.
fn level_layout(max_level: usize) -> Vec<(f64, usize)> {
    let mut out = vec![(0.0, 1)];
    for k in 1..=max_level {
        out.push((k as f64, 1 << k));
        if k < max_level {
            out.push((k as f64 + 0.6, 3 << (k - 1)));
        }
    }
    out
}

/// Kurtosis of a band envelope, with zero for empty bands and the lower
/// bound 1 for constant envelopes.
fn band_score(band: &ComplexSeries, total_energy: f64) -> f64 {
    let env = band.modulus();
    let energy: f64 = env.iter().map(|v| v * v).sum();
    if energy <= EMPTY_BAND_ENERGY * total_energy {
        return 0.0;
    }
    let n = env.len() as f64;
    let mean = env.iter().sum::<f64>() / n;
    let var = env.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var.sqrt() <= FLAT_ENVELOPE_SPREAD * mean {
        return 1.0;
    }
    kurtosis(&env).unwrap_or(0.0)
}

/// Computes the kurtogram of `s` down to `max_level`.
pub fn fast_kurtogram(s: &Signal, max_level: usize) -> Result<KurtogramResult> {
    if max_level < 2 {
        return Err(Error::invalid_input("kurtogram needs max_level >= 2"));
    }
    if max_level >= 40 || (1usize << (max_level + 1)) > s.len() / 8 {
        return Err(Error::invalid_input(format!(
            "record of {} samples is too short for level {max_level}",
            s.len()
        )));
    }
    let fs = s.sample_rate_hz();
    let nyquist = 0.5 * fs;
    let filter = SpectralFilter::new(s);
    let total_energy: f64 = 2.0 * s.samples().iter().map(|v| v * v).sum::<f64>();

    let levels: Vec<KurtogramLevel> = level_layout(max_level)
        .into_iter()
        .map(|(level, bands)| {
            let width = nyquist / bands as f64;
            let kurtosis = (0..bands)
                .into_par_iter()
                .map(|b| {
                    let lo = b as f64 * width;
                    let hi = lo + width;
                    band_score(&filter.apply_band(lo, hi), total_energy)
                })
                .collect();
            KurtogramLevel {
                level,
                bandwidth_hz: width,
                kurtosis,
            }
        })
        .collect();

    let mut best = (0usize, 0usize, f64::NEG_INFINITY);
    for (li, lvl) in levels.iter().enumerate() {
        for (bi, &k) in lvl.kurtosis.iter().enumerate() {
            if k > best.2 {
                best = (li, bi, k);
            }
        }
    }
    let lvl = &levels[best.0];
    Ok(KurtogramResult {
        best_level: lvl.level,
        best_center_hz: lvl.band_center_hz(best.1),
        best_bandwidth_hz: lvl.bandwidth_hz,
        best_kurtosis: best.2,
        levels,
    })
}

/// Ideal one-sided band-pass around `center_hz` with total width `bandwidth_hz`.
pub fn band_filter(s: &Signal, center_hz: f64, bandwidth_hz: f64) -> Result<ComplexSeries> {
    let lo = center_hz - 0.5 * bandwidth_hz;
    let hi = center_hz + 0.5 * bandwidth_hz;
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0 && lo >= 0.0 && hi <= 0.5 * s.sample_rate_hz()) {
        return Err(Error::invalid_parameter(format!(
            "band [{lo}, {hi}] Hz is outside [0, {}] Hz",
            0.5 * s.sample_rate_hz()
        )));
    }
    Ok(SpectralFilter::new(s).apply_band(lo, hi))
}
