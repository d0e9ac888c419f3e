//! Morlet wavelet band-pass filter applied in the frequency domain.
//!
//! The filter gain is the Fourier transform of the Morlet wavelet
//! `c * exp(-sigma^2 t^2) * exp(j 2 pi f_c t)` with `c = sigma / sqrt(pi)`,
//! which is the unit-peak Gaussian `exp(-(pi^2 / sigma^2) (f - f_c)^2)`.
//! Filtering multiplies the positive-frequency half of the input spectrum by
//! that gain and discards DC and negative frequencies, so the output is an
//! analytic band-limited series: its real part is the filtered waveform and
//! its modulus the envelope.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{bin_frequency, positive_bins_end, FftPair};
use crate::signal::{ComplexSeries, Signal};

/// Centre frequency and bandwidth of a Morlet filter, both in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorletParams {
    pub center_freq_hz: f64,
    pub bandwidth_hz: f64,
}

impl MorletParams {
    pub fn new(center_freq_hz: f64, bandwidth_hz: f64) -> Result<Self> {
        let p = MorletParams {
            center_freq_hz,
            bandwidth_hz,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return Err(Error::invalid_parameter(format!(
                "bandwidth must be positive, got {}",
                self.bandwidth_hz
            )));
        }
        if !self.center_freq_hz.is_finite() {
            return Err(Error::invalid_parameter("centre frequency is not finite"));
        }
        Ok(())
    }

    /// Nominal pass band `[f_c - sigma/2, f_c + sigma/2]`.
    pub fn band(&self) -> (f64, f64) {
        let half = 0.5 * self.bandwidth_hz;
        (self.center_freq_hz - half, self.center_freq_hz + half)
    }

    /// Whether the nominal band lies inside `[0, fs/2]`.
    pub fn fits(&self, sample_rate_hz: f64) -> bool {
        let (lo, hi) = self.band();
        self.bandwidth_hz > 0.0 && lo >= 0.0 && hi <= 0.5 * sample_rate_hz
    }

    pub fn check_band(&self, sample_rate_hz: f64) -> Result<()> {
        self.validate()?;
        if !self.fits(sample_rate_hz) {
            let (lo, hi) = self.band();
            return Err(Error::invalid_parameter(format!(
                "band [{lo:.3}, {hi:.3}] Hz is outside [0, {:.3}] Hz",
                0.5 * sample_rate_hz
            )));
        }
        Ok(())
    }
}

/// Frequency response of the Morlet wavelet at `f_hz`; exactly 1 at `f_c`.
#[inline]
pub fn morlet_gain(p: &MorletParams, f_hz: f64) -> f64 {
    let d = f_hz - p.center_freq_hz;
    (-(PI * PI) / (p.bandwidth_hz * p.bandwidth_hz) * d * d).exp()
}

/// Filters `s` through the Morlet band-pass described by `p`.
pub fn wavelet_filter(s: &Signal, p: &MorletParams) -> Result<ComplexSeries> {
    p.check_band(s.sample_rate_hz())?;
    let filter = SpectralFilter::new(s);
    Ok(filter.apply(p))
}

/// Writes the one-sided Morlet-weighted copy of `spectrum` into `out`.
///
/// Positive bins get `2 * gain`, the Nyquist bin (even N) gets `gain`, DC and
/// negative bins are zeroed. The factor two makes the real part of the inverse
/// transform carry the full filtered amplitude.
pub(crate) fn weight_spectrum(
    spectrum: &[Complex64],
    p: &MorletParams,
    fs: f64,
    out: &mut [Complex64],
) {
    let n = spectrum.len();
    let zero = Complex64::new(0.0, 0.0);
    out.fill(zero);
    let pos_end = positive_bins_end(n);
    for k in 1..pos_end {
        let g = morlet_gain(p, bin_frequency(k, n, fs));
        out[k] = spectrum[k] * (2.0 * g);
    }
    if n % 2 == 0 {
        let k = n / 2;
        out[k] = spectrum[k] * morlet_gain(p, bin_frequency(k, n, fs));
    }
}

/// A signal with its spectrum precomputed, for evaluating many filters on the
/// same record.
#[derive(Clone)]
pub struct SpectralFilter {
    spectrum: Vec<Complex64>,
    sample_rate_hz: f64,
    fft: FftPair,
}

impl SpectralFilter {
    pub fn new(s: &Signal) -> Self {
        let fft = FftPair::new(s.len());
        let spectrum = fft.spectrum_of_real(s.samples());
        SpectralFilter {
            spectrum,
            sample_rate_hz: s.sample_rate_hz(),
            fft,
        }
    }

    pub fn len(&self) -> usize {
        self.spectrum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectrum.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Morlet-filtered analytic output. Band feasibility is the caller's job.
    pub fn apply(&self, p: &MorletParams) -> ComplexSeries {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.spectrum.len()];
        weight_spectrum(&self.spectrum, p, self.sample_rate_hz, &mut buf);
        self.fft.inverse(&mut buf);
        ComplexSeries::from_parts(buf, self.sample_rate_hz)
    }

    /// Real part of [`SpectralFilter::apply`].
    pub fn apply_real(&self, p: &MorletParams) -> Vec<f64> {
        self.apply(p).real_part()
    }

    /// Ideal one-sided band-pass keeping bins with `lo <= f <= hi`.
    ///
    /// Uses the same weighting convention as the analytic signal: DC and
    /// Nyquist unscaled, positive bins doubled.
    pub fn apply_band(&self, lo_hz: f64, hi_hz: f64) -> ComplexSeries {
        let n = self.spectrum.len();
        let fs = self.sample_rate_hz;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let pos_end = positive_bins_end(n);
        let inside = |k: usize| {
            let f = bin_frequency(k, n, fs);
            f >= lo_hz && f <= hi_hz
        };
        if inside(0) {
            buf[0] = self.spectrum[0];
        }
        for k in 1..pos_end {
            if inside(k) {
                buf[k] = self.spectrum[k] * 2.0;
            }
        }
        if n % 2 == 0 && inside(n / 2) {
            buf[n / 2] = self.spectrum[n / 2];
        }
        self.fft.inverse(&mut buf);
        ComplexSeries::from_parts(buf, fs)
    }
}

/// Samples the complex Morlet wavelet on the grid `t_i = (i - n/2) / fs`.
///
/// Only used to cross-check [`morlet_gain`]; the filter itself never touches
/// the time-domain wavelet.
pub fn time_domain_wavelet(p: &MorletParams, n: usize, fs: f64) -> Result<ComplexSeries> {
    p.validate()?;
    if n < 64 {
        return Err(Error::invalid_input(format!(
            "wavelet grid needs at least 64 points, got {n}"
        )));
    }
    let sigma = p.bandwidth_hz;
    let c = sigma / PI.sqrt();
    let centre = (n / 2) as f64;
    let values = (0..n)
        .map(|i| {
            let t = (i as f64 - centre) / fs;
            let carrier = Complex64::new(0.0, 2.0 * PI * p.center_freq_hz * t).exp();
            carrier * (c * (-sigma * sigma * t * t).exp())
        })
        .collect();
    ComplexSeries::new(values, fs)
}
