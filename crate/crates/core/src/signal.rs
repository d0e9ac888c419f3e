//! Signal containers, analytic-signal envelope, squared envelope spectrum and
//! the scalar health indicators computed from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{bin_frequency, positive_bins_end, FftPair};

/// Shortest record accepted anywhere in the crate.
pub const MIN_SIGNAL_LEN: usize = 16;

/// Harmonic count used for ENVSI when the caller has no preference.
pub const DEFAULT_ENVSI_HARMONICS: usize = 10;

/// Default half-width of a harmonic window, in units of the spectral resolution.
pub const DEFAULT_BAND_TOL_BINS: f64 = 1.5;

fn check_rate(sample_rate_hz: f64) -> Result<()> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::invalid_input(format!(
            "sample rate must be positive and finite, got {sample_rate_hz}"
        )));
    }
    Ok(())
}

fn check_len(len: usize) -> Result<()> {
    if len < MIN_SIGNAL_LEN {
        return Err(Error::invalid_input(format!(
            "signal has {len} samples, at least {MIN_SIGNAL_LEN} are required"
        )));
    }
    Ok(())
}

/// A uniformly sampled, real-valued vibration record.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        check_len(samples.len())?;
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid_input(format!("sample {i} is not finite")));
        }
        Ok(Signal {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// A uniformly sampled complex series (analytic signals, filter outputs).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    values: Vec<Complex64>,
    sample_rate_hz: f64,
}

impl ComplexSeries {
    pub fn new(values: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        check_len(values.len())?;
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid_input(format!("value {i} is not finite")));
        }
        Ok(ComplexSeries {
            values,
            sample_rate_hz,
        })
    }

    /// Internal constructor for buffers produced by our own transforms of a
    /// validated input.
    pub(crate) fn from_parts(values: Vec<Complex64>, sample_rate_hz: f64) -> Self {
        ComplexSeries {
            values,
            sample_rate_hz,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// Instantaneous envelope `|z|`.
    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    /// Squared envelope `|z|^2`.
    pub fn squared_modulus(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// The real part as a [`Signal`].
    pub fn to_real_signal(&self) -> Result<Signal> {
        Signal::new(self.real_part(), self.sample_rate_hz)
    }
}

/// One-sided spectrum of the mean-removed squared envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSpectrum {
    pub frequencies_hz: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub resolution_hz: f64,
}

impl EnvelopeSpectrum {
    /// Builds a spectrum whose bin `k` sits at `k * resolution_hz`.
    pub fn from_magnitudes(magnitudes: Vec<f64>, resolution_hz: f64) -> Result<Self> {
        if !(resolution_hz.is_finite() && resolution_hz > 0.0) {
            return Err(Error::invalid_input("resolution must be positive"));
        }
        if magnitudes.len() < 2 {
            return Err(Error::invalid_input("spectrum needs at least two bins"));
        }
        if let Some(i) = magnitudes.iter().position(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::invalid_input(format!(
                "magnitude {i} must be finite and non-negative"
            )));
        }
        let frequencies_hz = (0..magnitudes.len())
            .map(|k| k as f64 * resolution_hz)
            .collect();
        Ok(EnvelopeSpectrum {
            frequencies_hz,
            magnitudes,
            resolution_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn max_frequency_hz(&self) -> f64 {
        *self.frequencies_hz.last().unwrap_or(&0.0)
    }

    /// Index of the bin closest to `freq_hz`, clamped to the spectrum.
    pub fn nearest_bin(&self, freq_hz: f64) -> usize {
        let k = (freq_hz / self.resolution_hz).round();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.magnitudes.len() - 1)
        }
    }
}

/// Analytic signal by one-sided spectral weighting: DC and Nyquist kept,
/// positive bins doubled, negative bins zeroed.
pub fn analytic_signal(s: &Signal) -> ComplexSeries {
    let n = s.len();
    let fft = FftPair::new(n);
    let mut spec = fft.spectrum_of_real(s.samples());
    apply_analytic_weights(&mut spec);
    fft.inverse(&mut spec);
    ComplexSeries::from_parts(spec, s.sample_rate_hz())
}

fn apply_analytic_weights(spec: &mut [Complex64]) {
    let n = spec.len();
    let pos_end = positive_bins_end(n);
    for v in &mut spec[1..pos_end] {
        *v *= 2.0;
    }
    // Even N: bin n/2 is Nyquist and stays as is.
    let neg_start = n / 2 + 1;
    for v in &mut spec[neg_start.max(pos_end)..] {
        *v = Complex64::new(0.0, 0.0);
    }
}

/// Spectrum of the squared envelope `|z|^2` after mean removal, one-sided and
/// scaled by `2/N`. Bin spacing is `fs/N` with no zero padding.
pub fn squared_envelope_spectrum(s: &ComplexSeries) -> EnvelopeSpectrum {
    let n = s.len();
    let fs = s.sample_rate_hz();
    let env = s.squared_modulus();
    let mean = env.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = env.iter().map(|e| e - mean).collect();

    let fft = FftPair::new(n);
    let spec = fft.spectrum_of_real(&centered);
    let scale = 2.0 / n as f64;
    let bins = n / 2 + 1;
    let magnitudes: Vec<f64> = spec[..bins].iter().map(|c| c.norm() * scale).collect();
    let frequencies_hz = (0..bins).map(|k| bin_frequency(k, n, fs)).collect();
    EnvelopeSpectrum {
        frequencies_hz,
        magnitudes,
        resolution_hz: fs / n as f64,
    }
}

/// Non-excess sample kurtosis `E[(x-mu)^4] / E[(x-mu)^2]^2` (Gaussian = 3).
pub fn kurtosis(samples: &[f64]) -> Result<f64> {
    if samples.len() < 4 {
        return Err(Error::invalid_input("kurtosis needs at least 4 samples"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (m2, m4) = samples.iter().fold((0.0, 0.0), |(m2, m4), &x| {
        let d = x - mean;
        let d2 = d * d;
        (m2 + d2, m4 + d2 * d2)
    });
    let m2 = m2 / n;
    let m4 = m4 / n;
    // Relative threshold: a constant offset leaves rounding residue in m2.
    let scale = samples.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m2 <= f64::EPSILON * f64::EPSILON * scale * scale || m2 == 0.0 {
        return Err(Error::degenerate("kurtosis of a zero-variance sequence"));
    }
    Ok(m4 / (m2 * m2))
}

/// [`kurtosis`] of a signal's samples.
pub fn signal_kurtosis(s: &Signal) -> Result<f64> {
    kurtosis(s.samples())
}

/// Bin partition of an envelope spectrum around a fault frequency and its
/// harmonics. Shared by ENVSI, harmonic SNR and the pipeline reports.
#[derive(Debug, Clone)]
pub struct HarmonicWindows {
    /// `true` for bins inside any harmonic window.
    in_window: Vec<bool>,
    /// Last bin (inclusive) of the analysis band; DC is always excluded.
    band_end: usize,
}

impl HarmonicWindows {
    pub fn new(
        ses: &EnvelopeSpectrum,
        fault_freq_hz: f64,
        n_harmonics: usize,
        band_tol_hz: f64,
    ) -> Result<Self> {
        let res = ses.resolution_hz;
        if !(fault_freq_hz.is_finite() && fault_freq_hz > res) {
            return Err(Error::invalid_input(format!(
                "fault frequency {fault_freq_hz} Hz must exceed the resolution {res} Hz"
            )));
        }
        if n_harmonics == 0 {
            return Err(Error::invalid_input("at least one harmonic is required"));
        }
        if !(band_tol_hz.is_finite() && band_tol_hz >= 0.0) {
            return Err(Error::invalid_input("band tolerance must be non-negative"));
        }
        let top = n_harmonics as f64 * fault_freq_hz + band_tol_hz;
        if top > ses.max_frequency_hz() {
            return Err(Error::invalid_input(format!(
                "harmonic window up to {top:.3} Hz exceeds the spectrum limit {:.3} Hz",
                ses.max_frequency_hz()
            )));
        }
        let band_end = ((top / res) + 1e-9).floor() as usize;
        let mut in_window = vec![false; band_end + 1];
        for k in 1..=n_harmonics {
            let centre = k as f64 * fault_freq_hz;
            let lo = ((centre - band_tol_hz) / res).ceil().max(1.0) as usize;
            let hi = ((centre + band_tol_hz) / res).floor() as usize;
            for flag in in_window.iter_mut().take(hi.min(band_end) + 1).skip(lo) {
                *flag = true;
            }
            let nearest = ses.nearest_bin(centre);
            if nearest >= 1 && nearest <= band_end {
                in_window[nearest] = true;
            }
        }
        Ok(HarmonicWindows {
            in_window,
            band_end,
        })
    }

    /// Sum of squared magnitudes (in-window, whole band), DC excluded.
    pub fn energies(&self, ses: &EnvelopeSpectrum) -> (f64, f64) {
        let mut inside = 0.0;
        let mut total = 0.0;
        for k in 1..=self.band_end {
            let e = ses.magnitudes[k] * ses.magnitudes[k];
            total += e;
            if self.in_window[k] {
                inside += e;
            }
        }
        (inside, total)
    }

    pub fn contains(&self, bin: usize) -> bool {
        bin >= 1 && bin <= self.band_end && self.in_window[bin]
    }

    pub fn band_end(&self) -> usize {
        self.band_end
    }
}

/// Envelope-spectrum indicator: share of in-band SES energy that falls in the
/// harmonic windows of `fault_freq_hz`.
pub fn envsi(
    ses: &EnvelopeSpectrum,
    fault_freq_hz: f64,
    n_harmonics: usize,
    band_tol_hz: f64,
) -> Result<f64> {
    let windows = HarmonicWindows::new(ses, fault_freq_hz, n_harmonics, band_tol_hz)?;
    let (inside, total) = windows.energies(ses);
    if total <= 0.0 {
        return Err(Error::degenerate("envelope spectrum has no in-band energy"));
    }
    Ok((inside / total).clamp(0.0, 1.0))
}

/// [`envsi`] with the default window half-width of 1.5 bins.
pub fn envsi_default(ses: &EnvelopeSpectrum, fault_freq_hz: f64, n_harmonics: usize) -> Result<f64> {
    envsi(
        ses,
        fault_freq_hz,
        n_harmonics,
        DEFAULT_BAND_TOL_BINS * ses.resolution_hz,
    )
}

/// Harmonic-to-residual energy ratio in dB over the ENVSI band.
///
/// Returns `f64::INFINITY` when every in-band bin outside the harmonic
/// windows is exactly zero.
pub fn harmonic_snr(ses: &EnvelopeSpectrum, fault_freq_hz: f64, n_harmonics: usize) -> Result<f64> {
    let windows = HarmonicWindows::new(
        ses,
        fault_freq_hz,
        n_harmonics,
        DEFAULT_BAND_TOL_BINS * ses.resolution_hz,
    )?;
    let (inside, total) = windows.energies(ses);
    let outside = total - inside;
    if total <= 0.0 {
        return Err(Error::degenerate("envelope spectrum has no in-band energy"));
    }
    if outside <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (inside / outside).log10())
}
