//! Synthetic vibration records with a known fault period and resonance.
//!
//! A defect is modelled as a train of impacts at the fault period, each one
//! ringing a single lightly damped resonance. Interference tones and white
//! Gaussian noise are added on top; the noise is scaled so that the ratio of
//! deterministic power to noise power equals the requested SNR exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{Signal, MIN_SIGNAL_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub freq_hz: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultSignalSpec {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub fault_freq_hz: f64,
    pub resonance_freq_hz: f64,
    pub damping_ratio: f64,
    pub impulse_amplitude: f64,
    pub noise_snr_db: f64,
    /// Impact timing jitter as a fraction of the period, uniform in `±jitter`.
    pub jitter_frac: f64,
    #[serde(default)]
    pub interference_tones: Vec<Tone>,
}

/// Ground truth returned with every synthetic record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthTruth {
    pub fault_freq_hz: f64,
    /// `sample_rate / fault_freq`, before jitter.
    pub period_samples: f64,
    pub resonance_hz: f64,
    pub impacts: usize,
    pub snr_db: f64,
}

/// The three additive parts of a synthetic record, before mixing.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthComponents {
    pub impacts: Vec<f64>,
    pub tones: Vec<f64>,
    pub noise: Vec<f64>,
    pub impact_count: usize,
}

impl SynthComponents {
    pub fn deterministic(&self) -> Vec<f64> {
        self.impacts.iter().zip(&self.tones).map(|(a, b)| a + b).collect()
    }

    pub fn mixed(&self) -> Vec<f64> {
        self.impacts
            .iter()
            .zip(&self.tones)
            .zip(&self.noise)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }
}

impl FaultSignalSpec {
    pub fn len(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid_input(m));
        let fs = self.sample_rate_hz;
        let finite = [
            fs,
            self.duration_s,
            self.fault_freq_hz,
            self.resonance_freq_hz,
            self.damping_ratio,
            self.impulse_amplitude,
            self.noise_snr_db,
            self.jitter_frac,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("all synthesis parameters must be finite".into());
        }
        if fs <= 0.0 || self.duration_s <= 0.0 {
            return bad("sample rate and duration must be positive".into());
        }
        if self.len() < MIN_SIGNAL_LEN {
            return bad(format!("record would have only {} samples", self.len()));
        }
        if !(self.damping_ratio > 0.0 && self.damping_ratio < 1.0) {
            return bad(format!("damping ratio {} not in (0, 1)", self.damping_ratio));
        }
        let half_band = self.damping_ratio * self.resonance_freq_hz;
        if self.resonance_freq_hz - half_band <= 0.0 || self.resonance_freq_hz + half_band >= 0.5 * fs {
            return bad(format!(
                "resonance {} Hz and its half-power band must sit inside (0, {}) Hz",
                self.resonance_freq_hz,
                0.5 * fs
            ));
        }
        if !(self.fault_freq_hz > 0.0 && self.fault_freq_hz < self.resonance_freq_hz / 5.0) {
            return bad("fault frequency must be positive and below resonance / 5".into());
        }
        if self.duration_s * self.fault_freq_hz < 10.0 {
            return bad("record must contain at least 10 fault periods".into());
        }
        if !(self.jitter_frac >= 0.0 && self.jitter_frac < 0.05) {
            return bad(format!("jitter {} not in [0, 0.05)", self.jitter_frac));
        }
        if self.impulse_amplitude < 0.0 {
            return bad("impulse amplitude must be non-negative".into());
        }
        for t in &self.interference_tones {
            if !(t.freq_hz.is_finite() && t.amplitude.is_finite() && t.freq_hz > 0.0 && t.freq_hz < 0.5 * fs) {
                return bad(format!("interference tone at {} Hz is invalid", t.freq_hz));
            }
        }
        Ok(())
    }

    pub fn period_samples(&self) -> f64 {
        self.sample_rate_hz / self.fault_freq_hz
    }
}

/// Impact train, tones and scaled noise for `spec`, deterministic per seed.
pub fn synth_components(spec: &FaultSignalSpec, seed: u64) -> Result<SynthComponents> {
    spec.validate()?;
    let n = spec.len();
    let fs = spec.sample_rate_hz;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let period = 1.0 / spec.fault_freq_hz;
    let omega_n = 2.0 * PI * spec.resonance_freq_hz;
    let zeta = spec.damping_ratio;
    let decay = zeta * omega_n;
    let omega_d = omega_n * (1.0 - zeta * zeta).sqrt();
    // Ring until the envelope has dropped by 140 dB.
    let ring_s = (1e7f64).ln() / decay;
    let ring_len = (ring_s * fs).ceil() as usize + 1;

    let mut impacts = vec![0.0; n];
    let mut impact_count = 0;
    let start = rng.random::<f64>() * period;
    let duration = n as f64 / fs;
    let mut k = 0usize;
    loop {
        let jitter = spec.jitter_frac * period * (2.0 * rng.random::<f64>() - 1.0);
        let t0 = start + k as f64 * period + jitter;
        k += 1;
        if t0 >= duration {
            break;
        }
        if t0 < 0.0 {
            continue;
        }
        impact_count += 1;
        let first = (t0 * fs).ceil() as usize;
        for (i, slot) in impacts.iter_mut().enumerate().skip(first).take(ring_len) {
            let tau = i as f64 / fs - t0;
            *slot += spec.impulse_amplitude * (-decay * tau).exp() * (omega_d * tau).sin();
        }
    }

    let mut tones = vec![0.0; n];
    for tone in &spec.interference_tones {
        let phase = 2.0 * PI * rng.random::<f64>();
        for (i, slot) in tones.iter_mut().enumerate() {
            *slot += tone.amplitude * (2.0 * PI * tone.freq_hz * i as f64 / fs + phase).sin();
        }
    }

    let mut noise: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let signal_power = impacts
        .iter()
        .zip(&tones)
        .map(|(a, b)| (a + b) * (a + b))
        .sum::<f64>()
        / n as f64;
    let raw_power = noise.iter().map(|v| v * v).sum::<f64>() / n as f64;
    // Without any deterministic content the noise keeps unit variance.
    let target = if signal_power > 0.0 {
        signal_power / 10f64.powf(spec.noise_snr_db / 10.0)
    } else {
        1.0
    };
    let gain = (target / raw_power).sqrt();
    for v in &mut noise {
        *v *= gain;
    }

    Ok(SynthComponents {
        impacts,
        tones,
        noise,
        impact_count,
    })
}

/// A synthetic fault record and its ground truth.
pub fn synth_fault_signal(spec: &FaultSignalSpec, seed: u64) -> Result<(Signal, SynthTruth)> {
    let parts = synth_components(spec, seed)?;
    let signal = Signal::new(parts.mixed(), spec.sample_rate_hz)?;
    let truth = SynthTruth {
        fault_freq_hz: spec.fault_freq_hz,
        period_samples: spec.period_samples(),
        resonance_hz: spec.resonance_freq_hz,
        impacts: parts.impact_count,
        snr_db: spec.noise_snr_db,
    };
    Ok((signal, truth))
}

/// Named parameter sets modelled on belt-conveyor drive measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Pulley bearing: 19.2 kHz sampling, 12.6 Hz outer-race fault.
    ConveyorBearing,
    /// Two-stage gearbox: 8192 Hz sampling, 2.5 s, 4.1 Hz fault.
    ConveyorGearbox,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::ConveyorBearing, Preset::ConveyorGearbox];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::ConveyorBearing => "conveyor-bearing",
            Preset::ConveyorGearbox => "conveyor-gearbox",
        }
    }

    pub fn spec(&self) -> FaultSignalSpec {
        match self {
            Preset::ConveyorBearing => FaultSignalSpec {
                sample_rate_hz: 19_200.0,
                duration_s: 2.0,
                fault_freq_hz: 12.6,
                resonance_freq_hz: 3000.0,
                damping_ratio: 0.05,
                impulse_amplitude: 1.0,
                noise_snr_db: -8.0,
                jitter_frac: 0.005,
                interference_tones: vec![
                    Tone { freq_hz: 1180.0, amplitude: 0.15 },
                    Tone { freq_hz: 1223.3, amplitude: 0.15 },
                ],
            },
            Preset::ConveyorGearbox => FaultSignalSpec {
                sample_rate_hz: 8192.0,
                duration_s: 2.5,
                fault_freq_hz: 4.1,
                resonance_freq_hz: 1800.0,
                damping_ratio: 0.05,
                impulse_amplitude: 1.0,
                noise_snr_db: -6.0,
                jitter_frac: 0.005,
                interference_tones: vec![
                    Tone { freq_hz: 287.0, amplitude: 0.12 },
                    Tone { freq_hz: 318.2, amplitude: 0.12 },
                ],
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown preset '{s}', expected conveyor-bearing or conveyor-gearbox"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_named() {
        for p in Preset::ALL {
            p.spec().validate().unwrap();
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("conveyor".parse::<Preset>().is_err());
    }

    #[test]
    fn invariants_are_enforced() {
        let base = Preset::ConveyorBearing.spec();
        let mut s = base.clone();
        s.fault_freq_hz = 700.0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.duration_s = 0.5;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.resonance_freq_hz = 9500.0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.jitter_frac = 0.05;
        assert!(s.validate().is_err());
        let mut s = base;
        s.damping_ratio = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn length_and_truth() {
        let spec = Preset::ConveyorGearbox.spec();
        let (sig, truth) = synth_fault_signal(&spec, 4).unwrap();
        assert_eq!(sig.len(), (2.5f64 * 8192.0).round() as usize);
        assert_eq!(truth.period_samples, 8192.0 / 4.1);
        assert!(truth.impacts >= 10);
    }

    #[test]
    fn reproducible_per_seed() {
        let spec = Preset::ConveyorBearing.spec();
        let a = synth_fault_signal(&spec, 11).unwrap().0;
        let b = synth_fault_signal(&spec, 11).unwrap().0;
        let c = synth_fault_signal(&spec, 12).unwrap().0;
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
