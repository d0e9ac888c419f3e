//! End-to-end diagnosis: COA tunes the Morlet filter for maximum correlated
//! kurtosis, the fault period is refined from the incumbent's envelope, and
//! the squared envelope spectrum of the optimal output is summarised.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::ck::{correlated_kurtosis, period_samples, refine_period, CkSpec, DEFAULT_SHIFT_ORDER};
use crate::coa::{optimize, CoaConfig, HookOutcome, Population};
use crate::error::{Error, Result};
use crate::morlet::{MorletParams, SpectralFilter};
use crate::signal::{
    analytic_signal, envsi_default, harmonic_snr, kurtosis, ComplexSeries, EnvelopeSpectrum,
    HarmonicWindows, Signal, DEFAULT_BAND_TOL_BINS, DEFAULT_ENVSI_HARMONICS,
};

/// Optimizer settings for the two-dimensional `(f_c, sigma)` search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub population_size: usize,
    pub max_iterations: usize,
    pub intake_coeff: f64,
    pub food_factor: f64,
    pub temp_mu: f64,
    pub temp_sigma: f64,
    pub seed: u64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            population_size: 30,
            max_iterations: 50,
            intake_coeff: 0.2,
            food_factor: 3.0,
            temp_mu: 25.0,
            temp_sigma: 3.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub optimizer: OptimizerSettings,
    /// Centre-frequency search interval; `[fs/50, 0.45 fs]` when absent.
    pub fc_bounds_hz: Option<[f64; 2]>,
    /// Bandwidth search interval; `[fs/200, fs/8]` when absent.
    pub sigma_bounds_hz: Option<[f64; 2]>,
    pub shift_order: usize,
    pub initial_fault_freq_hz: f64,
    pub refine_period: bool,
    pub refine_search_frac: f64,
    pub envsi_harmonics: usize,
    /// A harmonic is reported when its peak exceeds this multiple of the
    /// median in-band SES magnitude.
    pub harmonic_threshold: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            optimizer: OptimizerSettings::default(),
            fc_bounds_hz: None,
            sigma_bounds_hz: None,
            shift_order: DEFAULT_SHIFT_ORDER,
            initial_fault_freq_hz: 0.0,
            refine_period: true,
            refine_search_frac: 0.05,
            envsi_harmonics: DEFAULT_ENVSI_HARMONICS,
            harmonic_threshold: 4.0,
        }
    }
}

impl PipelineConfig {
    pub fn for_fault(initial_fault_freq_hz: f64, seed: u64) -> Self {
        let mut cfg = PipelineConfig {
            initial_fault_freq_hz,
            ..Default::default()
        };
        cfg.optimizer.seed = seed;
        cfg
    }

    pub fn fc_bounds(&self, fs: f64) -> [f64; 2] {
        self.fc_bounds_hz.unwrap_or([fs / 50.0, 0.45 * fs])
    }

    pub fn sigma_bounds(&self, fs: f64) -> [f64; 2] {
        self.sigma_bounds_hz.unwrap_or([fs / 200.0, fs / 8.0])
    }

    /// Checks the configuration against a record.
    pub fn validate(&self, s: &Signal) -> Result<()> {
        let fs = s.sample_rate_hz();
        let nyquist = 0.5 * fs;
        let [fc_lo, fc_hi] = self.fc_bounds(fs);
        let [sg_lo, sg_hi] = self.sigma_bounds(fs);
        if !(fc_lo > 0.0 && fc_lo < fc_hi && fc_hi < nyquist) {
            return Err(Error::config(format!(
                "centre-frequency bounds [{fc_lo}, {fc_hi}] must lie inside (0, {nyquist})"
            )));
        }
        if !(sg_lo > 0.0 && sg_lo < sg_hi && sg_hi.is_finite()) {
            return Err(Error::config(format!(
                "bandwidth bounds [{sg_lo}, {sg_hi}] must be positive and increasing"
            )));
        }
        // The narrowest band admits the widest range of centres.
        let lo = fc_lo.max(0.5 * sg_lo);
        let hi = fc_hi.min(nyquist - 0.5 * sg_lo);
        if lo > hi {
            return Err(Error::config(
                "no (f_c, sigma) in the bounds keeps the band inside [0, fs/2]",
            ));
        }
        if self.shift_order == 0 {
            return Err(Error::config("shift order must be at least 1"));
        }
        if !(self.initial_fault_freq_hz.is_finite() && self.initial_fault_freq_hz > 2.0 / s.duration_s()) {
            return Err(Error::config(format!(
                "fault frequency {} Hz leaves fewer than two periods in {:.3} s",
                self.initial_fault_freq_hz,
                s.duration_s()
            )));
        }
        if self.refine_period && !(self.refine_search_frac > 0.0 && self.refine_search_frac <= 0.1) {
            return Err(Error::config("refine_search_frac must lie in (0, 0.1]"));
        }
        if self.envsi_harmonics == 0 {
            return Err(Error::config("envsi_harmonics must be at least 1"));
        }
        if !(self.harmonic_threshold > 1.0) {
            return Err(Error::config("harmonic_threshold must exceed 1"));
        }
        Ok(())
    }

    pub fn coa_config(&self, fs: f64) -> CoaConfig {
        let [fc_lo, fc_hi] = self.fc_bounds(fs);
        let [sg_lo, sg_hi] = self.sigma_bounds(fs);
        let o = &self.optimizer;
        CoaConfig {
            population_size: o.population_size,
            max_iterations: o.max_iterations,
            lower_bounds: vec![fc_lo, sg_lo],
            upper_bounds: vec![fc_hi, sg_hi],
            intake_coeff: o.intake_coeff,
            food_factor: o.food_factor,
            temp_mu: o.temp_mu,
            temp_sigma: o.temp_sigma,
            rng_seed: o.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub order: usize,
    pub freq_hz: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosisReport {
    pub optimal_params: MorletParams,
    pub initial_period_samples: f64,
    pub final_period_samples: f64,
    /// `fs / final_period_samples`; all spectral indicators use it.
    pub fault_freq_hz: f64,
    pub best_ck: f64,
    pub ck_history: Vec<f64>,
    pub evaluations: usize,
    pub kurtosis_raw: f64,
    pub kurtosis_processed: f64,
    pub envsi_raw: f64,
    pub envsi_processed: f64,
    /// Harmonic SNR in dB; infinite values serialize as `null`.
    pub snr_raw_db: f64,
    pub snr_processed_db: f64,
    pub harmonics: Vec<Harmonic>,
    #[serde(skip)]
    pub ses: EnvelopeSpectrum,
    #[serde(skip)]
    pub ses_raw: EnvelopeSpectrum,
    #[serde(skip)]
    pub processed: ComplexSeries,
}

/// Peaks of the SES near the first `max_order` multiples of `fault_freq_hz`.
///
/// Order `k` is reported when the largest bin within `±window_hz` of
/// `k * fault_freq_hz` (the nearest bin always included) exceeds
/// `threshold_ratio` times the median magnitude over `(0, max_order f + window]`.
pub fn detect_harmonics(
    ses: &EnvelopeSpectrum,
    fault_freq_hz: f64,
    max_order: usize,
    window_hz: f64,
    threshold_ratio: f64,
) -> Result<Vec<Harmonic>> {
    if !(threshold_ratio > 1.0) {
        return Err(Error::invalid_input("threshold ratio must exceed 1"));
    }
    // Validates the remaining preconditions and fixes the band.
    let band = HarmonicWindows::new(ses, fault_freq_hz, max_order, window_hz)?;
    let mut floor: Vec<f64> = ses.magnitudes[1..=band.band_end()].to_vec();
    floor.sort_by(|a, b| a.total_cmp(b));
    let median = if floor.len() % 2 == 1 {
        floor[floor.len() / 2]
    } else {
        0.5 * (floor[floor.len() / 2 - 1] + floor[floor.len() / 2])
    };
    let res = ses.resolution_hz;
    let mut found = Vec::new();
    for k in 1..=max_order {
        let centre = k as f64 * fault_freq_hz;
        let nearest = ses.nearest_bin(centre);
        let lo = (((centre - window_hz) / res).ceil().max(1.0) as usize).min(nearest);
        let hi = (((centre + window_hz) / res).floor() as usize)
            .max(nearest)
            .min(band.band_end());
        let (bin, mag) = (lo..=hi)
            .map(|b| (b, ses.magnitudes[b]))
            .fold((nearest, f64::NEG_INFINITY), |acc, (b, m)| if m > acc.1 { (b, m) } else { acc });
        if mag > threshold_ratio * median {
            found.push(Harmonic {
                order: k,
                freq_hz: ses.frequencies_hz[bin],
                magnitude: mag,
            });
        }
    }
    Ok(found)
}

/// CK fitness of one `(f_c, sigma)` candidate; infeasible bands score `-inf`.
fn candidate_ck(filter: &SpectralFilter, x: &[f64], spec: &CkSpec) -> f64 {
    let p = MorletParams {
        center_freq_hz: x[0],
        bandwidth_hz: x[1],
    };
    if !p.fits(filter.sample_rate_hz()) {
        return f64::NEG_INFINITY;
    }
    correlated_kurtosis(&filter.apply_real(&p), spec).unwrap_or(f64::NEG_INFINITY)
}

/// Runs the full diagnosis on `s`.
pub fn diagnose(s: &Signal, cfg: &PipelineConfig) -> Result<DiagnosisReport> {
    cfg.validate(s)?;
    let fs = s.sample_rate_hz();
    let coa = cfg.coa_config(fs);
    coa.validate()?;

    let initial_period = period_samples(fs, 1.0 / cfg.initial_fault_freq_hz)?;
    CkSpec::new(cfg.shift_order, initial_period)
        .and_then(|spec| spec.check_len(s.len()))
        .map_err(|e| Error::config(e.to_string()))?;

    let filter = SpectralFilter::new(s);
    let period_bits = AtomicU64::new(initial_period.to_bits());
    let current_spec = || CkSpec {
        shift_order: cfg.shift_order,
        period_samples: f64::from_bits(period_bits.load(Ordering::Relaxed)),
    };
    let fitness = |x: &[f64]| candidate_ck(&filter, x, &current_spec());

    let hook = |pop: &Population| -> HookOutcome {
        if !cfg.refine_period {
            return HookOutcome::Unchanged;
        }
        let current = current_spec();
        let best = MorletParams {
            center_freq_hz: pop.best_position[0],
            bandwidth_hz: pop.best_position[1],
        };
        let refined = match refine_period(&filter.apply(&best), current.period_samples, cfg.refine_search_frac) {
            Ok(t) => t,
            Err(_) => return HookOutcome::Unchanged,
        };
        // Cumulative drift stays within one search window of the start.
        if (refined - initial_period).abs() > cfg.refine_search_frac * initial_period {
            return HookOutcome::Unchanged;
        }
        let proposal = CkSpec {
            period_samples: refined,
            ..current
        };
        if proposal.lag() == current.lag() {
            period_bits.store(refined.to_bits(), Ordering::Relaxed);
            return HookOutcome::Unchanged;
        }
        // A new lag changes the objective: keep it only if the incumbent
        // scores at least as well under it.
        let rescored = candidate_ck(&filter, &pop.best_position, &proposal);
        if rescored >= pop.best_fitness {
            period_bits.store(refined.to_bits(), Ordering::Relaxed);
            HookOutcome::Rescored {
                best_fitness: rescored,
                evaluations: 1,
            }
        } else {
            HookOutcome::Unchanged
        }
    };

    let result = optimize(&coa, &fitness, hook)?;
    let final_period = f64::from_bits(period_bits.load(Ordering::Relaxed));
    let optimal_params = MorletParams {
        center_freq_hz: result.best_position[0],
        bandwidth_hz: result.best_position[1],
    };

    let processed = filter.apply(&optimal_params);
    let processed_real = processed.real_part();
    let ses = crate::signal::squared_envelope_spectrum(&processed);
    let ses_raw = crate::signal::squared_envelope_spectrum(&analytic_signal(s));
    let fault_freq_hz = fs / final_period;
    let n_harm = cfg.envsi_harmonics;

    let harmonics = detect_harmonics(
        &ses,
        fault_freq_hz,
        n_harm,
        DEFAULT_BAND_TOL_BINS * ses.resolution_hz,
        cfg.harmonic_threshold,
    )?;

    Ok(DiagnosisReport {
        optimal_params,
        initial_period_samples: initial_period,
        final_period_samples: final_period,
        fault_freq_hz,
        best_ck: result.best_fitness,
        ck_history: result.fitness_history,
        evaluations: result.evaluations,
        kurtosis_raw: kurtosis(s.samples())?,
        kurtosis_processed: kurtosis(&processed_real)?,
        envsi_raw: envsi_default(&ses_raw, fault_freq_hz, n_harm)?,
        envsi_processed: envsi_default(&ses, fault_freq_hz, n_harm)?,
        snr_raw_db: harmonic_snr(&ses_raw, fault_freq_hz, n_harm)?,
        snr_processed_db: harmonic_snr(&ses, fault_freq_hz, n_harm)?,
        harmonics,
        ses,
        ses_raw,
        processed,
    })
}
