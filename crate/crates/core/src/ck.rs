//! Correlated kurtosis and fault-period handling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::ComplexSeries;

/// Shift order used when none is configured.
pub const DEFAULT_SHIFT_ORDER: usize = 1;

/// Minimum normalised envelope autocorrelation for a period peak to be trusted.
pub const REFINE_MIN_CORRELATION: f64 = 0.1;

/// Shift order `M` and fault period in samples `T_s`.
///
/// The period is kept fractional and rounded to the nearest lag when CK is
/// evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkSpec {
    pub shift_order: usize,
    pub period_samples: f64,
}

impl CkSpec {
    pub fn new(shift_order: usize, period_samples: f64) -> Result<Self> {
        if shift_order == 0 {
            return Err(Error::invalid_parameter("shift order must be at least 1"));
        }
        if !(period_samples.is_finite() && period_samples >= 2.0) {
            return Err(Error::invalid_parameter(format!(
                "period must be at least 2 samples, got {period_samples}"
            )));
        }
        Ok(CkSpec {
            shift_order,
            period_samples,
        })
    }

    /// Integer lag used in the lag products.
    pub fn lag(&self) -> usize {
        self.period_samples.round() as usize
    }

    /// Checks `M * round(T_s) < len`.
    pub fn check_len(&self, len: usize) -> Result<()> {
        if self.shift_order * self.lag() >= len {
            return Err(Error::invalid_input(format!(
                "shift order {} times lag {} does not fit in {len} samples",
                self.shift_order,
                self.lag()
            )));
        }
        Ok(())
    }
}

/// Number of samples per fault period, `fs * T`.
pub fn period_samples(fs_hz: f64, fault_period_s: f64) -> Result<f64> {
    if !(fs_hz.is_finite() && fs_hz > 0.0 && fault_period_s.is_finite() && fault_period_s > 0.0) {
        return Err(Error::invalid_input(format!(
            "sample rate ({fs_hz}) and fault period ({fault_period_s}) must be positive"
        )));
    }
    Ok(fs_hz * fault_period_s)
}

/// Correlated kurtosis of `y` at shift order `M` and lag `T = round(T_s)`:
///
/// `sum_n (prod_{m=0..M} y[n - m T])^2 / (sum_n y[n]^2)^(M+1)`
///
/// Samples before the start of the record count as zero, so only
/// `n >= M * T` contributes to the numerator.
pub fn correlated_kurtosis(y: &[f64], spec: &CkSpec) -> Result<f64> {
    spec.check_len(y.len())?;
    let energy: f64 = y.iter().map(|v| v * v).sum();
    if !(energy > 0.0) {
        return Err(Error::degenerate("correlated kurtosis of a zero-energy signal"));
    }
    let lag = spec.lag();
    let m = spec.shift_order;
    let numerator: f64 = if m == 1 {
        y[lag..]
            .iter()
            .zip(y)
            .map(|(a, b)| {
                let p = a * b;
                p * p
            })
            .sum()
    } else {
        (m * lag..y.len())
            .map(|n| {
                let p: f64 = (0..=m).map(|k| y[n - k * lag]).product();
                p * p
            })
            .sum()
    };
    Ok(numerator / energy.powi(m as i32 + 1))
}

/// Refines a fault-period estimate from the envelope autocorrelation.
///
/// Searches the unbiased autocorrelation of the mean-removed squared envelope
/// `|filtered|^2` over lags in `[t_s (1 - frac), t_s (1 + frac)]`. The maximum
/// is accepted only if it is interior to the window and its normalised
/// correlation reaches [`REFINE_MIN_CORRELATION`]; its position is then
/// refined by a parabola through the neighbouring lags. Otherwise the estimate
/// comes back unchanged.
pub fn refine_period(filtered: &ComplexSeries, t_s_estimate: f64, search_frac: f64) -> Result<f64> {
    if !(search_frac > 0.0 && search_frac <= 0.1) {
        return Err(Error::invalid_input(format!(
            "search fraction must lie in (0, 0.1], got {search_frac}"
        )));
    }
    let n = filtered.len();
    if !(t_s_estimate.is_finite() && t_s_estimate > 0.0) {
        return Err(Error::invalid_input("period estimate must be positive"));
    }
    if t_s_estimate * (1.0 + search_frac) >= n as f64 / 3.0 {
        return Err(Error::invalid_input(format!(
            "period window up to {:.1} samples needs a record longer than {n} / 3",
            t_s_estimate * (1.0 + search_frac)
        )));
    }
    let lo = (t_s_estimate * (1.0 - search_frac)).ceil().max(1.0) as usize;
    let hi = (t_s_estimate * (1.0 + search_frac)).floor() as usize;
    if lo > hi {
        return Err(Error::invalid_input("period search window is empty"));
    }

    let env = filtered.squared_modulus();
    let mean = env.iter().sum::<f64>() / n as f64;
    let e: Vec<f64> = env.iter().map(|v| v - mean).collect();
    let r0 = e.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if !(r0 > 0.0) {
        return Ok(t_s_estimate);
    }

    let acf = |lag: usize| -> f64 {
        let s: f64 = e[lag..].iter().zip(&e).map(|(a, b)| a * b).sum();
        s / (n - lag) as f64
    };
    let values: Vec<f64> = (lo..=hi).map(acf).collect();
    let (best_idx, best) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    if best_idx == 0 || best_idx + 1 == values.len() {
        return Ok(t_s_estimate);
    }
    if best / r0 < REFINE_MIN_CORRELATION {
        return Ok(t_s_estimate);
    }
    let (left, right) = (values[best_idx - 1], values[best_idx + 1]);
    let curvature = left - 2.0 * best + right;
    let offset = if curvature < 0.0 {
        (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    Ok((lo + best_idx) as f64 + offset)
}
