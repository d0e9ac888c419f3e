//! Python bindings for `wavecoa_core`.
//!
//! Records cross the boundary as lists of floats plus a sample rate.

use std::path::PathBuf;
use std::sync::Mutex;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wavecoa_core::ck::{correlated_kurtosis as ck_core, refine_period as refine_core, CkSpec};
use wavecoa_core::coa::{maximize, CoaConfig};
use wavecoa_core::io::{read_signal as read_core, SignalFormat};
use wavecoa_core::kurtogram::{band_filter, fast_kurtogram};
use wavecoa_core::morlet::{morlet_gain as gain_core, wavelet_filter as filter_core, MorletParams};
use wavecoa_core::pipeline::{diagnose as diagnose_core, DiagnosisReport as CoreReport, PipelineConfig};
use wavecoa_core::signal::{
    analytic_signal, envsi_default, harmonic_snr, kurtosis as kurtosis_core, squared_envelope_spectrum,
    EnvelopeSpectrum as CoreSpectrum, Signal,
};
use wavecoa_core::synth::{synth_fault_signal, Preset};
use wavecoa_core::Error;

create_exception!(wavecoa, WavecoaError, PyValueError, "Base class for wavecoa errors.");
create_exception!(wavecoa, ConfigError, WavecoaError, "Invalid configuration or parameters.");
create_exception!(wavecoa, DataError, WavecoaError, "The data cannot be analysed.");

fn to_py(e: Error) -> PyErr {
    if e.is_data_error() {
        DataError::new_err(e.to_string())
    } else {
        ConfigError::new_err(e.to_string())
    }
}

fn signal(samples: Vec<f64>, fs: f64) -> PyResult<Signal> {
    Signal::new(samples, fs).map_err(to_py)
}

/// Squared envelope spectrum with its harmonic indicators.
#[pyclass(frozen, name = "EnvelopeSpectrum")]
struct PyEnvelopeSpectrum {
    inner: CoreSpectrum,
}

#[pymethods]
impl PyEnvelopeSpectrum {
    #[getter]
    fn frequencies_hz(&self) -> Vec<f64> {
        self.inner.frequencies_hz.clone()
    }

    #[getter]
    fn magnitudes(&self) -> Vec<f64> {
        self.inner.magnitudes.clone()
    }

    #[getter]
    fn resolution_hz(&self) -> f64 {
        self.inner.resolution_hz
    }

    #[pyo3(signature = (fault_freq_hz, n_harmonics = 10))]
    fn envsi(&self, fault_freq_hz: f64, n_harmonics: usize) -> PyResult<f64> {
        envsi_default(&self.inner, fault_freq_hz, n_harmonics).map_err(to_py)
    }

    #[pyo3(signature = (fault_freq_hz, n_harmonics = 10))]
    fn harmonic_snr(&self, fault_freq_hz: f64, n_harmonics: usize) -> PyResult<f64> {
        harmonic_snr(&self.inner, fault_freq_hz, n_harmonics).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Result of [`diagnose`].
#[pyclass(frozen, name = "DiagnosisReport")]
struct PyDiagnosisReport {
    inner: CoreReport,
}

#[pymethods]
impl PyDiagnosisReport {
    #[getter]
    fn center_freq_hz(&self) -> f64 {
        self.inner.optimal_params.center_freq_hz
    }

    #[getter]
    fn bandwidth_hz(&self) -> f64 {
        self.inner.optimal_params.bandwidth_hz
    }

    #[getter]
    fn fault_freq_hz(&self) -> f64 {
        self.inner.fault_freq_hz
    }

    #[getter]
    fn period_samples(&self) -> f64 {
        self.inner.final_period_samples
    }

    #[getter]
    fn best_ck(&self) -> f64 {
        self.inner.best_ck
    }

    #[getter]
    fn ck_history(&self) -> Vec<f64> {
        self.inner.ck_history.clone()
    }

    #[getter]
    fn evaluations(&self) -> usize {
        self.inner.evaluations
    }

    #[getter]
    fn kurtosis_raw(&self) -> f64 {
        self.inner.kurtosis_raw
    }

    #[getter]
    fn kurtosis_processed(&self) -> f64 {
        self.inner.kurtosis_processed
    }

    #[getter]
    fn envsi_raw(&self) -> f64 {
        self.inner.envsi_raw
    }

    #[getter]
    fn envsi_processed(&self) -> f64 {
        self.inner.envsi_processed
    }

    /// `(order, freq_hz, magnitude)` of each detected harmonic.
    #[getter]
    fn harmonics(&self) -> Vec<(usize, f64, f64)> {
        self.inner
            .harmonics
            .iter()
            .map(|h| (h.order, h.freq_hz, h.magnitude))
            .collect()
    }

    #[getter]
    fn processed(&self) -> Vec<f64> {
        self.inner.processed.real_part()
    }

    #[getter]
    fn envelope(&self) -> Vec<f64> {
        self.inner.processed.modulus()
    }

    #[getter]
    fn ses(&self) -> PyEnvelopeSpectrum {
        PyEnvelopeSpectrum {
            inner: self.inner.ses.clone(),
        }
    }

    /// The report as JSON text (without the waveform and spectra).
    fn to_json(&self) -> PyResult<String> {
        serde_json_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "DiagnosisReport(f_c={:.2}, sigma={:.2}, fault={:.4}, envsi {:.4} -> {:.4})",
            self.inner.optimal_params.center_freq_hz,
            self.inner.optimal_params.bandwidth_hz,
            self.inner.fault_freq_hz,
            self.inner.envsi_raw,
            self.inner.envsi_processed
        )
    }
}

fn serde_json_string(r: &CoreReport) -> PyResult<String> {
    serde_json::to_string(r).map_err(|e| WavecoaError::new_err(e.to_string()))
}

/// Reads a CSV or WAV record; returns `(samples, sample_rate_hz)`.
#[pyfunction]
#[pyo3(signature = (path, format = None, channel = 0, rate_hz = None))]
fn read_signal(path: PathBuf, format: Option<&str>, channel: usize, rate_hz: Option<f64>) -> PyResult<(Vec<f64>, f64)> {
    let format = match format {
        Some(f) => f.parse().map_err(to_py)?,
        None => SignalFormat::from_path(&path)
            .ok_or_else(|| ConfigError::new_err(format!("cannot infer the format of {}", path.display())))?,
    };
    let s = read_core(&path, format, channel, rate_hz).map_err(to_py)?;
    let fs = s.sample_rate_hz();
    Ok((s.into_samples(), fs))
}

#[pyfunction]
fn morlet_gain(center_freq_hz: f64, bandwidth_hz: f64, freq_hz: f64) -> PyResult<f64> {
    let p = MorletParams::new(center_freq_hz, bandwidth_hz).map_err(to_py)?;
    Ok(gain_core(&p, freq_hz))
}

/// Morlet band-pass; returns `(filtered, envelope)`.
#[pyfunction]
fn wavelet_filter(
    samples: Vec<f64>,
    sample_rate_hz: f64,
    center_freq_hz: f64,
    bandwidth_hz: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = signal(samples, sample_rate_hz)?;
    let p = MorletParams::new(center_freq_hz, bandwidth_hz).map_err(to_py)?;
    let z = filter_core(&s, &p).map_err(to_py)?;
    Ok((z.real_part(), z.modulus()))
}

/// Squared envelope spectrum of the record's analytic signal.
#[pyfunction]
fn envelope_spectrum(samples: Vec<f64>, sample_rate_hz: f64) -> PyResult<PyEnvelopeSpectrum> {
    let s = signal(samples, sample_rate_hz)?;
    Ok(PyEnvelopeSpectrum {
        inner: squared_envelope_spectrum(&analytic_signal(&s)),
    })
}

#[pyfunction]
fn kurtosis(samples: Vec<f64>) -> PyResult<f64> {
    kurtosis_core(&samples).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (samples, period_samples, shift_order = 1))]
fn correlated_kurtosis(samples: Vec<f64>, period_samples: f64, shift_order: usize) -> PyResult<f64> {
    let spec = CkSpec::new(shift_order, period_samples).map_err(to_py)?;
    ck_core(&samples, &spec).map_err(to_py)
}

/// Refines a period estimate from the envelope of the Morlet-filtered record.
#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, center_freq_hz, bandwidth_hz, period_samples, search_frac = 0.05))]
fn refine_period(
    samples: Vec<f64>,
    sample_rate_hz: f64,
    center_freq_hz: f64,
    bandwidth_hz: f64,
    period_samples: f64,
    search_frac: f64,
) -> PyResult<f64> {
    let s = signal(samples, sample_rate_hz)?;
    let p = MorletParams::new(center_freq_hz, bandwidth_hz).map_err(to_py)?;
    let z = filter_core(&s, &p).map_err(to_py)?;
    refine_core(&z, period_samples, search_frac).map_err(to_py)
}

/// Maximizes `func(list[float]) -> float` over a box with COA.
///
/// Returns `(best_position, best_fitness, history, evaluations)`.
#[pyfunction]
#[pyo3(signature = (func, lower, upper, population_size = 30, max_iterations = 200, seed = 0))]
fn coa_maximize(
    py: Python<'_>,
    func: Py<PyAny>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    population_size: usize,
    max_iterations: usize,
    seed: u64,
) -> PyResult<(Vec<f64>, f64, Vec<f64>, usize)> {
    let cfg = CoaConfig::new(population_size, max_iterations, lower, upper, seed);
    let failure: Mutex<Option<PyErr>> = Mutex::new(None);
    let fitness = |x: &[f64]| -> f64 {
        Python::attach(|py| match func.call1(py, (x.to_vec(),)).and_then(|v| v.extract::<f64>(py)) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NEG_INFINITY
            }
        })
    };
    let result = py.detach(|| maximize(&cfg, &fitness));
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let r = result.map_err(to_py)?;
    Ok((r.best_position, r.best_fitness, r.fitness_history, r.evaluations))
}

/// Runs the full diagnosis at an expected fault frequency.
#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, fault_freq_hz, seed = 0, population_size = 30, max_iterations = 50, refine = true))]
#[allow(clippy::too_many_arguments)]
fn diagnose(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    fault_freq_hz: f64,
    seed: u64,
    population_size: usize,
    max_iterations: usize,
    refine: bool,
) -> PyResult<PyDiagnosisReport> {
    let s = signal(samples, sample_rate_hz)?;
    let mut cfg = PipelineConfig::for_fault(fault_freq_hz, seed);
    cfg.optimizer.population_size = population_size;
    cfg.optimizer.max_iterations = max_iterations;
    cfg.refine_period = refine;
    let inner = py.detach(|| diagnose_core(&s, &cfg)).map_err(to_py)?;
    Ok(PyDiagnosisReport { inner })
}

/// Fast kurtogram; returns a dict with the best band and the full map.
#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, max_level = 7))]
fn kurtogram<'py>(py: Python<'py>, samples: Vec<f64>, sample_rate_hz: f64, max_level: usize) -> PyResult<Bound<'py, PyDict>> {
    let s = signal(samples, sample_rate_hz)?;
    let k = py.detach(|| fast_kurtogram(&s, max_level)).map_err(to_py)?;
    let band = band_filter(&s, k.best_center_hz, k.best_bandwidth_hz).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("best_level", k.best_level)?;
    d.set_item("best_center_hz", k.best_center_hz)?;
    d.set_item("best_bandwidth_hz", k.best_bandwidth_hz)?;
    d.set_item("best_kurtosis", k.best_kurtosis)?;
    let levels: Vec<(f64, f64, Vec<f64>)> = k
        .levels
        .iter()
        .map(|l| (l.level, l.bandwidth_hz, l.kurtosis.clone()))
        .collect();
    d.set_item("levels", levels)?;
    d.set_item(
        "best_band_ses",
        PyEnvelopeSpectrum {
            inner: squared_envelope_spectrum(&band),
        },
    )?;
    Ok(d)
}

/// Synthetic fault record from a preset; returns `(samples, sample_rate_hz, truth)`.
#[pyfunction]
#[pyo3(signature = (preset, seed = 0, snr_db = None))]
fn synth<'py>(
    py: Python<'py>,
    preset: &str,
    seed: u64,
    snr_db: Option<f64>,
) -> PyResult<(Vec<f64>, f64, Bound<'py, PyDict>)> {
    let preset: Preset = preset.parse().map_err(to_py)?;
    let mut spec = preset.spec();
    if let Some(snr) = snr_db {
        spec.noise_snr_db = snr;
    }
    let (s, t) = synth_fault_signal(&spec, seed).map_err(to_py)?;
    let truth = PyDict::new(py);
    truth.set_item("fault_freq_hz", t.fault_freq_hz)?;
    truth.set_item("period_samples", t.period_samples)?;
    truth.set_item("resonance_hz", t.resonance_hz)?;
    truth.set_item("impacts", t.impacts)?;
    truth.set_item("snr_db", t.snr_db)?;
    let fs = s.sample_rate_hz();
    Ok((s.into_samples(), fs, truth))
}

#[pymodule]
fn wavecoa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("WavecoaError", py.get_type::<WavecoaError>())?;
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("DataError", py.get_type::<DataError>())?;
    m.add_class::<PyEnvelopeSpectrum>()?;
    m.add_class::<PyDiagnosisReport>()?;
    m.add_function(wrap_pyfunction!(read_signal, m)?)?;
    m.add_function(wrap_pyfunction!(morlet_gain, m)?)?;
    m.add_function(wrap_pyfunction!(wavelet_filter, m)?)?;
    m.add_function(wrap_pyfunction!(envelope_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(kurtosis, m)?)?;
    m.add_function(wrap_pyfunction!(correlated_kurtosis, m)?)?;
    m.add_function(wrap_pyfunction!(refine_period, m)?)?;
    m.add_function(wrap_pyfunction!(coa_maximize, m)?)?;
    m.add_function(wrap_pyfunction!(diagnose, m)?)?;
    m.add_function(wrap_pyfunction!(kurtogram, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    Ok(())
}
