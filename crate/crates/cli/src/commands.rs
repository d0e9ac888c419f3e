use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use wavecoa_core::ck::{correlated_kurtosis, CkSpec};
use wavecoa_core::io::{
    read_signal, write_json, write_kurtogram_csv, write_processed_csv, write_ses_csv, write_signal_csv, write_svg,
    ConfigEcho, DiagnoseReportFile, KurtogramReportFile, RunConfigFile, SignalFormat, REPORT_SCHEMA_VERSION,
};
use wavecoa_core::kurtogram::{band_filter, fast_kurtogram};
use wavecoa_core::pipeline::diagnose;
use wavecoa_core::plot::{ses_svg, waveform_svg, LinePlot};
use wavecoa_core::signal::{envsi_default, squared_envelope_spectrum, Signal, DEFAULT_ENVSI_HARMONICS};
use wavecoa_core::synth::{synth_fault_signal, FaultSignalSpec, Preset, SynthTruth};
use wavecoa_core::{Error, Result};

use crate::{Command, InputArgs};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Diagnose {
            input,
            fault_freq,
            config,
            seed,
            out,
        } => {
            let mut cfg = match &config {
                Some(path) => RunConfigFile::load(path)?,
                None => RunConfigFile::default(),
            };
            cfg.input = input.input.or(cfg.input);
            cfg.format = input.format.or(cfg.format);
            cfg.rate_hz = input.rate.or(cfg.rate_hz);
            cfg.channel = input.channel.or(cfg.channel);
            cfg.out = out.or(cfg.out);
            cfg.seed = seed.or(cfg.seed);
            if let Some(f) = fault_freq {
                cfg.pipeline.initial_fault_freq_hz = f;
            }
            run_diagnose(cfg)
        }
        Command::Kurtogram {
            input,
            max_level,
            fault_freq,
            out,
        } => run_kurtogram(&input, max_level, fault_freq, &out),
        Command::Synth {
            preset,
            snr_db,
            seed,
            out,
            truth,
        } => run_synth(preset, snr_db, seed, &out, truth),
        Command::Ck {
            input,
            period_samples,
            shift_order,
        } => {
            let s = load(&input)?;
            let spec = CkSpec::new(shift_order, period_samples).map_err(|e| Error::Config(e.to_string()))?;
            let ck = correlated_kurtosis(s.samples(), &spec)?;
            println!("{ck}");
            Ok(())
        }
    }
}

fn load(input: &InputArgs) -> Result<Signal> {
    let path = input
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("no input file given (--input)".into()))?;
    let format = resolve_format(path, input.format)?;
    read_signal(path, format, input.channel.unwrap_or(0), input.rate)
}

fn resolve_format(path: &Path, format: Option<SignalFormat>) -> Result<SignalFormat> {
    format.or_else(|| SignalFormat::from_path(path)).ok_or_else(|| {
        Error::Config(format!(
            "cannot infer the format of {}; pass --format csv|wav",
            path.display()
        ))
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

fn run_diagnose(cfg: RunConfigFile) -> Result<()> {
    let run = cfg.resolve()?;
    let signal = read_signal(&run.input, run.format, run.channel, run.rate_hz)?;
    let report = diagnose(&signal, &run.pipeline)?;

    let out = &run.out;
    create_dir(out)?;
    let echo = ConfigEcho::new(&run, &signal);
    write_json(&out.join("report.json"), &DiagnoseReportFile::new(echo, &signal, &report))?;
    write_ses_csv(&out.join("ses.csv"), &report.ses)?;
    write_processed_csv(&out.join("processed.csv"), &report.processed)?;

    let fs = signal.sample_rate_hz();
    let p = &report.optimal_params;
    write_svg(&out.join("raw.svg"), &waveform_svg("Raw signal", signal.samples(), fs))?;
    write_svg(
        &out.join("processed.svg"),
        &waveform_svg(
            &format!(
                "Filtered signal (f_c = {:.1} Hz, sigma = {:.1} Hz)",
                p.center_freq_hz, p.bandwidth_hz
            ),
            &report.processed.real_part(),
            fs,
        ),
    )?;
    let detected: Vec<usize> = report.harmonics.iter().map(|h| h.order).collect();
    let n = run.pipeline.envsi_harmonics;
    write_svg(
        &out.join("ses.svg"),
        &ses_svg(
            &format!("Squared envelope spectrum, fault {:.3} Hz", report.fault_freq_hz),
            &report.ses,
            report.fault_freq_hz,
            n,
            &detected,
        ),
    )?;
    write_svg(
        &out.join("ses_raw.svg"),
        &ses_svg("Squared envelope spectrum of the raw signal", &report.ses_raw, report.fault_freq_hz, n, &[]),
    )?;
    let iters: Vec<f64> = (0..report.ck_history.len()).map(|i| i as f64).collect();
    write_svg(
        &out.join("convergence.svg"),
        &LinePlot {
            title: "Best correlated kurtosis",
            x_label: "iteration",
            y_label: "CK",
            xs: &iters,
            ys: &report.ck_history,
            markers: Vec::new(),
        }
        .to_svg(),
    )?;

    println!(
        "f_c {:.2} Hz  sigma {:.2} Hz  fault {:.4} Hz  CK {:.6e}",
        p.center_freq_hz, p.bandwidth_hz, report.fault_freq_hz, report.best_ck
    );
    println!(
        "kurtosis {:.3} -> {:.3}  ENVSI {:.4} -> {:.4}  harmonics {:?}",
        report.kurtosis_raw, report.kurtosis_processed, report.envsi_raw, report.envsi_processed, detected
    );
    Ok(())
}

fn run_kurtogram(input: &InputArgs, max_level: usize, fault_freq: Option<f64>, out: &Path) -> Result<()> {
    let signal = load(input)?;
    let k = fast_kurtogram(&signal, max_level)?;
    let band = band_filter(&signal, k.best_center_hz, k.best_bandwidth_hz)?;
    let ses = squared_envelope_spectrum(&band);

    let mut report = KurtogramReportFile::new(input.input.as_deref().unwrap_or(Path::new("")), &signal, max_level, &k);
    if let Some(f) = fault_freq {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::Config(format!("fault frequency must be positive, got {f}")));
        }
        report.fault_freq_hz = Some(f);
        report.envsi = Some(envsi_default(&ses, f, DEFAULT_ENVSI_HARMONICS)?);
    }

    create_dir(out)?;
    write_kurtogram_csv(&out.join("map.csv"), &k)?;
    write_json(&out.join("best_band.json"), &report)?;
    write_ses_csv(&out.join("ses.csv"), &ses)?;
    if let Some(f) = fault_freq {
        write_svg(
            &out.join("ses.svg"),
            &ses_svg("Squared envelope spectrum of the best band", &ses, f, DEFAULT_ENVSI_HARMONICS, &[]),
        )?;
    }
    println!(
        "best level {}  band [{:.1}, {:.1}] Hz  kurtosis {:.4}",
        k.best_level,
        k.best_center_hz - 0.5 * k.best_bandwidth_hz,
        k.best_center_hz + 0.5 * k.best_bandwidth_hz,
        k.best_kurtosis
    );
    Ok(())
}

#[derive(Serialize)]
struct TruthFile<'a> {
    schema_version: u32,
    preset: &'static str,
    seed: u64,
    samples: usize,
    spec: &'a FaultSignalSpec,
    truth: &'a SynthTruth,
}

fn run_synth(preset: Preset, snr_db: Option<f64>, seed: u64, out: &Path, truth: Option<PathBuf>) -> Result<()> {
    let mut spec = preset.spec();
    if let Some(snr) = snr_db {
        if !snr.is_finite() {
            return Err(Error::Config("--snr-db must be finite".into()));
        }
        spec.noise_snr_db = snr;
    }
    let (signal, t) = synth_fault_signal(&spec, seed)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    write_signal_csv(out, signal.samples())?;
    let truth_path = truth.unwrap_or_else(|| out.with_file_name("truth.json"));
    write_json(
        &truth_path,
        &TruthFile {
            schema_version: REPORT_SCHEMA_VERSION,
            preset: preset.name(),
            seed,
            samples: signal.len(),
            spec: &spec,
            truth: &t,
        },
    )?;
    println!(
        "{} samples at {} Hz, fault {} Hz, {} impacts",
        signal.len(),
        spec.sample_rate_hz,
        spec.fault_freq_hz,
        t.impacts
    );
    Ok(())
}
