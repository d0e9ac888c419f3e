//! Record ingestion, run configuration files and report output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kurtogram::KurtogramResult;
use crate::pipeline::{DiagnosisReport, PipelineConfig};
use crate::signal::{ComplexSeries, EnvelopeSpectrum, Signal};

/// Version of the JSON report layout. Bumped on any breaking change.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

const GENERATOR: &str = concat!("wavecoa ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalFormat {
    Csv,
    Wav,
}

impl SignalFormat {
    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" | "txt" => Some(SignalFormat::Csv),
            "wav" | "wave" => Some(SignalFormat::Wav),
            _ => None,
        }
    }
}

impl FromStr for SignalFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(SignalFormat::Csv),
            "wav" => Ok(SignalFormat::Wav),
            other => Err(Error::config(format!("unknown signal format {other:?} (expected csv or wav)"))),
        }
    }
}

impl fmt::Display for SignalFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalFormat::Csv => "csv",
            SignalFormat::Wav => "wav",
        })
    }
}

/// Reads a record from disk.
///
/// CSV files hold one numeric column with an optional header line and need
/// `rate_hz`. WAV files carry their own rate; a `rate_hz` that disagrees with
/// the header is rejected. `channel` selects a WAV channel (zero-based).
pub fn read_signal(path: &Path, format: SignalFormat, channel: usize, rate_hz: Option<f64>) -> Result<Signal> {
    match format {
        SignalFormat::Csv => {
            let rate = rate_hz.ok_or_else(|| Error::config("CSV input needs a sample rate (--rate)"))?;
            check_rate(rate)?;
            if channel != 0 {
                return Err(Error::config(format!("CSV input has one column; channel {channel} does not exist")));
            }
            let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let text = String::from_utf8(bytes).map_err(|e| {
                Error::parse(format!("{}: invalid UTF-8 at byte {}", path.display(), e.utf8_error().valid_up_to()))
            })?;
            let samples = parse_csv_samples(&text).map_err(|e| prefix(e, path))?;
            Signal::new(samples, rate)
        }
        SignalFormat::Wav => {
            let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let s = parse_wav(&bytes, channel).map_err(|e| prefix(e, path))?;
            if let Some(r) = rate_hz {
                check_rate(r)?;
                if r != s.sample_rate_hz() {
                    return Err(Error::config(format!(
                        "--rate {r} disagrees with the WAV header rate {}",
                        s.sample_rate_hz()
                    )));
                }
            }
            Ok(s)
        }
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::config(format!("sample rate must be positive, got {rate}")));
    }
    Ok(())
}

fn prefix(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// Parses a single-column CSV body. The first non-empty line may be a header.
pub fn parse_csv_samples(text: &str) -> Result<Vec<f64>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut out = Vec::new();
    let mut seen_line = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let first = !seen_line;
        seen_line = true;
        let fields = t.split(',').count();
        if fields != 1 {
            return Err(Error::parse(format!("line {lineno}: expected one column, found {fields}")));
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            Ok(_) => return Err(Error::parse(format!("line {lineno}: non-finite value {t:?}"))),
            Err(_) if first => {}
            Err(_) => return Err(Error::parse(format!("line {lineno}: {t:?} is not a number"))),
        }
    }
    Ok(out)
}

const WAVE_FORMAT_PCM: u16 = 1;
const WAVE_FORMAT_IEEE_FLOAT: u16 = 3;
const WAVE_FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy)]
struct WavFormat {
    tag: u16,
    channels: usize,
    sample_rate: u32,
    block_align: usize,
    bits: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8], offset: usize) -> Result<WavFormat> {
    if body.len() < 16 {
        return Err(Error::parse(format!(
            "offset {offset}: fmt chunk has {} bytes, need at least 16",
            body.len()
        )));
    }
    let mut tag = u16_at(body, 0);
    if tag == WAVE_FORMAT_EXTENSIBLE {
        if body.len() < 40 {
            return Err(Error::parse(format!("offset {offset}: extensible fmt chunk is truncated")));
        }
        // First two bytes of the sub-format GUID carry the format code.
        tag = u16_at(body, 24);
    }
    Ok(WavFormat {
        tag,
        channels: u16_at(body, 2) as usize,
        sample_rate: u32_at(body, 4),
        block_align: u16_at(body, 12) as usize,
        bits: u16_at(body, 14),
    })
}

/// Decodes an in-memory RIFF/WAVE file and returns one channel.
///
/// Integer PCM (16, 24 or 32 bit) is scaled by `2^-(bits-1)`, so full scale
/// maps to `[-1, 1)`. IEEE float data (32 or 64 bit) is passed through.
pub fn parse_wav(bytes: &[u8], channel: usize) -> Result<Signal> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::parse("offset 0: not a RIFF/WAVE file"));
    }
    let mut fmt: Option<WavFormat> = None;
    let mut data: Option<(usize, &[u8])> = None;
    let mut at = 12;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = u32_at(bytes, at + 4) as usize;
        let body_start = at + 8;
        let remaining = bytes.len() - body_start;
        if size > remaining {
            return Err(Error::parse(format!(
                "offset {at}: chunk {:?} declares {size} bytes but only {remaining} remain",
                String::from_utf8_lossy(id)
            )));
        }
        let body = &bytes[body_start..body_start + size];
        match id {
            b"fmt " => fmt = Some(parse_fmt(body, at)?),
            b"data" => data = Some((at, body)),
            _ => {}
        }
        at = body_start + size + (size & 1);
    }
    if at < bytes.len() {
        return Err(Error::parse(format!("offset {at}: truncated chunk header")));
    }
    let fmt = fmt.ok_or_else(|| Error::parse("no fmt chunk found"))?;
    let (data_at, data) = data.ok_or_else(|| Error::parse("no data chunk found"))?;

    let width = match (fmt.tag, fmt.bits) {
        (WAVE_FORMAT_PCM, 16 | 24 | 32) | (WAVE_FORMAT_IEEE_FLOAT, 32 | 64) => fmt.bits as usize / 8,
        (WAVE_FORMAT_PCM, b) => {
            return Err(Error::parse(format!("unsupported PCM bit depth {b} (16, 24 or 32 expected)")));
        }
        (WAVE_FORMAT_IEEE_FLOAT, b) => {
            return Err(Error::parse(format!("unsupported float bit depth {b} (32 or 64 expected)")));
        }
        (tag, _) => return Err(Error::parse(format!("unsupported WAVE format tag {tag:#06x}"))),
    };
    if fmt.channels == 0 || fmt.sample_rate == 0 {
        return Err(Error::parse("fmt chunk declares zero channels or zero sample rate"));
    }
    if fmt.block_align != fmt.channels * width {
        return Err(Error::parse(format!(
            "block alignment {} does not match {} channels of {} bytes",
            fmt.block_align, fmt.channels, width
        )));
    }
    if channel >= fmt.channels {
        return Err(Error::config(format!(
            "channel {channel} requested but the file has {} channel(s)",
            fmt.channels
        )));
    }
    if data.len() % fmt.block_align != 0 {
        return Err(Error::parse(format!(
            "offset {data_at}: data size {} is not a multiple of the {}-byte frame",
            data.len(),
            fmt.block_align
        )));
    }

    let pos = channel * width;
    let samples: Vec<f64> = data
        .chunks_exact(fmt.block_align)
        .map(|frame| {
            let b = &frame[pos..pos + width];
            match (fmt.tag, width) {
                (WAVE_FORMAT_PCM, 2) => i16::from_le_bytes([b[0], b[1]]) as f64 / 32_768.0,
                (WAVE_FORMAT_PCM, 3) => {
                    let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
                    v as f64 / 8_388_608.0
                }
                (WAVE_FORMAT_PCM, _) => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64 / 2_147_483_648.0,
                (_, 4) => f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64,
                _ => f64::from_le_bytes([b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7]]),
            }
        })
        .collect();
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::parse(format!(
            "offset {}: non-finite sample in frame {i}",
            data_at + 8 + i * fmt.block_align
        )));
    }
    Signal::new(samples, fmt.sample_rate as f64)
}

/// Declarative run description for `diagnose`, loaded from TOML or JSON.
///
/// Every field is optional in the file; command-line flags fill or override
/// them. A top-level `seed` replaces `pipeline.optimizer.seed`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfigFile {
    pub input: Option<PathBuf>,
    pub format: Option<SignalFormat>,
    pub rate_hz: Option<f64>,
    pub channel: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub pipeline: PipelineConfig,
}

impl RunConfigFile {
    /// Parses a config file; `.json` files are read as JSON, anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let is_json = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
        .map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string().trim_end().to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    /// Fills defaults and checks that everything a run needs is present.
    pub fn resolve(self) -> Result<ResolvedRun> {
        let input = self.input.ok_or_else(|| Error::config("no input file given (--input)"))?;
        let out = self.out.ok_or_else(|| Error::config("no output directory given (--out)"))?;
        let format = match self.format {
            Some(f) => f,
            None => SignalFormat::from_path(&input).ok_or_else(|| {
                Error::config(format!(
                    "cannot infer the format of {}; pass --format csv|wav",
                    input.display()
                ))
            })?,
        };
        let mut pipeline = self.pipeline;
        if let Some(seed) = self.seed {
            pipeline.optimizer.seed = seed;
        }
        if !(pipeline.initial_fault_freq_hz > 0.0) {
            return Err(Error::config("no fault frequency given (--fault-freq)"));
        }
        Ok(ResolvedRun {
            input,
            format,
            rate_hz: self.rate_hz,
            channel: self.channel.unwrap_or(0),
            out,
            pipeline,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub input: PathBuf,
    pub format: SignalFormat,
    pub rate_hz: Option<f64>,
    pub channel: usize,
    pub out: PathBuf,
    pub pipeline: PipelineConfig,
}

/// Effective configuration as echoed in the report. The output directory is
/// left out so that reruns into different directories compare equal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub format: SignalFormat,
    pub rate_hz: f64,
    pub channel: usize,
    pub seed: u64,
    pub pipeline: PipelineConfig,
}

impl ConfigEcho {
    /// Echo of `run` with the sample-rate dependent defaults made explicit.
    pub fn new(run: &ResolvedRun, signal: &Signal) -> Self {
        let fs = signal.sample_rate_hz();
        let mut pipeline = run.pipeline.clone();
        pipeline.fc_bounds_hz = Some(pipeline.fc_bounds(fs));
        pipeline.sigma_bounds_hz = Some(pipeline.sigma_bounds(fs));
        ConfigEcho {
            input: run.input.display().to_string(),
            format: run.format,
            rate_hz: fs,
            channel: run.channel,
            seed: pipeline.optimizer.seed,
            pipeline,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputSummary {
    pub samples: usize,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
}

impl InputSummary {
    pub fn of(s: &Signal) -> Self {
        InputSummary {
            samples: s.len(),
            sample_rate_hz: s.sample_rate_hz(),
            duration_s: s.duration_s(),
        }
    }
}

/// Layout of `report.json` written by `diagnose`.
#[derive(Debug, Serialize)]
pub struct DiagnoseReportFile<'a> {
    pub schema_version: u32,
    pub generator: &'static str,
    pub config: ConfigEcho,
    pub input: InputSummary,
    pub result: &'a DiagnosisReport,
}

impl<'a> DiagnoseReportFile<'a> {
    pub fn new(config: ConfigEcho, signal: &Signal, result: &'a DiagnosisReport) -> Self {
        DiagnoseReportFile {
            schema_version: REPORT_SCHEMA_VERSION,
            generator: GENERATOR,
            config,
            input: InputSummary::of(signal),
            result,
        }
    }
}

/// Best band of a kurtogram, as written by `kurtogram`.
#[derive(Debug, Serialize)]
pub struct KurtogramReportFile {
    pub schema_version: u32,
    pub generator: &'static str,
    pub input: String,
    pub signal: InputSummary,
    pub max_level: usize,
    pub best_level: f64,
    pub best_center_hz: f64,
    pub best_bandwidth_hz: f64,
    pub best_band_hz: [f64; 2],
    pub best_kurtosis: f64,
    /// Present when a fault frequency was supplied.
    pub fault_freq_hz: Option<f64>,
    pub envsi: Option<f64>,
}

impl KurtogramReportFile {
    pub fn new(input: &Path, signal: &Signal, max_level: usize, k: &KurtogramResult) -> Self {
        let (lo, hi) = k.best_band();
        KurtogramReportFile {
            schema_version: REPORT_SCHEMA_VERSION,
            generator: GENERATOR,
            input: input.display().to_string(),
            signal: InputSummary::of(signal),
            max_level,
            best_level: k.best_level,
            best_center_hz: k.best_center_hz,
            best_bandwidth_hz: k.best_bandwidth_hz,
            best_band_hz: [lo, hi],
            best_kurtosis: k.best_kurtosis,
            fault_freq_hz: None,
            envsi: None,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn write_text(path: &Path, text: String) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn ses_csv(ses: &EnvelopeSpectrum) -> String {
    let mut out = String::with_capacity(ses.len() * 32);
    out.push_str("freq_hz,magnitude\n");
    for (f, m) in ses.frequencies_hz.iter().zip(&ses.magnitudes) {
        out.push_str(&format!("{f},{m}\n"));
    }
    out
}

pub fn write_ses_csv(path: &Path, ses: &EnvelopeSpectrum) -> Result<()> {
    write_text(path, ses_csv(ses))
}

/// Filtered waveform and its envelope: `time_s,processed,envelope`.
pub fn write_processed_csv(path: &Path, z: &ComplexSeries) -> Result<()> {
    let fs = z.sample_rate_hz();
    let mut out = String::with_capacity(z.len() * 48);
    out.push_str("time_s,processed,envelope\n");
    for (i, v) in z.values().iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i as f64 / fs, v.re, v.norm()));
    }
    write_text(path, out)
}

/// A record as a one-column CSV with an `amplitude` header.
pub fn write_signal_csv(path: &Path, samples: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(samples.len() * 24);
    out.push_str("amplitude\n");
    for v in samples {
        out.push_str(&format!("{v}\n"));
    }
    write_text(path, out)
}

/// Kurtogram map: one row per band.
pub fn write_kurtogram_csv(path: &Path, k: &KurtogramResult) -> Result<()> {
    let mut out = String::from("level,band,center_hz,bandwidth_hz,kurtosis\n");
    for lvl in &k.levels {
        for (b, v) in lvl.kurtosis.iter().enumerate() {
            out.push_str(&format!(
                "{},{b},{},{},{v}\n",
                lvl.level,
                lvl.band_center_hz(b),
                lvl.bandwidth_hz
            ));
        }
    }
    write_text(path, out)
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    fs::write(path, svg).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_blank_lines() {
        let v = parse_csv_samples("value\n1.5\n\n-2\r\n3e-1\n").unwrap();
        assert_eq!(v, vec![1.5, -2.0, 0.3]);
        assert_eq!(parse_csv_samples("\u{feff}1\n2\n").unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let e = parse_csv_samples("x\n1\n2\nabc\n").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("line 4")), "{e}");
        let e = parse_csv_samples("1,2\n").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("line 1") && m.contains("2")));
        let e = parse_csv_samples("1\nNaN\n").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("line 2")));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(SignalFormat::from_path(Path::new("a/b.CSV")), Some(SignalFormat::Csv));
        assert_eq!(SignalFormat::from_path(Path::new("x.wav")), Some(SignalFormat::Wav));
        assert_eq!(SignalFormat::from_path(Path::new("x.bin")), None);
        assert!("flac".parse::<SignalFormat>().is_err());
    }

    fn wav_bytes(tag: u16, channels: u16, rate: u32, bits: u16, data: &[u8]) -> Vec<u8> {
        let block = channels * bits / 8;
        let mut b = Vec::new();
        b.extend_from_slice(b"RIFF");
        b.extend_from_slice(&((4 + 24 + 8 + data.len()) as u32).to_le_bytes());
        b.extend_from_slice(b"WAVE");
        b.extend_from_slice(b"fmt ");
        b.extend_from_slice(&16u32.to_le_bytes());
        b.extend_from_slice(&tag.to_le_bytes());
        b.extend_from_slice(&channels.to_le_bytes());
        b.extend_from_slice(&rate.to_le_bytes());
        b.extend_from_slice(&(rate * block as u32).to_le_bytes());
        b.extend_from_slice(&block.to_le_bytes());
        b.extend_from_slice(&bits.to_le_bytes());
        b.extend_from_slice(b"data");
        b.extend_from_slice(&(data.len() as u32).to_le_bytes());
        b.extend_from_slice(data);
        b
    }

    #[test]
    fn wav_24_bit_sign_extension() {
        let frames: [i32; 16] = [0, 1, -1, 8_388_607, -8_388_608, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];
        let data: Vec<u8> = frames.iter().flat_map(|v| v.to_le_bytes()[..3].to_vec()).collect();
        let s = parse_wav(&wav_bytes(1, 1, 8000, 24, &data), 0).unwrap();
        assert_eq!(s.sample_rate_hz(), 8000.0);
        assert_eq!(s.samples()[2], -1.0 / 8_388_608.0);
        assert_eq!(s.samples()[4], -1.0);
        assert_eq!(s.samples()[3], 8_388_607.0 / 8_388_608.0);
    }

    #[test]
    fn wav_channel_selection_and_errors() {
        let data: Vec<u8> = (0..32i16).flat_map(|v| v.to_le_bytes()).collect();
        let b = wav_bytes(1, 2, 1000, 16, &data);
        let right = parse_wav(&b, 1).unwrap();
        assert_eq!(right.len(), 16);
        assert_eq!(right.samples()[0], 1.0 / 32_768.0);
        assert!(matches!(parse_wav(&b, 2), Err(Error::Config(_))));

        let mut cut = b.clone();
        cut.truncate(cut.len() - 3);
        let e = parse_wav(&cut, 0).unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("offset 36")), "{e}");
        assert!(matches!(parse_wav(b"RIFX0000WAVE", 0), Err(Error::Parse(_))));
        assert!(matches!(parse_wav(&wav_bytes(1, 1, 1000, 8, &[0; 16]), 0), Err(Error::Parse(_))));
    }

    #[test]
    fn run_config_rejects_unknown_keys() {
        let ok = RunConfigFile::from_toml_str(
            "input = \"x.csv\"\nrate_hz = 100.0\n[pipeline]\ninitial_fault_freq_hz = 3.0\n[pipeline.optimizer]\npopulation_size = 10\n",
        )
        .unwrap();
        assert_eq!(ok.pipeline.optimizer.population_size, 10);
        assert_eq!(ok.pipeline.optimizer.max_iterations, 50);
        for bad in [
            "inputs = \"x\"",
            "[pipeline]\nfault = 3.0",
            "[pipeline.optimizer]\npop = 3",
            "rate_hz = \"fast\"",
        ] {
            assert!(matches!(RunConfigFile::from_toml_str(bad), Err(Error::Config(_))), "{bad}");
        }
        assert!(RunConfigFile::from_json_str("{\"pipeline\": {\"bogus\": 1}}").is_err());
    }

    #[test]
    fn resolve_fills_defaults() {
        let mut c = RunConfigFile {
            input: Some("a.wav".into()),
            out: Some("o".into()),
            seed: Some(9),
            ..Default::default()
        };
        assert!(matches!(c.clone().resolve(), Err(Error::Config(_))));
        c.pipeline.initial_fault_freq_hz = 5.0;
        let r = c.clone().resolve().unwrap();
        assert_eq!(r.format, SignalFormat::Wav);
        assert_eq!(r.pipeline.optimizer.seed, 9);
        c.input = Some("a.dat".into());
        assert!(c.resolve().is_err());
    }
}
