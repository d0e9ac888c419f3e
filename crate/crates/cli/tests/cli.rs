use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wavecoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavecoa")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn synth(dir: &Path, preset: &str, seed: &str) -> String {
    let out = dir.join("F.csv");
    let o = wavecoa(&["synth", "--preset", preset, "--seed", seed, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    out.to_str().unwrap().to_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn synth_then_diagnose_finds_the_fault() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-gearbox", "2");
    let truth = read_json(&dir.path().join("truth.json"));
    assert_eq!(truth["truth"]["fault_freq_hz"], 4.1);
    assert_eq!(truth["samples"], 20_480);

    let out = dir.path().join("run");
    let o = wavecoa(&[
        "diagnose", "--input", &input, "--rate", "8192", "--fault-freq", "4.1", "--seed", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["report.json", "ses.csv", "processed.csv", "raw.svg", "processed.svg", "ses.svg", "convergence.svg"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["config"]["seed"], 2);
    assert_eq!(report["config"]["pipeline"]["initial_fault_freq_hz"], 4.1);
    let r = &report["result"];
    let f = r["fault_freq_hz"].as_f64().unwrap();
    assert!((f - 4.1).abs() / 4.1 < 0.005, "{f}");
    assert!(r["harmonics"].as_array().unwrap().len() >= 3);
    assert!(r["envsi_processed"].as_f64().unwrap() > r["envsi_raw"].as_f64().unwrap());

    let ses = fs::read_to_string(out.join("ses.csv")).unwrap();
    let mut lines = ses.lines();
    assert_eq!(lines.next(), Some("freq_hz,magnitude"));
    assert!(lines.count() > 1000);
}

#[test]
fn ck_prefers_the_true_period() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-bearing", "0");
    let ck = |t: f64| -> f64 {
        let o = wavecoa(&["ck", "--input", &input, "--rate", "19200", "--period-samples", &t.to_string()]);
        assert!(o.status.success(), "{}", stderr(&o));
        String::from_utf8(o.stdout).unwrap().trim().parse().unwrap()
    };
    let truth = 19_200.0 / 12.6;
    assert!(ck(truth) > ck(truth * 1.03));
}

#[test]
fn missing_rate_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-gearbox", "0");
    let o = wavecoa(&["ck", "--input", &input, "--period-samples", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--rate"), "{}", stderr(&o));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-gearbox", "0");
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "rate_hz = 8192.0\n[pipeline]\ninitial_fault_freq_hz = 4.1\nbogus = true\n").unwrap();
    let o = wavecoa(&["diagnose", "--input", &input, "--config", cfg.to_str().unwrap(), "--out", "unused"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"), "{}", stderr(&o));
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-gearbox", "1");
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("res");
    let body = serde_json::json!({
        "input": input,
        "rate_hz": 8192.0,
        "out": out,
        "seed": 9,
        "pipeline": {"initial_fault_freq_hz": 4.1, "optimizer": {"max_iterations": 10}}
    });
    fs::write(&cfg, body.to_string()).unwrap();
    let o = wavecoa(&["diagnose", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["config"]["seed"], 9);
    assert_eq!(report["config"]["pipeline"]["optimizer"]["seed"], 9);
    assert_eq!(report["result"]["ck_history"].as_array().unwrap().len(), 10);
}

#[test]
fn malformed_data_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    fs::write(&p, "1,2\n3,4\n").unwrap();
    let o = wavecoa(&["ck", "--input", p.to_str().unwrap(), "--rate", "100", "--period-samples", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 1"));

    let w = dir.path().join("bad.wav");
    fs::write(&w, b"RIFF\x04\x00\x00\x00WAVE").unwrap();
    let o = wavecoa(&["ck", "--input", w.to_str().unwrap(), "--period-samples", "4"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_with_two() {
    let o = wavecoa(&["synth", "--preset", "conveyor-belt", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-gearbox", "0");
    let o = wavecoa(&["ck", "--input", &input, "--rate", "8192", "--period-samples", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = wavecoa(&["ck", "--input", "/nonexistent/x.csv", "--rate", "8192", "--period-samples", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn kurtogram_writes_its_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth(dir.path(), "conveyor-bearing", "3");
    let out = dir.path().join("kg");
    let o = wavecoa(&[
        "kurtogram", "--input", &input, "--rate", "19200", "--fault-freq", "12.6", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let best = read_json(&out.join("best_band.json"));
    let lo = best["best_band_hz"][0].as_f64().unwrap();
    let hi = best["best_band_hz"][1].as_f64().unwrap();
    assert!(lo <= 3000.0 && 3000.0 <= hi, "[{lo}, {hi}]");
    assert!(best["envsi"].as_f64().unwrap() > 0.0);
    let map = fs::read_to_string(out.join("map.csv")).unwrap();
    assert!(map.starts_with("level,band,center_hz,bandwidth_hz,kurtosis\n"));
    // 1 + 2 + 3 + 4 + 6 + ... + 128 bands down to level 7.
    let bands: usize = 1 + (1..=7).map(|k| 1usize << k).sum::<usize>() + (1..7).map(|k| 3usize << (k - 1)).sum::<usize>();
    assert_eq!(map.lines().count(), bands + 1);
    assert!(out.join("ses.csv").is_file() && out.join("ses.svg").is_file());
}
