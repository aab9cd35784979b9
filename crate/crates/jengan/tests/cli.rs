use std::f64::consts::FRAC_2_PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jengan::checkpoint;
use jengan::model::delay_checkpoint;
use jengan::wav::write_wav;
use jengan_core::{DeltaRng, Signal};

fn jengan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jengan")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn noise_wav(path: &Path, seed: u64, len: usize) {
    let mut rng = DeltaRng::seed_from_u64(seed);
    let x = Signal::mono(22050.0, (0..len).map(|_| rng.uniform(-0.5, 0.5)).collect()).unwrap();
    write_wav(path, &x).unwrap();
}

/// `n,tap` rows of a design-filter CSV.
fn taps(csv: &str) -> Vec<(i64, f64)> {
    assert!(csv.starts_with("n,tap\n"));
    csv.lines()
        .skip(1)
        .map(|l| {
            let (n, t) = l.split_once(',').unwrap();
            (n.parse().unwrap(), t.parse().unwrap())
        })
        .collect()
}

#[test]
fn design_filter_zero_shift_is_an_impulse() {
    let o = jengan(&["design-filter", "--delta", "0"]);
    assert_eq!(code(&o), 0);
    let t = taps(&stdout(&o));
    assert_eq!(t.len(), 25);
    assert!(t.iter().all(|&(n, v)| v == if n == 0 { 1.0 } else { 0.0 }));
}

#[test]
fn design_filter_half_shift_has_two_center_taps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("half.csv");
    let o = jengan(&["design-filter", "--delta", "-0.5", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let t = taps(&fs::read_to_string(&out).unwrap());
    let center: Vec<f64> = t.iter().filter(|(n, _)| matches!(n, 0 | 1)).map(|&(_, v)| v).collect();
    assert_eq!(center, [FRAC_2_PI, FRAC_2_PI]);
    let response = fs::read_to_string(dir.path().join("half_response.csv")).unwrap();
    assert!(response.starts_with("freq,magnitude\n"));
    assert_eq!(response.lines().count(), 258);
}

#[test]
fn design_filter_rejects_out_of_range_shift() {
    let o = jengan(&["design-filter", "--delta", "20"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid shift"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&jengan(&[])), 2);
    assert_eq!(code(&jengan(&["train", "--sync", "--async", "--out", "x"])), 2);
    assert_eq!(code(&jengan(&["eval", "--metric", "melmae"])), 2);
}

#[test]
fn wrap_check_passes_and_detects_injected_fault() {
    let ok = jengan(&["wrap-check"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains(", 0 failed"));
    let bad = jengan(&["wrap-check", "--inject-fault"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn zero_step_training_writes_config_and_checkpoint_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = jengan(&["train", "--steps", "0", "--out", p(dir.path())]);
    assert_eq!(code(&o), 0);
    let mut names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["checkpoint.jgn", "config.json"]);
    let config = jengan::config::load_config(dir.path().join("config.json")).unwrap();
    assert_eq!(config, jengan_core::vocoder::TrainConfig::default());
}

#[test]
fn training_is_reproducible_from_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = jengan(&["train", "--steps", "15", "--seed", seed, "--jengan", "both", "--out", p(&out)]);
        assert_eq!(code(&o), 0);
        (fs::read(out.join("checkpoint.jgn")).unwrap(), fs::read(out.join("losses.csv")).unwrap())
    };
    let a = run("a", "3");
    assert_eq!(a, run("b", "3"));
    assert_ne!(a.0, run("c", "4").0);
}

#[test]
fn forced_zero_shifts_log_the_same_losses_as_plain_training() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["train", "--steps", "25", "--seed", "5", "--out", p(&out)];
        args.extend_from_slice(extra);
        assert_eq!(code(&jengan(&args)), 0);
        (fs::read(out.join("losses.csv")).unwrap(), fs::read(out.join("checkpoint.jgn")).unwrap())
    };
    let plain = run("off", &["--jengan", "off"]);
    let zero = run("zero", &["--jengan", "both", "--force-zero-delta"]);
    assert_eq!(plain, zero);
    assert_ne!(plain.0, run("both", &["--jengan", "both"]).0);
}

#[test]
fn config_file_typos_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{ "jengan": { "mdoe": "both" } }"#).unwrap();
    let o = jengan(&["train", "--steps", "0", "--config", p(&cfg), "--out", p(&dir.path().join("r"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn mel_mae_of_identical_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("a.wav");
    noise_wav(&wav, 1, 8192);
    let o = jengan(&["eval", "--metric", "melmae", "--input", p(&wav), "--input", p(&wav)]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["value"], 0.0);

    let other = dir.path().join("b.wav");
    noise_wav(&other, 2, 8192);
    let csv = dir.path().join("m.csv");
    let o = jengan(&["eval", "--metric", "mstft", "--input", p(&wav), p(&other), "--out", p(&csv)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let value: f64 = text.lines().nth(1).unwrap().split_once(',').unwrap().1.parse().unwrap();
    assert!(text.starts_with("metric,value\n") && value > 0.0);
}

#[test]
fn pure_delay_checkpoint_is_equivariant() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("x.wav");
    noise_wav(&wav, 3, 2048);
    let ckpt = dir.path().join("delay.jgn");
    checkpoint::save(&ckpt, &delay_checkpoint(0.37)).unwrap();
    let csv = dir.path().join("eq.csv");
    let o =
        jengan(&["eval", "--checkpoint", p(&ckpt), "--metric", "equivariance", "--input", p(&wav), "--out", p(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("delta,error\n"));
    let errors: Vec<f64> = text.lines().skip(1).map(|l| l.split_once(',').unwrap().1.parse().unwrap()).collect();
    assert_eq!(errors.len(), 8);
    assert!(errors.iter().all(|&e| e < 1e-10), "{errors:?}");
}

#[test]
fn vocoder_checkpoint_evaluates_held_out_audio() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    assert_eq!(code(&jengan(&["train", "--steps", "3", "--out", p(&run)])), 0);
    let o = jengan(&["eval", "--checkpoint", p(&run), "--metric", "alias", "--signals", "2"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["alias"].as_array().unwrap().len(), 2);
    assert!(report["value"].as_f64().unwrap() >= 0.0);

    let wav = dir.path().join("x.wav");
    noise_wav(&wav, 4, 4096);
    let o = jengan(&["eval", "--checkpoint", p(&run), "--metric", "melmae", "--input", p(&wav)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn corrupt_checkpoint_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("bad.jgn");
    fs::write(&ckpt, b"JGN1\x05").unwrap();
    let o = jengan(&["eval", "--checkpoint", p(&ckpt), "--metric", "alias", "--signals", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn spectrogram_of_silence_is_the_floor() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("s.wav");
    write_wav(&wav, &Signal::mono(22050.0, vec![0.0; 4096]).unwrap()).unwrap();
    let o = jengan(&["spectrogram", "--input", p(&wav)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("frame,mel_0,mel_1") && header.ends_with(",mel_79"));
    let floor = 1e-5f64.ln();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        assert!(row.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == floor), "{row}");
    }
}

#[test]
fn spectrogram_rejects_malformed_wav() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("bad.wav");
    fs::write(&wav, b"RIFF\x10\0\0\0WAVEfmt ").unwrap();
    let o = jengan(&["spectrogram", "--input", p(&wav)]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn shipped_default_config_matches_the_built_in_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    assert_eq!(jengan::config::load_config(path).unwrap(), jengan_core::vocoder::TrainConfig::default());
}
