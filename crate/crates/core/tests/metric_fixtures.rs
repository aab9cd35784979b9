use std::collections::HashMap;
use std::f64::consts::PI;

use jengan_core::metrics::{mel_mae, mstft};
use jengan_core::{DeltaRng, Signal};

const RATE: f64 = 22050.0;
const LEN: usize = 22050;
const TOLERANCE: f64 = 1e-9;

/// Reference values written by `tests/oracles/metrics.py`.
fn fixtures() -> HashMap<String, f64> {
    include_str!("fixtures/metrics.txt")
        .lines()
        .map(|line| {
            let mut parts = line.split_whitespace();
            let name = parts.next().unwrap().to_string();
            let bits = u64::from_str_radix(parts.next().unwrap(), 16).unwrap();
            (name, f64::from_bits(bits))
        })
        .collect()
}

fn noise(seed: u64, amplitude: f64) -> Signal {
    let mut rng = DeltaRng::seed_from_u64(seed);
    Signal::mono(RATE, (0..LEN).map(|_| rng.uniform(-amplitude, amplitude)).collect()).unwrap()
}

fn scaled(x: &Signal, k: f64) -> Signal {
    Signal::mono(RATE, x.data().iter().map(|v| k * v).collect()).unwrap()
}

fn tone() -> Signal {
    Signal::mono(RATE, (0..LEN).map(|n| 0.6 * (2.0 * PI * 441.0 * n as f64 / RATE).sin()).collect()).unwrap()
}

fn check(name: &str, value: f64) {
    let expected = fixtures()[name];
    let err = (value - expected).abs();
    println!("{name}: {value:.15} (reference {expected:.15}, diff {err:.1e})");
    assert!(err < TOLERANCE, "{name}: {value} vs {expected}");
}

#[test]
fn mel_mae_matches_reference() {
    let (a, b) = (noise(7, 0.5), noise(8, 0.3));
    let silence = Signal::mono(RATE, vec![0.0; LEN]).unwrap();
    check("mel_mae_noise_noise", mel_mae(&a, &b).unwrap());
    check("mel_mae_noise_silence", mel_mae(&a, &silence).unwrap());
    check("mel_mae_tone_noise", mel_mae(&tone(), &b).unwrap());
    assert!(mel_mae(&a, &silence).unwrap() > 1.0);
}

#[test]
fn mstft_matches_reference() {
    let (a, b) = (noise(7, 0.5), noise(8, 0.3));
    check("mstft_noise_noise", mstft(&a, &b).unwrap());
    check("mstft_noise_noise_swapped", mstft(&b, &a).unwrap());
    check("mstft_half_noise", mstft(&scaled(&a, 0.5), &a).unwrap());
    check("mstft_tone_noise", mstft(&tone(), &b).unwrap());
}

#[test]
fn identical_inputs_give_zero() {
    for x in [noise(7, 0.5), tone(), Signal::mono(RATE, vec![0.0; LEN]).unwrap()] {
        assert_eq!(mel_mae(&x, &x).unwrap(), 0.0);
        assert_eq!(mstft(&x, &x).unwrap(), 0.0);
    }
}

#[test]
fn mel_mae_is_symmetric() {
    let pairs = [(noise(7, 0.5), noise(8, 0.3)), (tone(), noise(9, 0.1)), (noise(10, 1.0), scaled(&tone(), 0.1))];
    for (a, b) in &pairs {
        assert_eq!(mel_mae(a, b).unwrap(), mel_mae(b, a).unwrap());
    }
}

#[test]
fn metrics_are_nonnegative_and_deterministic() {
    let (a, b) = (noise(11, 0.5), noise(12, 0.5));
    let m = mel_mae(&a, &b).unwrap();
    let s = mstft(&a, &b).unwrap();
    assert!(m >= 0.0 && s >= 0.0);
    assert_eq!(m, mel_mae(&a, &b).unwrap());
    assert_eq!(s, mstft(&a, &b).unwrap());
    // magnitude-only: a sign flip is invisible
    assert_eq!(mstft(&scaled(&a, -1.0), &a).unwrap(), 0.0);
}

#[test]
fn length_mismatch_is_rejected() {
    let a = noise(13, 0.5);
    let b = Signal::mono(RATE, vec![0.0; LEN - 1]).unwrap();
    assert!(mel_mae(&a, &b).is_err());
    assert!(mstft(&a, &b).is_err());
}
