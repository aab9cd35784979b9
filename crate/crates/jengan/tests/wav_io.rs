use std::f64::consts::PI;

use jengan::wav::{decode, encode, read_wav, write_wav};
use jengan::Error;
use jengan_core::{DeltaRng, Signal};

const MONO: &[u8] = include_bytes!("fixtures/mono.wav");
const STEREO: &[u8] = include_bytes!("fixtures/stereo.wav");

/// The integer codes behind `fixtures/mono.wav` (see `oracles/wav_fixtures.py`).
fn mono_codes() -> Vec<i32> {
    let mut codes: Vec<i32> =
        (0..96).map(|n| (12000.0 * (2.0 * PI * 441.0 * n as f64 / 22050.0).sin()).round() as i32).collect();
    codes.extend([-32768, 32767, 0, -1, 1]);
    codes
}

fn normalized(codes: impl IntoIterator<Item = i32>) -> Vec<f64> {
    codes.into_iter().map(|c| f64::from(c) / 32768.0).collect()
}

#[test]
fn reads_reference_mono_file_exactly() {
    let x = decode(MONO).unwrap();
    assert_eq!((x.channels(), x.sample_rate(), x.len()), (1, 22050.0, 101));
    assert_eq!(x.data(), normalized(mono_codes()).as_slice());
    assert_eq!(&x.data()[..4], &[0.0, 1504.0 / 32768.0, 2984.0 / 32768.0, 4417.0 / 32768.0]);
}

#[test]
fn reads_reference_stereo_file_deinterleaved() {
    let x = decode(STEREO).unwrap();
    assert_eq!((x.channels(), x.sample_rate(), x.len()), (2, 16000.0, 64));
    assert_eq!(x.channel(0), normalized((0..64).map(|n| n * 301 - 15000)).as_slice());
    assert_eq!(x.channel(1), normalized((0..64).map(|n| -n * 173)).as_slice());
}

#[test]
fn writer_reproduces_reference_bytes() {
    assert_eq!(encode(&decode(MONO).unwrap()).unwrap(), MONO);
    assert_eq!(encode(&decode(STEREO).unwrap()).unwrap(), STEREO);
}

#[test]
fn random_signals_round_trip_within_one_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.wav");
    let mut rng = DeltaRng::seed_from_u64(17);
    for i in 0..100 {
        let channels = 1 + rng.index(2);
        let len = 1 + rng.index(2000);
        let data = (0..channels * len).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let x = Signal::new(channels, 8000.0 + 1000.0 * i as f64, data).unwrap();
        write_wav(&path, &x).unwrap();
        let y = read_wav(&path).unwrap();
        assert!(x.same_shape(&y) && x.sample_rate() == y.sample_rate());
        let worst = x.data().iter().zip(y.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst <= 1.0 / 32768.0, "signal {i}: {worst}");
    }
}

#[test]
fn full_scale_clips_to_the_largest_code() {
    let x = Signal::mono(8000.0, vec![1.0, -1.0, 2.0, -2.0]).unwrap();
    let y = decode(&encode(&x).unwrap()).unwrap();
    assert_eq!(y.data(), &[32767.0 / 32768.0, -1.0, 32767.0 / 32768.0, -1.0]);
}

#[test]
fn truncated_files_are_malformed() {
    for cut in [0, 8, 20, 40, 44, MONO.len() - 1] {
        let err = decode(&MONO[..cut]).unwrap_err();
        assert!(matches!(err, Error::MalformedWav(_)), "cut {cut}: {err}");
    }
}

#[test]
fn non_pcm_and_wide_samples_are_unsupported() {
    let mut float = MONO.to_vec();
    float[20] = 3;
    assert!(matches!(decode(&float), Err(Error::UnsupportedWav(_))));
    let mut wide = MONO.to_vec();
    wide[34] = 24;
    assert!(matches!(decode(&wide), Err(Error::UnsupportedWav(_))));
}

#[test]
fn unknown_chunks_are_skipped() {
    let mut bytes = MONO[..36].to_vec();
    bytes.extend_from_slice(b"LIST");
    bytes.extend_from_slice(&3u32.to_le_bytes());
    bytes.extend_from_slice(&[1, 2, 3, 0]); // odd chunk plus pad byte
    bytes.extend_from_slice(&MONO[36..]);
    let riff_len = (bytes.len() - 8) as u32;
    bytes[4..8].copy_from_slice(&riff_len.to_le_bytes());
    assert_eq!(decode(&bytes).unwrap(), decode(MONO).unwrap());
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(read_wav("/nonexistent/x.wav"), Err(Error::Io { .. })));
}
