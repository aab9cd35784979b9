use jengan_core::metrics::estimate_delay;
use jengan_core::{apply_filter, frequency_response, make_sinc_kernel, DeltaRng, Signal};

/// Distance in units in the last place between two finite doubles.
fn ulps(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

fn hex_f64(s: &str) -> f64 {
    f64::from_bits(u64::from_str_radix(s, 16).unwrap())
}

/// Shifts and their correctly rounded taps from `tests/oracles/sinc_taps.py`.
fn oracle_rows() -> Vec<(f64, Vec<f64>)> {
    include_str!("fixtures/sinc_taps.txt")
        .lines()
        .map(|line| {
            let v: Vec<f64> = line.split_whitespace().map(hex_f64).collect();
            (v[0], v[1..].to_vec())
        })
        .collect()
}

#[test]
fn taps_match_high_precision_oracle_within_one_ulp() {
    let rows = oracle_rows();
    assert!(rows.len() >= 1000);
    let mut worst = 0;
    for (delta, want) in rows {
        let k = make_sinc_kernel(delta, 12).unwrap();
        assert_eq!(k.taps().len(), 25);
        for (got, want) in k.taps().iter().zip(&want) {
            worst = worst.max(ulps(*got, *want));
        }
    }
    println!("worst distance {worst} ulp");
    assert!(worst <= 1, "worst distance {worst} ulp");
}

#[test]
fn integer_shifts_are_exact_unit_impulses() {
    for d in -12..=12 {
        let k = make_sinc_kernel(d as f64, 12).unwrap();
        for n in -12..=12i64 {
            assert_eq!(k.tap(n), if n + d == 0 { 1.0 } else { 0.0 }, "delta {d} tap {n}");
        }
    }
}

#[test]
fn half_width_is_a_parameter() {
    let k = make_sinc_kernel(0.3, 4).unwrap();
    assert_eq!(k.taps().len(), 9);
    assert!(make_sinc_kernel(4.5, 4).is_err());
}

#[test]
fn frequency_response_spans_zero_to_pi() {
    let resp = frequency_response(&make_sinc_kernel(0.5, 12).unwrap(), 101).unwrap();
    assert_eq!(resp.len(), 101);
    assert_eq!(resp[0].0, 0.0);
    assert_eq!(resp[100].0, 1.0);
    // half-sample shift: symmetric taps, so zero response at pi up to truncation
    assert!(resp[100].1 < 0.3);
}

#[test]
fn filtered_tone_is_delayed_by_delta() {
    let fs = 22050.0;
    let len = 4096;
    let w = 2.0 * std::f64::consts::PI * 0.1;
    let x: Vec<f64> = (0..len).map(|n| (w * n as f64).sin()).collect();
    let sig = Signal::mono(fs, x.clone()).unwrap();
    for delta in [-1.5, -0.5, -0.25, 0.25, 0.5, 1.5] {
        let y = apply_filter(&sig, &make_sinc_kernel(delta, 12).unwrap());
        let d = estimate_delay(&x, y.data(), 4, 64).unwrap();
        assert!((d - delta).abs() < 0.05, "delta {delta}: measured {d}");
    }
}

#[test]
fn integer_kernel_filtering_is_an_index_shift() {
    let mut rng = DeltaRng::seed_from_u64(5);
    let x: Vec<f64> = (0..3 * 64).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let sig = Signal::new(3, 8000.0, x.clone()).unwrap();
    for d in [-7i64, -2, 0, 1, 12] {
        let y = apply_filter(&sig, &make_sinc_kernel(d as f64, 12).unwrap());
        for c in 0..3 {
            for t in 0..64i64 {
                let s = t - d;
                let want = if (0..64).contains(&s) { x[c * 64 + s as usize] } else { 0.0 };
                assert_eq!(y.channel(c)[t as usize], want);
            }
        }
    }
}
