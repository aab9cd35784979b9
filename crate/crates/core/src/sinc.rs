//! Shifted, truncated sinc kernels and channel-wise filtering.
//!
//! `K(delta)[n] = sinc(n + delta)` for `n` in `[-half_width, half_width]`.
//! Filtering is a zero-padded, same-length cross-correlation
//! `y[t] = sum_n K[n] * x[t + n]`, so `K(delta)` delays a band-limited signal
//! by `delta` samples. No window and no normalization are applied; integer
//! shifts give exact unit impulses and therefore exact index shifts.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, PI};
use crate::{Error, Result, Signal};

pub const DEFAULT_HALF_WIDTH: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SincKernel {
    taps: Vec<f64>,
    delta: f64,
    half_width: usize,
}

impl SincKernel {
    /// Taps ordered from `n = -half_width` to `n = half_width`.
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Tap at offset `n`, or 0 outside the support.
    pub fn tap(&self, n: i64) -> f64 {
        let h = self.half_width as i64;
        if n < -h || n > h {
            0.0
        } else {
            self.taps[(n + h) as usize]
        }
    }

    /// True when the kernel is a single unit tap (integer shift).
    pub fn is_impulse(&self) -> bool {
        self.delta == math::round(self.delta)
    }
}

pub fn make_sinc_kernel(delta: f64, half_width: usize) -> Result<SincKernel> {
    let limit = half_width as f64;
    if !delta.is_finite() || delta.abs() > limit {
        return Err(Error::InvalidShift { shift: delta, limit });
    }
    let h = half_width as i64;
    let taps = (-h..=h).map(|n| math::sinc_of_sum(n as f64, delta)).collect();
    Ok(SincKernel { taps, delta, half_width })
}

/// Convenience for the default 25-tap kernel.
pub fn kernel(delta: f64) -> Result<SincKernel> {
    make_sinc_kernel(delta, DEFAULT_HALF_WIDTH)
}

/// Filters every row of `src` (rows of `row_len` samples) with `k`.
pub fn correlate_rows(src: &[f64], row_len: usize, k: &SincKernel) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    if row_len == 0 {
        return out;
    }
    let h = k.half_width as isize;
    for (x, y) in src.chunks_exact(row_len).zip(out.chunks_exact_mut(row_len)) {
        for (i, &w) in k.taps.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let n = i as isize - h;
            // y[t] += w * x[t + n] for t + n inside the row
            let t0 = (-n).max(0) as usize;
            let t1 = (row_len as isize - n).min(row_len as isize);
            if t1 <= t0 as isize {
                continue;
            }
            let t1 = t1 as usize;
            let xs = &x[(t0 as isize + n) as usize..(t1 as isize + n) as usize];
            for (yt, xt) in y[t0..t1].iter_mut().zip(xs) {
                *yt += w * xt;
            }
        }
    }
    out
}

/// Adjoint of [`correlate_rows`]: `gx[j] = sum_n K[n] * gy[j - n]`.
pub fn correlate_rows_adjoint(grad: &[f64], row_len: usize, k: &SincKernel) -> Vec<f64> {
    let mut out = vec![0.0; grad.len()];
    if row_len == 0 {
        return out;
    }
    let h = k.half_width as isize;
    for (gy, gx) in grad.chunks_exact(row_len).zip(out.chunks_exact_mut(row_len)) {
        for (i, &w) in k.taps.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let n = i as isize - h;
            // gx[j] += w * gy[j - n]
            let j0 = n.max(0) as usize;
            let j1 = (row_len as isize + n).min(row_len as isize);
            if j1 <= j0 as isize {
                continue;
            }
            let j1 = j1 as usize;
            let gs = &gy[(j0 as isize - n) as usize..(j1 as isize - n) as usize];
            for (g, s) in gx[j0..j1].iter_mut().zip(gs) {
                *g += w * s;
            }
        }
    }
    out
}

/// Channel-wise filtering with zero padding; length and rate are preserved.
pub fn apply_filter(x: &Signal, k: &SincKernel) -> Signal {
    let data = correlate_rows(x.data(), x.len(), k);
    Signal::from_parts_unchecked(x.channels(), x.len(), x.sample_rate(), data)
}

/// Magnitude of the DTFT of the taps at `n_points` frequencies spanning `[0, pi]`.
///
/// Frequencies are returned normalized to `[0, 1]` (fraction of pi).
pub fn frequency_response(k: &SincKernel, n_points: usize) -> Result<Vec<(f64, f64)>> {
    if n_points < 2 {
        return Err(Error::Config("frequency response needs at least 2 points".into()));
    }
    let h = k.half_width as i64;
    let resp = (0..n_points)
        .map(|j| {
            let f = j as f64 / (n_points - 1) as f64;
            let w = f * PI;
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &tap) in k.taps.iter().enumerate() {
                let n = (i as i64 - h) as f64;
                re += tap * math::cos(w * n);
                im -= tap * math::sin(w * n);
            }
            (f, math::sqrt(re * re + im * im))
        })
        .collect();
    Ok(resp)
}

/// Delays every row by `shift` samples (any real value).
///
/// The integer part is applied as an exact index shift with zero fill and the
/// remaining fraction in `[-0.5, 0.5]` with a sinc kernel of `half_width`.
pub fn delay_rows(src: &[f64], row_len: usize, shift: f64, half_width: usize) -> Result<Vec<f64>> {
    if !shift.is_finite() {
        return Err(Error::InvalidShift { shift, limit: f64::INFINITY });
    }
    let whole = math::round(shift);
    let frac = shift - whole;
    let filtered;
    let base = if frac != 0.0 {
        filtered = correlate_rows(src, row_len, &make_sinc_kernel(frac, half_width)?);
        &filtered[..]
    } else {
        src
    };
    let k = whole as i64;
    let mut out = vec![0.0; src.len()];
    if row_len == 0 {
        return Ok(out);
    }
    for (x, y) in base.chunks_exact(row_len).zip(out.chunks_exact_mut(row_len)) {
        for (t, yt) in y.iter_mut().enumerate() {
            let s = t as i64 - k;
            if s >= 0 && (s as usize) < row_len {
                *yt = x[s as usize];
            }
        }
    }
    Ok(out)
}

/// [`delay_rows`] applied to a [`Signal`].
pub fn delay(x: &Signal, shift: f64, half_width: usize) -> Result<Signal> {
    let data = delay_rows(x.data(), x.len(), shift, half_width)?;
    Ok(Signal::from_parts_unchecked(x.channels(), x.len(), x.sample_rate(), data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn impulse(len: usize, at: usize) -> Signal {
        let mut d = vec![0.0; len];
        d[at] = 1.0;
        Signal::mono(22050.0, d).unwrap()
    }

    #[test]
    fn zero_shift_is_unit_impulse() {
        let k = make_sinc_kernel(0.0, 12).unwrap();
        assert_eq!(k.taps().len(), 25);
        for n in -12..=12 {
            assert_eq!(k.tap(n), if n == 0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn minus_one_puts_impulse_at_plus_one() {
        let k = make_sinc_kernel(-1.0, 12).unwrap();
        for n in -12..=12 {
            assert_eq!(k.tap(n), if n == 1 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn half_sample_taps_match_closed_form() {
        let k = make_sinc_kernel(0.5, 12).unwrap();
        let two_over_pi = 2.0 / core::f64::consts::PI;
        for (n, want) in [(0, two_over_pi), (-1, two_over_pi), (1, -two_over_pi / 3.0), (-2, -two_over_pi / 3.0)] {
            assert!((k.tap(n) - want).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn rejects_shift_outside_support() {
        assert!(matches!(make_sinc_kernel(12.5, 12), Err(Error::InvalidShift { .. })));
        assert!(make_sinc_kernel(-3.0, 2).is_err());
        assert!(make_sinc_kernel(f64::NAN, 12).is_err());
        assert!(make_sinc_kernel(12.0, 12).is_ok());
    }

    #[test]
    fn zero_signal_stays_zero() {
        let x = Signal::zeros(2, 64, 16000.0).unwrap();
        let y = apply_filter(&x, &make_sinc_kernel(0.37, 12).unwrap());
        assert!(y.data().iter().all(|&v| v == 0.0));
        assert_eq!(y.sample_rate(), 16000.0);
    }

    #[test]
    fn identity_kernel_keeps_impulse() {
        let x = impulse(50, 20);
        let y = apply_filter(&x, &make_sinc_kernel(0.0, 12).unwrap());
        assert_eq!(x, y);
    }

    /// Complex response of `k` to `e^{i w t}` under the correlation convention.
    fn response(k: &SincKernel, w: f64) -> (f64, f64) {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for n in -(k.half_width() as i64)..=k.half_width() as i64 {
            re += k.tap(n) * math::cos(w * n as f64);
            im += k.tap(n) * math::sin(w * n as f64);
        }
        (re, im)
    }

    /// Interior samples of a filtered sinusoid are exactly the scaled,
    /// phase-rotated sinusoid; this is the oracle for every tone test below.
    fn filtered_tone(k: &SincKernel, w: f64, phase: f64, n: f64) -> f64 {
        let (re, im) = response(k, w);
        libm::hypot(re, im) * math::sin(w * n + phase + libm::atan2(im, re))
    }

    #[test]
    fn delays_sine_by_quarter_sample() {
        let fs = 22050.0;
        let w = 2.0 * PI * 0.1;
        let len = 400;
        let x: Vec<f64> = (0..len).map(|n| math::sin(w * n as f64)).collect();
        let k = make_sinc_kernel(0.25, 12).unwrap();
        let y = apply_filter(&Signal::mono(fs, x).unwrap(), &k);
        let mut oracle_err = 0.0f64;
        let mut ideal_err = 0.0f64;
        for n in 12..len - 12 {
            let t = n as f64;
            oracle_err = oracle_err.max((y.data()[n] - filtered_tone(&k, w, 0.0, t)).abs());
            ideal_err = ideal_err.max((y.data()[n] - math::sin(w * (t - 0.25))).abs());
        }
        assert!(oracle_err < 1e-12, "oracle error {oracle_err}");
        // The unwindowed 25-tap kernel deviates from an ideal delay by
        // |H(w) - e^{-i w delta}| ~= 0.0189 at this frequency.
        let (re, im) = response(&k, w);
        let ripple = libm::hypot(re - math::cos(w * 0.25), im + math::sin(w * 0.25));
        assert!((ideal_err - ripple).abs() < 1e-3, "ideal {ideal_err} ripple {ripple}");
        assert!(ideal_err < 0.02, "max error {ideal_err}");
    }

    #[test]
    fn frequency_response_examples() {
        for d in [0.0, 1.0] {
            let k = make_sinc_kernel(d, 12).unwrap();
            for (_, m) in frequency_response(&k, 33).unwrap() {
                assert!((m - 1.0).abs() < 1e-12);
            }
        }
        // direct DTFT sum of the 25 taps at the two probe frequencies
        let k = make_sinc_kernel(0.5, 12).unwrap();
        let dtft = |w: f64| {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for n in -12i64..=12 {
                let t = k.tap(n);
                re += t * (w * n as f64).cos();
                im -= t * (w * n as f64).sin();
            }
            (re * re + im * im).sqrt()
        };
        let at_quarter = dtft(0.25 * core::f64::consts::PI);
        let near_nyq = dtft(0.999 * core::f64::consts::PI);
        assert!((0.95..=1.05).contains(&at_quarter));
        assert!(near_nyq < 0.3);
        let resp = frequency_response(&k, 5).unwrap();
        assert!((resp[1].0 - 0.25).abs() < 1e-15);
        assert!((resp[1].1 - at_quarter).abs() < 1e-12);
        assert!(frequency_response(&k, 1).is_err());
    }

    #[test]
    fn integer_kernel_is_index_shift() {
        let x: Vec<f64> = (0..40).map(|i| (i as f64 * 0.7).sin()).collect();
        for d in [-3i64, -1, 2, 5] {
            let y = correlate_rows(&x, 40, &make_sinc_kernel(d as f64, 12).unwrap());
            for t in 0..40i64 {
                let s = t - d;
                let want = if (0..40).contains(&s) { x[s as usize] } else { 0.0 };
                assert_eq!(y[t as usize], want);
            }
        }
    }

    #[test]
    fn delay_splits_integer_and_fraction() {
        let x: Vec<f64> = (0..300).map(|n| (0.2 * n as f64).sin()).collect();
        let a = delay_rows(&x, 300, 7.25, 12).unwrap();
        let b = correlate_rows(&delay_rows(&x, 300, 7.0, 12).unwrap(), 300, &make_sinc_kernel(0.25, 12).unwrap());
        for t in 40..260 {
            assert!((a[t] - b[t]).abs() < 1e-12);
        }
        let exact = delay_rows(&x, 300, 3.0, 12).unwrap();
        assert_eq!(exact[3..], x[..297]);
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    proptest! {
        #[test]
        fn adjoint_identity(delta in -12.0f64..12.0, seed in any::<u64>()) {
            let k = make_sinc_kernel(delta, 12).unwrap();
            let mut s = seed | 1;
            let mut next = || { s ^= s << 13; s ^= s >> 7; s ^= s << 17; (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5 };
            let x: Vec<f64> = (0..60).map(|_| next()).collect();
            let g: Vec<f64> = (0..60).map(|_| next()).collect();
            let lhs = dot(&correlate_rows(&x, 30, &k), &g);
            let rhs = dot(&x, &correlate_rows_adjoint(&g, 30, &k));
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn linearity(delta in -12.0f64..12.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let k = make_sinc_kernel(delta, 12).unwrap();
            let x: Vec<f64> = (0..48).map(|i| (i as f64 * 0.31).sin()).collect();
            let y: Vec<f64> = (0..48).map(|i| (i as f64 * 1.7).cos()).collect();
            let mix: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
            let lhs = correlate_rows(&mix, 48, &k);
            let fx = correlate_rows(&x, 48, &k);
            let fy = correlate_rows(&y, 48, &k);
            for t in 0..48 {
                let rhs = a * fx[t] + b * fy[t];
                let scale = lhs[t].abs().max(rhs.abs()).max(1.0);
                prop_assert!((lhs[t] - rhs).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn channels_are_independent(delta in -4.0f64..4.0) {
            let k = make_sinc_kernel(delta, 12).unwrap();
            let c0: Vec<f64> = (0..32).map(|i| (i as f64 * 0.4).sin()).collect();
            let c1: Vec<f64> = (0..32).map(|i| (i as f64 * 0.9).cos()).collect();
            let both = [c0.clone(), c1.clone()].concat();
            let x = Signal::new(2, 8000.0, both).unwrap();
            let y = apply_filter(&x, &k);
            prop_assert_eq!(y.channel(0), &correlate_rows(&c0, 32, &k)[..]);
            prop_assert_eq!(y.channel(1), &correlate_rows(&c1, 32, &k)[..]);
        }

        #[test]
        fn opposite_shifts_nearly_cancel(delta in -2.0f64..2.0) {
            // three tones, all below 0.8 pi
            let tones = [(1.0, 0.3, 0.0), (0.5, 1.1, 0.4), (0.25, 2.2, PI / 2.0)];
            let len = 400;
            let x: Vec<f64> = (0..len).map(|n| {
                tones.iter().map(|&(a, w, p)| a * math::sin(w * n as f64 + p)).sum()
            }).collect();
            let k_fwd = make_sinc_kernel(-delta, 12).unwrap();
            let k_back = make_sinc_kernel(delta, 12).unwrap();
            let back = correlate_rows(&correlate_rows(&x, len, &k_fwd), len, &k_back);
            let mut bound = 0.0;
            for t in 24..len - 24 {
                let mut want = 0.0;
                for &(a, w, p) in &tones {
                    let (r1, i1) = response(&k_fwd, w);
                    let (r2, i2) = response(&k_back, w);
                    let (re, im) = (r1 * r2 - i1 * i2, r1 * i2 + i1 * r2);
                    want += a * libm::hypot(re, im) * math::sin(w * t as f64 + p + libm::atan2(im, re));
                    if t == 24 {
                        bound += a * libm::hypot(re - 1.0, im);
                    }
                }
                prop_assert!((back[t] - want).abs() < 1e-12, "oracle mismatch at {}", t);
                prop_assert!((back[t] - x[t]).abs() <= bound + 1e-12);
            }
            // truncation ripple of the raw kernel caps how well the pair cancels
            prop_assert!(bound < 0.05, "cancellation bound {}", bound);
            if delta.fract() == 0.0 {
                prop_assert!(bound < 1e-12);
            }
        }
    }
}
