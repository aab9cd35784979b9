//! Iterative radix-2 complex FFT.

use alloc::vec::Vec;

use crate::math::{self, PI};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        math::sqrt(self.norm_sqr())
    }
}

/// Precomputed twiddles and bit reversal for one power-of-two size.
#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    twiddles: Vec<Complex>,
    rev: Vec<usize>,
}

impl Fft {
    /// Panics unless `n` is a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT size {n} is not a power of two");
        let bits = n.trailing_zeros();
        let rev = (0..n).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect();
        let twiddles = (0..n / 2)
            .map(|k| {
                let a = -2.0 * PI * k as f64 / n as f64;
                Complex::new(math::cos(a), math::sin(a))
            })
            .collect();
        Fft { n, twiddles, rev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward transform `X[k] = sum x[n] e^{-2 pi i k n / N}`.
    pub fn forward(&self, buf: &mut [Complex]) {
        self.run(buf, false);
    }

    /// Unnormalized inverse `x[n] = sum X[k] e^{+2 pi i k n / N}`.
    pub fn inverse_unscaled(&self, buf: &mut [Complex]) {
        self.run(buf, true);
    }

    fn run(&self, buf: &mut [Complex], inverse: bool) {
        let n = self.n;
        assert_eq!(buf.len(), n);
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let step = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let mut w = self.twiddles[k * step];
                    if inverse {
                        w.im = -w.im;
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half];
                    let t = Complex::new(b.re * w.re - b.im * w.im, b.re * w.im + b.im * w.re);
                    buf[start + k] = Complex::new(a.re + t.re, a.im + t.im);
                    buf[start + k + half] = Complex::new(a.re - t.re, a.im - t.im);
                }
            }
            size *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn matches_direct_dft() {
        let n = 16;
        let x: Vec<Complex> = (0..n).map(|i| Complex::new((i as f64 * 0.7).sin(), (i as f64).cos())).collect();
        let mut y = x.clone();
        Fft::new(n).forward(&mut y);
        for (k, yk) in y.iter().enumerate() {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (t, v) in x.iter().enumerate() {
                let a = -2.0 * core::f64::consts::PI * (k * t) as f64 / n as f64;
                re += v.re * a.cos() - v.im * a.sin();
                im += v.re * a.sin() + v.im * a.cos();
            }
            assert!((yk.re - re).abs() < 1e-12 && (yk.im - im).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let n = 64;
        let x: Vec<Complex> = (0..n).map(|i| Complex::new(i as f64, -(i as f64) * 0.5)).collect();
        let fft = Fft::new(n);
        let mut y = x.clone();
        fft.forward(&mut y);
        fft.inverse_unscaled(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a.re - b.re / n as f64).abs() < 1e-9);
            assert!((a.im - b.im / n as f64).abs() < 1e-9);
        }
        let mut one = vec![Complex::new(3.0, 0.0)];
        Fft::new(1).forward(&mut one);
        assert_eq!(one[0].re, 3.0);
    }
}
