use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::fft::{Complex, Fft};
use crate::math::{self, PI};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Padding {
    None,
    /// Reflect-pad both ends by this many samples (edge sample not repeated).
    Reflect(usize),
}

/// Hann-windowed STFT geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StftConfig {
    pub fft_size: usize,
    pub hop: usize,
    pub win_length: usize,
    pub padding: Padding,
}

impl StftConfig {
    /// Frames centered on multiples of `hop` (reflect padding of `fft_size / 2`).
    pub fn centered(fft_size: usize, hop: usize, win_length: usize) -> Self {
        StftConfig { fft_size, hop, win_length, padding: Padding::Reflect(fft_size / 2) }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fft_size.is_power_of_two() {
            return Err(Error::Config(format!("FFT size {} is not a power of two", self.fft_size)));
        }
        if self.hop == 0 || self.hop > self.win_length || self.win_length > self.fft_size {
            return Err(Error::Config(format!(
                "need 0 < hop ({}) <= window ({}) <= fft size ({})",
                self.hop, self.win_length, self.fft_size
            )));
        }
        Ok(())
    }

    pub fn bins(&self) -> usize {
        self.fft_size / 2 + 1
    }

    fn pad(&self) -> usize {
        match self.padding {
            Padding::None => 0,
            Padding::Reflect(p) => p,
        }
    }

    pub fn frames(&self, len: usize) -> usize {
        let padded = len + 2 * self.pad();
        if padded < self.fft_size {
            0
        } else {
            (padded - self.fft_size) / self.hop + 1
        }
    }
}

/// Periodic Hann window of `win_length`, zero-padded to `fft_size` around the center.
pub fn hann_window(cfg: &StftConfig) -> Vec<f64> {
    let mut w = vec![0.0; cfg.fft_size];
    let off = (cfg.fft_size - cfg.win_length) / 2;
    for n in 0..cfg.win_length {
        w[off + n] = 0.5 - 0.5 * math::cos(2.0 * PI * n as f64 / cfg.win_length as f64);
    }
    w
}

/// Time-frequency magnitudes, `frames x bins`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub frames: usize,
    pub bins: usize,
    pub data: Vec<f64>,
}

impl Spectrogram {
    pub fn frame(&self, t: usize) -> &[f64] {
        &self.data[t * self.bins..(t + 1) * self.bins]
    }
}

/// Reusable STFT plan.
#[derive(Debug, Clone)]
pub struct Stft {
    pub cfg: StftConfig,
    fft: Fft,
    window: Vec<f64>,
}

impl Stft {
    pub fn new(cfg: StftConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Stft { fft: Fft::new(cfg.fft_size), window: hann_window(&cfg), cfg })
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let mut required = self.cfg.win_length.max(1);
        if let Padding::Reflect(p) = self.cfg.padding {
            required = required.max(p + 1);
        }
        if self.cfg.frames(len) == 0 {
            required = required.max(self.cfg.fft_size - 2 * self.cfg.pad().min(self.cfg.fft_size / 2));
        }
        if len < required || self.cfg.frames(len) == 0 {
            return Err(Error::TooShort { len, required });
        }
        Ok(())
    }

    pub fn padded(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let p = self.cfg.pad();
        let n = x.len();
        let mut out = Vec::with_capacity(n + 2 * p);
        out.extend((0..p).map(|i| x[p - i]));
        out.extend_from_slice(x);
        out.extend((0..p).map(|i| x[n - 2 - i]));
        Ok(out)
    }

    /// Folds a gradient on the padded signal back onto the original samples.
    pub fn unpad_grad(&self, g: &[f64], len: usize) -> Vec<f64> {
        let p = self.cfg.pad();
        let mut out = g[p..p + len].to_vec();
        for i in 0..p {
            out[p - i] += g[i];
            out[len - 2 - i] += g[p + len + i];
        }
        out
    }

    /// One-sided spectra (`bins` entries) of every frame.
    pub fn spectra(&self, x: &[f64]) -> Result<Vec<Vec<Complex>>> {
        let padded = self.padded(x)?;
        let frames = self.cfg.frames(x.len());
        let n = self.cfg.fft_size;
        let mut buf = vec![Complex::ZERO; n];
        let mut out = Vec::with_capacity(frames);
        for t in 0..frames {
            let seg = &padded[t * self.cfg.hop..t * self.cfg.hop + n];
            for ((b, &s), &w) in buf.iter_mut().zip(seg).zip(&self.window) {
                *b = Complex::new(s * w, 0.0);
            }
            self.fft.forward(&mut buf);
            out.push(buf[..self.cfg.bins()].to_vec());
        }
        Ok(out)
    }

    /// Gradient of a loss w.r.t. the frame samples given per-bin complex
    /// cotangents `z[k] = dL/dRe + i dL/dIm`, accumulated on the padded signal.
    pub fn backward_frames(&self, cotangents: &[Vec<Complex>], padded_len: usize) -> Vec<f64> {
        let n = self.cfg.fft_size;
        let mut g = vec![0.0; padded_len];
        let mut buf = vec![Complex::ZERO; n];
        for (t, z) in cotangents.iter().enumerate() {
            // with s = x * w: dL/ds_n = Re(sum_k z_k e^{+2 pi i k n / N})
            buf.iter_mut().for_each(|b| *b = Complex::ZERO);
            buf[..z.len()].copy_from_slice(z);
            self.fft.inverse_unscaled(&mut buf);
            let base = t * self.cfg.hop;
            for (i, (b, &w)) in buf.iter().zip(&self.window).enumerate() {
                g[base + i] += w * b.re;
            }
        }
        g
    }

    pub fn magnitude(&self, x: &[f64]) -> Result<Spectrogram> {
        let spectra = self.spectra(x)?;
        let bins = self.cfg.bins();
        let frames = spectra.len();
        let data = spectra.into_iter().flat_map(|s| s.into_iter().map(Complex::abs)).collect();
        Ok(Spectrogram { frames, bins, data })
    }
}

pub fn stft_magnitude(x: &[f64], cfg: &StftConfig) -> Result<Spectrogram> {
    Stft::new(*cfg)?.magnitude(x)
}
