//! Slaney-style mel filterbank and differentiable log-mel spectrogram.

use core::cmp::Ordering;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::fft::Complex;
use super::stft::{Padding, Stft, StftConfig};
use crate::math;
use crate::{Error, Result, Signal};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct MelConfig {
    pub sample_rate: f64,
    pub fft_size: usize,
    pub hop: usize,
    pub win_length: usize,
    pub n_mels: usize,
    pub fmin: f64,
    pub fmax: f64,
    /// Log floor, `ln(max(mel, floor))`.
    pub floor: f64,
    /// Added to the squared magnitude before the square root.
    pub magnitude_eps: f64,
}

impl Default for MelConfig {
    fn default() -> Self {
        MelConfig {
            sample_rate: 22050.0,
            fft_size: 1024,
            hop: 256,
            win_length: 1024,
            n_mels: 80,
            fmin: 0.0,
            fmax: 8000.0,
            floor: 1e-5,
            magnitude_eps: 1e-9,
        }
    }
}

impl MelConfig {
    /// Same filterbank with a 64-sample hop, the frame rate of the toy vocoder.
    pub fn toy() -> Self {
        MelConfig { hop: 64, ..MelConfig::default() }
    }

    /// Reflect padding of `(fft - hop) / 2` so a length `n * hop` signal gives `n` frames.
    pub fn stft_config(&self) -> StftConfig {
        StftConfig {
            fft_size: self.fft_size,
            hop: self.hop,
            win_length: self.win_length,
            padding: Padding::Reflect((self.fft_size - self.hop) / 2),
        }
    }

    pub fn log_floor(&self) -> f64 {
        math::ln(self.floor)
    }
}

fn hz_to_mel(f: f64) -> f64 {
    let f_sp = 200.0 / 3.0;
    let min_log_hz = 1000.0;
    let min_log_mel = min_log_hz / f_sp;
    let logstep = math::ln(6.4) / 27.0;
    if f >= min_log_hz {
        min_log_mel + math::ln(f / min_log_hz) / logstep
    } else {
        f / f_sp
    }
}

fn mel_to_hz(m: f64) -> f64 {
    let f_sp = 200.0 / 3.0;
    let min_log_hz = 1000.0;
    let min_log_mel = min_log_hz / f_sp;
    let logstep = math::ln(6.4) / 27.0;
    if m >= min_log_mel {
        min_log_hz * math::exp(logstep * (m - min_log_mel))
    } else {
        f_sp * m
    }
}

/// Triangular, area-normalized mel filters, `n_mels x (fft/2 + 1)` row-major.
pub fn mel_filterbank(cfg: &MelConfig) -> Vec<f64> {
    let bins = cfg.fft_size / 2 + 1;
    let fft_freqs: Vec<f64> = (0..bins).map(|k| k as f64 * cfg.sample_rate / cfg.fft_size as f64).collect();
    let (lo, hi) = (hz_to_mel(cfg.fmin), hz_to_mel(cfg.fmax));
    let pts: Vec<f64> =
        (0..cfg.n_mels + 2).map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (cfg.n_mels + 1) as f64)).collect();
    let mut w = vec![0.0; cfg.n_mels * bins];
    for m in 0..cfg.n_mels {
        let (f0, f1, f2) = (pts[m], pts[m + 1], pts[m + 2]);
        let norm = 2.0 / (f2 - f0);
        for (k, &f) in fft_freqs.iter().enumerate() {
            let rise = (f - f0) / (f1 - f0);
            let fall = (f2 - f) / (f2 - f1);
            w[m * bins + k] = rise.min(fall).max(0.0) * norm;
        }
    }
    w
}

/// Log-mel frames, `frames x n_mels` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMel {
    pub frames: usize,
    pub n_mels: usize,
    pub data: Vec<f64>,
}

impl LogMel {
    pub fn frame(&self, t: usize) -> &[f64] {
        &self.data[t * self.n_mels..(t + 1) * self.n_mels]
    }

    /// Transposed copy, `n_mels x frames`: the layout of network features.
    pub fn channels_major(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.data.len()];
        for t in 0..self.frames {
            for m in 0..self.n_mels {
                out[m * self.frames + t] = self.data[t * self.n_mels + m];
            }
        }
        out
    }
}

/// Intermediate values needed by [`MelTransform::backward`].
#[derive(Debug, Clone)]
pub struct MelCache {
    len: usize,
    spectra: Vec<Vec<Complex>>,
    magnitudes: Vec<Vec<f64>>,
    mel: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MelTransform {
    pub cfg: MelConfig,
    stft: Stft,
    basis: Vec<f64>,
}

impl MelTransform {
    pub fn new(cfg: MelConfig) -> Result<Self> {
        if cfg.n_mels == 0
            || cfg.fmax.partial_cmp(&cfg.fmin) != Some(Ordering::Greater)
            || cfg.fmax > cfg.sample_rate / 2.0 + 1e-9
        {
            return Err(Error::Config(format!(
                "mel band [{}, {}] Hz with {} bins is invalid at {} Hz",
                cfg.fmin, cfg.fmax, cfg.n_mels, cfg.sample_rate
            )));
        }
        if cfg.fft_size <= cfg.hop {
            return Err(Error::Config("mel FFT size must exceed the hop".into()));
        }
        Ok(MelTransform { stft: Stft::new(cfg.stft_config())?, basis: mel_filterbank(&cfg), cfg })
    }

    pub fn basis(&self) -> &[f64] {
        &self.basis
    }

    pub fn frames(&self, len: usize) -> usize {
        self.cfg.stft_config().frames(len)
    }

    pub fn forward(&self, x: &[f64]) -> Result<LogMel> {
        Ok(self.forward_cached(x)?.0)
    }

    pub fn forward_cached(&self, x: &[f64]) -> Result<(LogMel, MelCache)> {
        let spectra = self.stft.spectra(x)?;
        let bins = self.stft.cfg.bins();
        let n_mels = self.cfg.n_mels;
        let eps = self.cfg.magnitude_eps;
        let magnitudes: Vec<Vec<f64>> =
            spectra.iter().map(|s| s.iter().map(|c| math::sqrt(c.norm_sqr() + eps)).collect()).collect();
        let mut mel = vec![0.0; spectra.len() * n_mels];
        for (t, mag) in magnitudes.iter().enumerate() {
            for m in 0..n_mels {
                let row = &self.basis[m * bins..(m + 1) * bins];
                mel[t * n_mels + m] = row.iter().zip(mag).map(|(w, a)| w * a).sum();
            }
        }
        let data = mel.iter().map(|&v| math::ln(v.max(self.cfg.floor))).collect();
        let out = LogMel { frames: spectra.len(), n_mels, data };
        Ok((out, MelCache { len: x.len(), spectra, magnitudes, mel }))
    }

    /// Gradient w.r.t. the input samples given `dL/dlogmel` (`frames x n_mels`).
    pub fn backward(&self, cache: &MelCache, grad: &[f64]) -> Vec<f64> {
        let bins = self.stft.cfg.bins();
        let n_mels = self.cfg.n_mels;
        let cotangents: Vec<Vec<Complex>> = cache
            .spectra
            .iter()
            .enumerate()
            .map(|(t, spec)| {
                let mut gmag = vec![0.0; bins];
                for m in 0..n_mels {
                    let v = cache.mel[t * n_mels + m];
                    if v < self.cfg.floor {
                        continue;
                    }
                    let g = grad[t * n_mels + m] / v;
                    for (gk, w) in gmag.iter_mut().zip(&self.basis[m * bins..(m + 1) * bins]) {
                        *gk += g * w;
                    }
                }
                spec.iter()
                    .zip(&cache.magnitudes[t])
                    .zip(&gmag)
                    .map(|((c, &a), &g)| Complex::new(g * c.re / a, g * c.im / a))
                    .collect()
            })
            .collect();
        let padded_len = cache.len + 2 * (self.cfg.fft_size - self.cfg.hop) / 2;
        let g = self.stft.backward_frames(&cotangents, padded_len);
        self.stft.unpad_grad(&g, cache.len)
    }
}

/// 80-bin log-mel frames of a mono signal; the signal's rate overrides `cfg`.
pub fn mel_spectrogram(x: &Signal, cfg: &MelConfig) -> Result<LogMel> {
    if x.channels() != 1 {
        return Err(Error::InvalidSignal("mel spectrogram expects a mono signal".into()));
    }
    let cfg = MelConfig { sample_rate: x.sample_rate(), ..*cfg };
    MelTransform::new(cfg)?.forward(x.data())
}

/// Mean absolute difference of log-mel frames under the default mel config.
pub fn mel_mae(a: &Signal, b: &Signal) -> Result<f64> {
    mel_mae_with(a, b, &MelConfig::default())
}

pub fn mel_mae_with(a: &Signal, b: &Signal, cfg: &MelConfig) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    let ma = mel_spectrogram(a, cfg)?;
    let mb = mel_spectrogram(b, cfg)?;
    let sum: f64 = ma.data.iter().zip(&mb.data).map(|(x, y)| (x - y).abs()).sum();
    Ok(sum / ma.data.len() as f64)
}
