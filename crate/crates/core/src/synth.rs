//! Synthetic test and training signals.

use core::cmp::Ordering;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::delta::DeltaRng;
use crate::math::{self, PI};
use crate::{Error, Result, Signal};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum HarmonicCount {
    /// Exactly this many harmonics (including the fundamental).
    Fixed(usize),
    /// Every harmonic strictly below this frequency in Hz.
    Below(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum SynthKind {
    /// Sum of harmonics of an f0 drawn uniformly from `[f0_min, f0_max]`.
    Harmonic { f0_min: f64, f0_max: f64, harmonics: HarmonicCount },
    /// Linear sweep from `start` to `end` Hz.
    Chirp { start: f64, end: f64 },
    /// White Gaussian noise.
    Noise,
    /// A single 1.0 at `index`.
    Impulse { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Envelope {
    Flat,
    /// Raised-cosine fades plus slow random amplitude modulation (< 6 Hz).
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub sample_rate: f64,
    pub len: usize,
    pub amplitude: f64,
    pub envelope: Envelope,
    pub seed: u64,
}

impl SynthSpec {
    pub fn harmonic(f0: f64, harmonics: usize, sample_rate: f64, len: usize) -> Self {
        SynthSpec {
            kind: SynthKind::Harmonic { f0_min: f0, f0_max: f0, harmonics: HarmonicCount::Fixed(harmonics) },
            sample_rate,
            len,
            amplitude: 0.5,
            envelope: Envelope::Flat,
            seed: 0,
        }
    }

    /// Highest frequency the spec can produce, for band-limited kinds.
    pub fn max_frequency(&self) -> Option<f64> {
        match self.kind {
            SynthKind::Harmonic { f0_max, harmonics: HarmonicCount::Fixed(n), .. } => Some(f0_max * n as f64),
            SynthKind::Harmonic { harmonics: HarmonicCount::Below(f), .. } => Some(f),
            SynthKind::Chirp { start, end } => Some(start.max(end)),
            _ => None,
        }
    }
}

fn validate(spec: &SynthSpec) -> Result<()> {
    if spec.len == 0 || spec.sample_rate.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(Error::Config("synthesis needs a positive length and sample rate".into()));
    }
    let nyquist = spec.sample_rate / 2.0;
    match spec.kind {
        SynthKind::Harmonic { f0_min, f0_max, harmonics } => {
            if !(f0_min > 0.0 && f0_min <= f0_max) {
                return Err(Error::Config(format!("bad f0 range [{f0_min}, {f0_max}]")));
            }
            let top = match harmonics {
                HarmonicCount::Fixed(0) => return Err(Error::Config("need at least one harmonic".into())),
                HarmonicCount::Fixed(n) => f0_max * n as f64,
                HarmonicCount::Below(f) => {
                    if f <= f0_max {
                        return Err(Error::Config(format!("harmonic limit {f} Hz is below f0 {f0_max} Hz")));
                    }
                    f
                }
            };
            if top >= nyquist {
                return Err(Error::Config(format!("highest harmonic {top} Hz reaches Nyquist {nyquist} Hz")));
            }
        }
        SynthKind::Chirp { start, end } => {
            if start.max(end) >= nyquist || start.min(end) < 0.0 {
                return Err(Error::Config(format!("chirp {start}..{end} Hz outside [0, {nyquist})")));
            }
        }
        SynthKind::Impulse { index } => {
            if index >= spec.len {
                return Err(Error::Config(format!("impulse index {index} past length {}", spec.len)));
            }
        }
        SynthKind::Noise => {}
    }
    Ok(())
}

pub fn synthesize(spec: &SynthSpec) -> Result<Signal> {
    validate(spec)?;
    let mut rng = DeltaRng::seed_from_u64(spec.seed);
    let fs = spec.sample_rate;
    let n = spec.len;
    let mut x = vec![0.0; n];
    match spec.kind {
        SynthKind::Harmonic { f0_min, f0_max, harmonics } => {
            let f0 = if f0_max > f0_min { rng.uniform(f0_min, f0_max) } else { f0_min };
            let count = match harmonics {
                HarmonicCount::Fixed(k) => k,
                HarmonicCount::Below(f) => math::ceil(f / f0) as usize - 1,
            };
            let parts: Vec<(f64, f64, f64)> = (1..=count)
                .map(|h| (h as f64 * f0, rng.uniform(0.3, 1.0) / h as f64, rng.uniform(0.0, 2.0 * PI)))
                .collect();
            let norm: f64 = parts.iter().map(|p| p.1).sum();
            for (t, v) in x.iter_mut().enumerate() {
                let time = t as f64 / fs;
                *v = parts.iter().map(|&(f, a, ph)| a * math::sin(2.0 * PI * f * time + ph)).sum::<f64>() / norm;
            }
        }
        SynthKind::Chirp { start, end } => {
            let dur = n as f64 / fs;
            for (t, v) in x.iter_mut().enumerate() {
                let time = t as f64 / fs;
                *v = math::sin(2.0 * PI * (start * time + 0.5 * (end - start) / dur * time * time));
            }
        }
        SynthKind::Noise => x.iter_mut().for_each(|v| *v = rng.gaussian() * 0.5),
        SynthKind::Impulse { index } => x[index] = 1.0,
    }
    if !matches!(spec.kind, SynthKind::Impulse { .. }) {
        let env = envelope(spec.envelope, n, fs, &mut rng);
        for (v, e) in x.iter_mut().zip(env) {
            *v *= spec.amplitude * e;
        }
    }
    Signal::mono(fs, x)
}

fn envelope(kind: Envelope, n: usize, fs: f64, rng: &mut DeltaRng) -> Vec<f64> {
    match kind {
        Envelope::Flat => vec![1.0; n],
        Envelope::Smooth => {
            let fade = ((0.01 * fs) as usize).clamp(1, n / 4 + 1);
            let rate = rng.uniform(1.0, 6.0);
            let phase = rng.uniform(0.0, 2.0 * PI);
            let depth = rng.uniform(0.0, 0.4);
            (0..n)
                .map(|t| {
                    let edge = t.min(n - 1 - t);
                    let ramp = if edge < fade { 0.5 - 0.5 * math::cos(PI * edge as f64 / fade as f64) } else { 1.0 };
                    let am = 1.0 - depth + depth * math::sin(2.0 * PI * rate * t as f64 / fs + phase);
                    ramp * am
                })
                .collect()
        }
    }
}
