//! Reference blocks shared by the integration tests.

#![allow(dead_code)]

use jengan_core::math::sinc;
use jengan_core::nn::{Conv1d, Module, Param, Tensor1D};
use jengan_core::wrap::Tape;
use jengan_core::{Block, DeltaRng, Ratio, Result, Signal};

/// Passes its input through unchanged.
pub struct Identity;

impl Module for Identity {
    fn visit_params(&self, _: &mut dyn FnMut(&Param)) {}
    fn visit_params_mut(&mut self, _: &mut dyn FnMut(&mut Param)) {}
}

impl Block for Identity {
    fn resample_ratio(&self) -> Ratio {
        Ratio::ONE
    }
    fn forward(&self, x: &Tensor1D, _: &mut Tape) -> Result<Tensor1D> {
        Ok(x.clone())
    }
    fn backward(&mut self, _: &Tape, g: &Tensor1D) -> Result<Tensor1D> {
        Ok(g.clone())
    }
}

/// A bias-free mono convolution: linear and time-invariant.
pub struct Lti(pub Conv1d);

impl Lti {
    pub fn new(kernel: usize, seed: u64) -> Self {
        let mut rng = DeltaRng::seed_from_u64(seed);
        let mut conv = Conv1d::same("lti", 1, 1, kernel, 1, &mut rng);
        conv.bias.value.iter_mut().for_each(|b| *b = 0.0);
        Lti(conv)
    }
}

impl Module for Lti {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        self.0.visit_params(f)
    }
    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.0.visit_params_mut(f)
    }
}

impl Block for Lti {
    fn resample_ratio(&self) -> Ratio {
        Ratio::ONE
    }
    fn forward(&self, x: &Tensor1D, tape: &mut Tape) -> Result<Tensor1D> {
        tape.push(x.clone());
        self.0.forward(x)
    }
    fn backward(&mut self, tape: &Tape, g: &Tensor1D) -> Result<Tensor1D> {
        self.0.backward(&tape[0], g)
    }
}

/// Zero insertion by two followed by a Hann-windowed half-band sinc
/// interpolator. Even output samples reproduce the input exactly.
pub struct IdealUpsampler {
    taps: Vec<f64>,
    half: usize,
}

impl IdealUpsampler {
    pub fn new(half: usize) -> Self {
        let taps = (-(half as i64)..=half as i64)
            .map(|k| {
                let w = 0.5 + 0.5 * (std::f64::consts::PI * k as f64 / (half as f64 + 1.0)).cos();
                sinc(k as f64 / 2.0) * w
            })
            .collect();
        IdealUpsampler { taps, half }
    }

    pub fn upsample(&self, x: &[f64]) -> Vec<f64> {
        let n = 2 * x.len();
        (0..n)
            .map(|t| {
                let mut acc = 0.0;
                for (j, &h) in self.taps.iter().enumerate() {
                    let u = t as i64 + j as i64 - self.half as i64;
                    if u >= 0 && (u as usize) < n && u % 2 == 0 {
                        acc += h * x[u as usize / 2];
                    }
                }
                acc
            })
            .collect()
    }
}

impl Module for IdealUpsampler {
    fn visit_params(&self, _: &mut dyn FnMut(&Param)) {}
    fn visit_params_mut(&mut self, _: &mut dyn FnMut(&mut Param)) {}
}

impl Block for IdealUpsampler {
    fn resample_ratio(&self) -> Ratio {
        Ratio::upsample(2).unwrap()
    }
    fn forward(&self, x: &Tensor1D, _: &mut Tape) -> Result<Tensor1D> {
        let mut data = Vec::with_capacity(2 * x.data.len());
        for b in 0..x.batch {
            for c in 0..x.channels {
                data.extend(self.upsample(x.row(b, c)));
            }
        }
        Tensor1D::from_vec(x.batch, x.channels, 2 * x.len, data)
    }
    fn backward(&mut self, _: &Tape, _: &Tensor1D) -> Result<Tensor1D> {
        unimplemented!("the reference upsampler is forward-only")
    }
}

/// Sum of tones `(amplitude, radians per sample, phase)`.
pub fn tones(parts: &[(f64, f64, f64)], len: usize, sample_rate: f64) -> Signal {
    let data = (0..len).map(|n| parts.iter().map(|&(a, w, p)| a * (w * n as f64 + p).sin()).sum()).collect();
    Signal::mono(sample_rate, data).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn random_tensor(rng: &mut DeltaRng, batch: usize, channels: usize, len: usize) -> Tensor1D {
    let data = (0..batch * channels * len).map(|_| rng.uniform(-1.0, 1.0)).collect();
    Tensor1D::from_vec(batch, channels, len, data).unwrap()
}
