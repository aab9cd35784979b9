//! Central finite-difference checks of every reverse-mode pass.
//!
//! Each trial draws a random small instance of an operation, a random input
//! and a random cotangent `c`, and compares the analytic gradient of
//! `L = <c, f(x)>` against central differences on a random subset of input
//! and parameter coordinates. The trial error is `max |a - n| / max(|a|, |n|)`
//! taken over the checked coordinates (a norm-wise relative error, which stays
//! meaningful when individual partials are near zero).

use alloc::vec;
use alloc::vec::Vec;

use crate::delta::{sample_schedule, DeltaRng, SamplingMethod};
use crate::metrics::{MelConfig, MelTransform};
use crate::nn::{
    leaky_relu, leaky_relu_backward, tanh, tanh_backward, Conv1d, ConvTranspose1d, Module, Tensor1D, LEAKY_SLOPE,
};
use crate::sinc::{correlate_rows, correlate_rows_adjoint, make_sinc_kernel};
use crate::vocoder::{
    build_toy_discriminator, build_toy_generator, DiscriminatorConfig, DownBlock, FeatureTap, GeneratorConfig,
    ToyDiscriminator, ToyGenerator, UpBlock,
};
use crate::wrap::{assign_shift, wrap_backward, wrap_forward, Block, WrapStats};
use crate::Result;

/// Step of the central differences.
pub const STEP: f64 = 1e-5;

/// Coordinates checked per tensor and trial.
const COORDS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Op {
    Conv,
    StridedConv,
    TransposedConv,
    LeakyRelu,
    Tanh,
    SincFilter,
    WrappedBlock,
    WrappedGenerator,
    WrappedDiscriminator,
    LogMel,
}

impl Op {
    pub const ALL: [Op; 10] = [
        Op::Conv,
        Op::StridedConv,
        Op::TransposedConv,
        Op::LeakyRelu,
        Op::Tanh,
        Op::SincFilter,
        Op::WrappedBlock,
        Op::WrappedGenerator,
        Op::WrappedDiscriminator,
        Op::LogMel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Conv => "conv",
            Op::StridedConv => "strided conv",
            Op::TransposedConv => "transposed conv",
            Op::LeakyRelu => "leaky relu",
            Op::Tanh => "tanh",
            Op::SincFilter => "sinc filter",
            Op::WrappedBlock => "wrapped block",
            Op::WrappedGenerator => "wrapped generator",
            Op::WrappedDiscriminator => "wrapped discriminator",
            Op::LogMel => "log-mel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradReport {
    pub op: Op,
    pub trials: usize,
    /// Worst trial error.
    pub max_rel_error: f64,
}

/// Runs `trials` randomized checks of `op`.
pub fn check(op: Op, trials: usize, seed: u64) -> Result<GradReport> {
    let mut rng = DeltaRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let mut t = Trial::default();
        match op {
            Op::Conv => conv_trial(&mut rng, &mut t, false)?,
            Op::StridedConv => conv_trial(&mut rng, &mut t, true)?,
            Op::TransposedConv => tconv_trial(&mut rng, &mut t)?,
            Op::LeakyRelu => pointwise_trial(&mut rng, &mut t, true),
            Op::Tanh => pointwise_trial(&mut rng, &mut t, false),
            Op::SincFilter => sinc_trial(&mut rng, &mut t)?,
            Op::WrappedBlock => block_trial(&mut rng, &mut t)?,
            Op::WrappedGenerator => generator_trial(&mut rng, &mut t)?,
            Op::WrappedDiscriminator => discriminator_trial(&mut rng, &mut t)?,
            Op::LogMel => mel_trial(&mut rng, &mut t)?,
        }
        worst = worst.max(t.error());
    }
    Ok(GradReport { op, trials, max_rel_error: worst })
}

/// Analytic/numeric gradient pairs of one trial.
#[derive(Debug, Default)]
struct Trial {
    pairs: Vec<(f64, f64)>,
}

impl Trial {
    fn error(&self) -> f64 {
        let diff = self.pairs.iter().map(|(a, n)| (a - n).abs()).fold(0.0, f64::max);
        let scale = self.pairs.iter().map(|(a, n)| a.abs().max(n.abs())).fold(0.0, f64::max);
        if diff == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    /// Differentiates `loss` numerically with respect to `x` at a few
    /// coordinates and records them against `analytic`.
    fn inputs(
        &mut self,
        rng: &mut DeltaRng,
        x: &[f64],
        analytic: &[f64],
        mut loss: impl FnMut(&[f64]) -> Result<f64>,
    ) -> Result<()> {
        let mut probe = x.to_vec();
        for i in coords(rng, x.len()) {
            probe[i] = x[i] + STEP;
            let up = loss(&probe)?;
            probe[i] = x[i] - STEP;
            let down = loss(&probe)?;
            probe[i] = x[i];
            self.pairs.push((analytic[i], (up - down) / (2.0 * STEP)));
        }
        Ok(())
    }

    /// Same for the parameters of `model` (gradients must already be accumulated).
    fn params<M: Module + Clone>(
        &mut self,
        rng: &mut DeltaRng,
        model: &M,
        mut loss: impl FnMut(&M) -> Result<f64>,
    ) -> Result<()> {
        let values = flat_values(model);
        let grads = flat_grads(model);
        let mut probe = model.clone();
        for i in coords(rng, values.len()) {
            set_value(&mut probe, i, values[i] + STEP);
            let up = loss(&probe)?;
            set_value(&mut probe, i, values[i] - STEP);
            let down = loss(&probe)?;
            set_value(&mut probe, i, values[i]);
            self.pairs.push((grads[i], (up - down) / (2.0 * STEP)));
        }
        Ok(())
    }
}

fn coords(rng: &mut DeltaRng, n: usize) -> Vec<usize> {
    if n <= COORDS {
        (0..n).collect()
    } else {
        (0..COORDS).map(|_| rng.index(n)).collect()
    }
}

fn flat_values(m: &dyn Module) -> Vec<f64> {
    let mut out = Vec::new();
    m.visit_params(&mut |p| out.extend_from_slice(&p.value));
    out
}

fn flat_grads(m: &dyn Module) -> Vec<f64> {
    let mut out = Vec::new();
    m.visit_params(&mut |p| out.extend_from_slice(&p.grad));
    out
}

fn set_value(m: &mut dyn Module, index: usize, v: f64) {
    let mut offset = 0;
    m.visit_params_mut(&mut |p| {
        if (offset..offset + p.len()).contains(&index) {
            p.value[index - offset] = v;
        }
        offset += p.len();
    });
}

fn random_vec(rng: &mut DeltaRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect()
}

fn random_tensor(rng: &mut DeltaRng, batch: usize, channels: usize, len: usize) -> Tensor1D {
    Tensor1D { batch, channels, len, data: random_vec(rng, batch * channels * len) }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn with_data(shape: &Tensor1D, data: &[f64]) -> Tensor1D {
    Tensor1D { batch: shape.batch, channels: shape.channels, len: shape.len, data: data.to_vec() }
}

fn conv_trial(rng: &mut DeltaRng, t: &mut Trial, strided: bool) -> Result<()> {
    let (cin, cout) = (1 + rng.index(3), 1 + rng.index(3));
    let len = 6 + rng.index(12);
    let mut conv = if strided {
        let s = 2 + rng.index(3);
        Conv1d::strided("c", cin, cout, 2 * s + 1, s, rng)
    } else {
        let k = 1 + 2 * rng.index(3);
        Conv1d::same("c", cin, cout, k, 1 + rng.index(3), rng)
    };
    let batch = 1 + rng.index(2);
    let x = random_tensor(rng, batch, cin, len);
    let y = conv.forward(&x)?;
    let c = random_vec(rng, y.data.len());
    let gx = conv.backward(&x, &with_data(&y, &c))?;
    t.inputs(rng, &x.data, &gx.data, |p| Ok(dot(&c, &conv.forward(&with_data(&x, p))?.data)))?;
    t.params(rng, &conv, |m| Ok(dot(&c, &m.forward(&x)?.data)))
}

fn tconv_trial(rng: &mut DeltaRng, t: &mut Trial) -> Result<()> {
    let (cin, cout) = (1 + rng.index(3), 1 + rng.index(3));
    let mut tc = if rng.index(2) == 0 {
        ConvTranspose1d::upsampler("t", cin, cout, [2, 4, 8][rng.index(3)], rng)?
    } else {
        let k = 1 + rng.index(6);
        let s = 1 + rng.index(3);
        ConvTranspose1d::new("t", cin, cout, k, s, rng.index(k.div_ceil(2)), rng)
    };
    let (batch, len) = (1 + rng.index(2), 3 + rng.index(8));
    let x = random_tensor(rng, batch, cin, len);
    let y = tc.forward(&x)?;
    let c = random_vec(rng, y.data.len());
    let gx = tc.backward(&x, &with_data(&y, &c))?;
    t.inputs(rng, &x.data, &gx.data, |p| Ok(dot(&c, &tc.forward(&with_data(&x, p))?.data)))?;
    t.params(rng, &tc, |m| Ok(dot(&c, &m.forward(&x)?.data)))
}

fn pointwise_trial(rng: &mut DeltaRng, t: &mut Trial, leaky: bool) {
    let (channels, len) = (1 + rng.index(3), 4 + rng.index(12));
    let x = random_tensor(rng, 1, channels, len).map(|v| 3.0 * v);
    let c = random_vec(rng, x.data.len());
    let f = |x: &Tensor1D| if leaky { leaky_relu(x, LEAKY_SLOPE) } else { tanh(x) };
    let g = with_data(&x, &c);
    let gx = if leaky { leaky_relu_backward(&x, &g, LEAKY_SLOPE) } else { tanh_backward(&f(&x), &g) };
    // pointwise maps never fail
    let _ = t.inputs(rng, &x.data, &gx.data, |p| Ok(dot(&c, &f(&with_data(&x, p)).data)));
}

fn sinc_trial(rng: &mut DeltaRng, t: &mut Trial) -> Result<()> {
    let k = make_sinc_kernel(rng.uniform(-12.0, 12.0), 12)?;
    let len = 8 + rng.index(40);
    let rows = 1 + rng.index(3);
    let x = random_vec(rng, rows * len);
    let c = random_vec(rng, rows * len);
    let gx = correlate_rows_adjoint(&c, len, &k);
    t.inputs(rng, &x, &gx, |p| Ok(dot(&c, &correlate_rows(p, len, &k))))
}

fn block_trial(rng: &mut DeltaRng, t: &mut Trial) -> Result<()> {
    let v = rng.uniform(-2.0, 2.0);
    if rng.index(2) == 0 {
        let (cin, cout) = (1 + rng.index(3), 1 + rng.index(3));
        let block = UpBlock::new("up", cin, cout, [2, 4][rng.index(2)], 3, &[1, 3], rng)?;
        let len = 6 + rng.index(10);
        let x = random_tensor(rng, 1, cin, len);
        wrapped(rng, t, block, v, x)
    } else {
        let (cin, cout) = (1 + rng.index(3), 1 + rng.index(3));
        let block = DownBlock::new("down", cin, cout, [2, 4][rng.index(2)], rng)?;
        let len = 16 + rng.index(24);
        let x = random_tensor(rng, 1, cin, len);
        wrapped(rng, t, block, v, x)
    }
}

fn wrapped<B: Block + Clone>(rng: &mut DeltaRng, t: &mut Trial, mut block: B, v: f64, x: Tensor1D) -> Result<()> {
    let a = assign_shift(v, block.resample_ratio())?;
    let mut stats = WrapStats::default();
    let (y, tape) = wrap_forward(&block, &a, &x, &mut stats)?;
    let c = random_vec(rng, y.data.len());
    let gx = wrap_backward(&mut block, &tape, &with_data(&y, &c), None)?;
    let eval = |b: &B, input: &Tensor1D| -> Result<f64> {
        Ok(dot(&c, &wrap_forward(b, &a, input, &mut WrapStats::default())?.0.data))
    };
    t.inputs(rng, &x.data, &gx.data, |p| eval(&block, &with_data(&x, p)))?;
    t.params(rng, &block, |b| eval(b, &x))
}

fn generator_trial(rng: &mut DeltaRng, t: &mut Trial) -> Result<()> {
    let config = GeneratorConfig {
        mel_bins: 3,
        upsample_rates: vec![2, 2],
        initial_channels: 4,
        min_channels: 2,
        resblock_kernel: 3,
        resblock_dilations: vec![1, 3],
        io_kernel: 3,
    };
    let mut generator = build_toy_generator(&config, 4, rng.next_u64())?;
    let method = [SamplingMethod::Discrete, SamplingMethod::Uniform, SamplingMethod::normal()][rng.index(3)];
    let schedule = sample_schedule(method, generator.n_blocks(), rng)?;
    let len = 4 + rng.index(6);
    let x = random_tensor(rng, 1, 3, len);
    let pass = generator.forward(&x, Some(&schedule), &mut WrapStats::default())?;
    let c = random_vec(rng, pass.audio.data.len());
    generator.zero_grad();
    let gx = generator.backward(&pass, &with_data(&pass.audio, &c))?;
    let eval = |g: &ToyGenerator, input: &Tensor1D| -> Result<f64> {
        Ok(dot(&c, &g.forward(input, Some(&schedule), &mut WrapStats::default())?.audio.data))
    };
    t.inputs(rng, &x.data, &gx.data, |p| eval(&generator, &with_data(&x, p)))?;
    t.params(rng, &generator, |g| eval(g, &x))
}

fn discriminator_trial(rng: &mut DeltaRng, t: &mut Trial) -> Result<()> {
    let config = DiscriminatorConfig { channels: vec![2, 3], strides: vec![2, 4], head_kernel: 3 };
    let mut disc = build_toy_discriminator(&config, rng.next_u64())?;
    let schedule = sample_schedule(SamplingMethod::Uniform, disc.n_blocks(), rng)?;
    let tap = if rng.index(2) == 0 { FeatureTap::PostWrap } else { FeatureTap::PreFilter };
    let (batch, len) = (1 + rng.index(2), 24 + rng.index(24));
    let x = random_tensor(rng, batch, 1, len);
    let pass = disc.forward(&x, Some(&schedule), &mut WrapStats::default())?;
    let c_score = random_vec(rng, pass.score.data.len());
    let c_feat: Vec<Tensor1D> =
        pass.features(tap).iter().map(|f| with_data(f, &random_vec(rng, f.data.len()))).collect();
    disc.zero_grad();
    let gx = disc.backward(&pass, &with_data(&pass.score, &c_score), Some(&c_feat), tap)?;
    let eval = |d: &ToyDiscriminator, input: &Tensor1D| -> Result<f64> {
        let p = d.forward(input, Some(&schedule), &mut WrapStats::default())?;
        let feats: f64 = p.features(tap).iter().zip(&c_feat).map(|(f, c)| dot(&f.data, &c.data)).sum();
        Ok(dot(&c_score, &p.score.data) + feats)
    };
    t.inputs(rng, &x.data, &gx.data, |p| eval(&disc, &with_data(&x, p)))?;
    t.params(rng, &disc, |d| eval(d, &x))
}

fn mel_trial(rng: &mut DeltaRng, t: &mut Trial) -> Result<()> {
    let cfg = MelConfig {
        sample_rate: 8000.0,
        fft_size: 64,
        hop: 16,
        win_length: 48,
        n_mels: 8,
        fmin: 0.0,
        fmax: 4000.0,
        ..MelConfig::default()
    };
    let mel = MelTransform::new(cfg)?;
    let len = 16 * (3 + rng.index(4));
    let x = random_vec(rng, len);
    let (m, cache) = mel.forward_cached(&x)?;
    let c = random_vec(rng, m.data.len());
    let gx = mel.backward(&cache, &c);
    t.inputs(rng, &x, &gx, |p| Ok(dot(&c, &mel.forward(p)?.data)))
}
