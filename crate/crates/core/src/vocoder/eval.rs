use alloc::vec::Vec;

use super::config::TrainConfig;
use super::data::Corpus;
use super::generator::ToyGenerator;
use crate::metrics::{alias_energy, equivariance_error, AliasReport, EquivarianceReport, MelTransform};
use crate::nn::Tensor1D;
use crate::{Error, Result, Signal};

/// Shift set used by the comparative equivariance experiment.
pub const EQUIVARIANCE_DELTAS: [f64; 8] = [-1.5, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 1.5];

/// Log-mel features of `audio` as a multi-channel signal at the frame rate.
pub fn features_of(audio: &Signal, mel: &MelTransform) -> Result<Signal> {
    let m = mel.forward(audio.data())?;
    Signal::new(m.n_mels, audio.sample_rate() / mel.cfg.hop as f64, m.channels_major())
}

/// Generator audio for a feature signal, unwrapped.
pub fn synthesize_audio(generator: &ToyGenerator, features: &Signal) -> Result<Signal> {
    let audio = generator.inference(&Tensor1D::from_signal(features))?;
    let rate = features.sample_rate() * generator.total_ratio().as_f64();
    Ok(audio.to_signal(0, rate))
}

/// Equivariance of the whole generator: shifts are given in feature frames
/// and map to `shift * hop` output samples. `margin` counts output samples.
pub fn generator_equivariance(
    generator: &ToyGenerator,
    features: &Signal,
    deltas: &[f64],
    margin: usize,
) -> Result<EquivarianceReport> {
    if features.channels() != generator.config.mel_bins {
        return Err(Error::ShapeMismatch("feature channels do not match the generator".into()));
    }
    let ratio = generator.total_ratio().as_f64();
    equivariance_error(|x| synthesize_audio(generator, x), features, deltas, ratio, margin)
}

/// Energy of generated audio above `cutoff_hz`, as a fraction of the total.
pub fn generator_alias(generator: &ToyGenerator, features: &Signal, cutoff_hz: f64) -> Result<AliasReport> {
    let audio = synthesize_audio(generator, features)?;
    Ok(alias_energy(&audio, cutoff_hz / (audio.sample_rate() / 2.0)))
}

/// Seed salt separating the held-out tones from the training stream.
pub const HELD_OUT_SALT: u64 = 0xE7A1;
/// Held-out segment length in samples (128 feature frames).
pub const HELD_OUT_LEN: usize = 8192;
/// Output samples excluded at each end: twelve frames of input-side filter
/// support plus the generator's receptive field.
pub const HELD_OUT_MARGIN: usize = 1536;

/// Per-signal equivariance and aliasing of a generator on held-out tones.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HeldOutReport {
    pub equivariance: Vec<f64>,
    pub alias: Vec<f64>,
    pub mean_equivariance: f64,
    pub mean_alias: f64,
}

/// Evaluates the unwrapped generator on `n_signals` held-out corpus tones.
/// The set depends only on `seed` and the corpus config, so models trained
/// under different modes are compared on identical inputs.
pub fn evaluate_held_out(
    generator: &ToyGenerator,
    config: &TrainConfig,
    n_signals: u64,
    seed: u64,
) -> Result<HeldOutReport> {
    let mel = MelTransform::new(config.mel)?;
    let corpus = Corpus { segment_len: HELD_OUT_LEN, seed: seed ^ HELD_OUT_SALT, ..Corpus::new(config, seed) };
    let mut equivariance = Vec::with_capacity(n_signals as usize);
    let mut alias = Vec::with_capacity(n_signals as usize);
    for i in 0..n_signals {
        let features = features_of(&corpus.example(i)?, &mel)?;
        equivariance
            .push(generator_equivariance(generator, &features, &EQUIVARIANCE_DELTAS, HELD_OUT_MARGIN)?.mean_error);
        alias.push(generator_alias(generator, &features, config.corpus.band_limit)?.ratio);
    }
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    Ok(HeldOutReport { mean_equivariance: mean(&equivariance), mean_alias: mean(&alias), equivariance, alias })
}
