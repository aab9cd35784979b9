use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::delta::SamplingMethod;
use crate::metrics::MelConfig;
use crate::nn::AdamConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GeneratorConfig {
    pub mel_bins: usize,
    pub upsample_rates: Vec<usize>,
    /// Channels after the input convolution; halved by every block.
    pub initial_channels: usize,
    pub min_channels: usize,
    pub resblock_kernel: usize,
    pub resblock_dilations: Vec<usize>,
    pub io_kernel: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            mel_bins: 80,
            upsample_rates: vec![4, 4, 2, 2],
            initial_channels: 32,
            min_channels: 4,
            resblock_kernel: 3,
            resblock_dilations: vec![1, 3],
            io_kernel: 7,
        }
    }
}

impl GeneratorConfig {
    pub fn total_rate(&self) -> usize {
        self.upsample_rates.iter().product()
    }

    /// Channel count entering block `i` (`i = len` is the last block's output).
    pub fn channels(&self, i: usize) -> usize {
        (self.initial_channels >> i).max(self.min_channels)
    }

    pub fn validate(&self, hop: usize) -> Result<()> {
        if self.upsample_rates.is_empty() {
            return Err(Error::Config("generator needs at least one upsampling block".into()));
        }
        if let Some(r) = self.upsample_rates.iter().find(|&&r| r == 0 || (r > 1 && r % 2 == 1)) {
            return Err(Error::Config(format!("upsample rate {r} must be 1 or even")));
        }
        if self.total_rate() != hop {
            return Err(Error::Config(format!(
                "upsample rates {:?} multiply to {} but the feature hop is {hop}",
                self.upsample_rates,
                self.total_rate()
            )));
        }
        if self.mel_bins == 0 || self.initial_channels == 0 || self.min_channels == 0 {
            return Err(Error::Config("generator widths must be positive".into()));
        }
        if self.resblock_kernel.is_multiple_of(2) || self.io_kernel.is_multiple_of(2) {
            return Err(Error::Config("generator kernels must be odd".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct DiscriminatorConfig {
    pub channels: Vec<usize>,
    pub strides: Vec<usize>,
    pub head_kernel: usize,
}

impl Default for DiscriminatorConfig {
    fn default() -> Self {
        DiscriminatorConfig { channels: vec![8, 16, 16], strides: vec![4, 4, 2], head_kernel: 3 }
    }
}

impl DiscriminatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.channels.is_empty() || self.channels.len() != self.strides.len() {
            return Err(Error::Config("discriminator needs one stride per block".into()));
        }
        if self.strides.iter().any(|&s| s < 2) {
            return Err(Error::Config("discriminator blocks must downsample (stride >= 2)".into()));
        }
        if self.channels.contains(&0) || self.head_kernel.is_multiple_of(2) {
            return Err(Error::Config("bad discriminator widths or head kernel".into()));
        }
        Ok(())
    }
}

/// Which models are trained with wrapped blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum JenganMode {
    #[default]
    Off,
    #[cfg_attr(feature = "serde", serde(rename = "gen"))]
    Generator,
    #[cfg_attr(feature = "serde", serde(rename = "disc"))]
    Discriminator,
    Both,
}

impl JenganMode {
    pub fn generator(self) -> bool {
        matches!(self, JenganMode::Generator | JenganMode::Both)
    }

    pub fn discriminator(self) -> bool {
        matches!(self, JenganMode::Discriminator | JenganMode::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            JenganMode::Off => "off",
            JenganMode::Generator => "gen",
            JenganMode::Discriminator => "disc",
            JenganMode::Both => "both",
        }
    }
}

/// Where discriminator features for feature matching are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FeatureTap {
    /// After the output filter of each wrapped block.
    #[default]
    PostWrap,
    /// Block output before the output filter.
    PreFilter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct JenganConfig {
    pub mode: JenganMode,
    pub sampling: SamplingMethod,
    /// Share the discriminator shifts between real and generated signals.
    pub sync: bool,
    /// Test hook: wrap every block but force all shifts to zero.
    pub force_zero: bool,
    pub feature_tap: FeatureTap,
}

impl Default for JenganConfig {
    fn default() -> Self {
        JenganConfig {
            mode: JenganMode::Off,
            sampling: SamplingMethod::Discrete,
            sync: true,
            force_zero: false,
            feature_tap: FeatureTap::PostWrap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct LossWeights {
    pub adversarial: f64,
    pub feature_matching: f64,
    pub reconstruction: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights { adversarial: 1.0, feature_matching: 2.0, reconstruction: 45.0 }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [self.adversarial, self.feature_matching, self.reconstruction];
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Config("loss weights must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Synthetic harmonic training corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct CorpusConfig {
    pub f0_min: f64,
    pub f0_max: f64,
    /// Harmonics stay strictly below this frequency (Hz).
    pub band_limit: f64,
    pub amplitude_min: f64,
    pub amplitude_max: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { f0_min: 80.0, f0_max: 400.0, band_limit: 4000.0, amplitude_min: 0.3, amplitude_max: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct TrainConfig {
    pub seed: u64,
    pub batch_size: usize,
    /// Training segment length in samples; a multiple of the mel hop.
    pub segment_len: usize,
    pub generator: GeneratorConfig,
    pub discriminator: DiscriminatorConfig,
    pub mel: MelConfig,
    pub jengan: JenganConfig,
    pub weights: LossWeights,
    pub adam_generator: AdamConfig,
    pub adam_discriminator: AdamConfig,
    pub corpus: CorpusConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let adam = AdamConfig { lr: 5e-4, beta1: 0.8, beta2: 0.99, eps: 1e-8 };
        TrainConfig {
            seed: 0,
            batch_size: 2,
            segment_len: 2048,
            generator: GeneratorConfig::default(),
            discriminator: DiscriminatorConfig::default(),
            mel: MelConfig::toy(),
            jengan: JenganConfig::default(),
            weights: LossWeights::default(),
            adam_generator: adam,
            adam_discriminator: adam,
            corpus: CorpusConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        self.generator.validate(self.mel.hop)?;
        self.discriminator.validate()?;
        self.weights.validate()?;
        if self.generator.mel_bins != self.mel.n_mels {
            return Err(Error::Config(format!(
                "generator expects {} mel bins, features have {}",
                self.generator.mel_bins, self.mel.n_mels
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be positive".into()));
        }
        if self.segment_len == 0
            || !self.segment_len.is_multiple_of(self.mel.hop)
            || self.segment_len <= self.mel.fft_size / 2
        {
            return Err(Error::Config(format!(
                "segment length {} must be a multiple of the hop {} and exceed half the FFT size",
                self.segment_len, self.mel.hop
            )));
        }
        let c = &self.corpus;
        if !(c.f0_min > 0.0
            && c.f0_min <= c.f0_max
            && c.f0_max < c.band_limit
            && c.band_limit < self.mel.sample_rate / 2.0)
        {
            return Err(Error::Config("corpus f0 range and band limit are inconsistent".into()));
        }
        Ok(())
    }
}
