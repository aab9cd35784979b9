use alloc::vec::Vec;

use super::config::{CorpusConfig, TrainConfig};
use crate::delta::DeltaRng;
use crate::metrics::{LogMel, MelTransform};
use crate::nn::Tensor1D;
use crate::synth::{synthesize, Envelope, HarmonicCount, SynthKind, SynthSpec};
use crate::{Error, Result, Signal};

/// Paired features and waveforms for one training step.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    /// `(batch, n_mels, frames)` log-mel features.
    pub features: Tensor1D,
    /// `(batch, 1, samples)` target waveforms.
    pub audio: Tensor1D,
    /// Log-mel of each target, `frames x n_mels`.
    pub target_mel: Vec<LogMel>,
}

impl Batch {
    pub fn from_signals(signals: &[Signal], mel: &MelTransform) -> Result<Self> {
        if signals.iter().any(|s| s.channels() != 1) {
            return Err(Error::InvalidSignal("training audio must be mono".into()));
        }
        let audio = Tensor1D::stack(signals)?;
        let target_mel = signals.iter().map(|s| mel.forward(s.data())).collect::<Result<Vec<_>>>()?;
        let (frames, n_mels) = (target_mel[0].frames, target_mel[0].n_mels);
        let data = target_mel.iter().flat_map(|m| m.channels_major()).collect();
        let features = Tensor1D::from_vec(signals.len(), n_mels, frames, data)?;
        Ok(Batch { features, audio, target_mel })
    }

    /// Number of examples.
    pub fn size(&self) -> usize {
        self.audio.batch
    }
}

/// Deterministic, index-addressable synthetic harmonic corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corpus {
    pub config: CorpusConfig,
    pub sample_rate: f64,
    pub segment_len: usize,
    pub seed: u64,
}

impl Corpus {
    /// Training corpus matching `config` (rate, segment length, tone ranges).
    pub fn new(config: &TrainConfig, seed: u64) -> Self {
        Corpus { config: config.corpus, sample_rate: config.mel.sample_rate, segment_len: config.segment_len, seed }
    }

    fn item_seed(&self, index: u64) -> u64 {
        let mut rng = DeltaRng::seed_from_u64(self.seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        rng.next_u64()
    }

    pub fn spec(&self, index: u64) -> SynthSpec {
        let seed = self.item_seed(index);
        let mut rng = DeltaRng::seed_from_u64(seed.rotate_left(17));
        let c = &self.config;
        SynthSpec {
            kind: SynthKind::Harmonic {
                f0_min: c.f0_min,
                f0_max: c.f0_max,
                harmonics: HarmonicCount::Below(c.band_limit),
            },
            sample_rate: self.sample_rate,
            len: self.segment_len,
            amplitude: rng.uniform(c.amplitude_min, c.amplitude_max),
            envelope: Envelope::Smooth,
            seed,
        }
    }

    pub fn example(&self, index: u64) -> Result<Signal> {
        synthesize(&self.spec(index))
    }

    /// Batch `step`: examples `step * size .. (step + 1) * size`.
    pub fn batch(&self, step: u64, size: usize, mel: &MelTransform) -> Result<Batch> {
        let signals = (0..size as u64).map(|i| self.example(step * size as u64 + i)).collect::<Result<Vec<_>>>()?;
        Batch::from_signals(&signals, mel)
    }
}
