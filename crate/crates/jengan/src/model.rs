//! Models that `eval` can load from a checkpoint: the toy vocoder generator,
//! or a pure fractional delay (a reference model whose checkpoint holds a
//! single `delay.shift` tensor).

use std::path::{Path, PathBuf};

use jengan_core::metrics::{equivariance_error, EquivarianceReport, MelTransform};
use jengan_core::sinc::delay;
use jengan_core::vocoder::{
    build_toy_generator, features_of, generator_equivariance, synthesize_audio, ToyGenerator, TrainConfig,
    EQUIVARIANCE_DELTAS, HELD_OUT_MARGIN,
};
use jengan_core::{Signal, DEFAULT_HALF_WIDTH};

use crate::checkpoint::{self, StoredTensor};
use crate::config::load_or_default;
use crate::run::{CHECKPOINT_FILE, CONFIG_FILE};
use crate::{Error, Result};

pub const DELAY_TENSOR: &str = "delay.shift";

/// Margin for the delay model: both filters' support plus slack.
pub const DELAY_MARGIN: usize = 4 * DEFAULT_HALF_WIDTH;

// One instance per process; boxing the vocoder would buy nothing.
#[allow(clippy::large_enum_variant)]
pub enum Model {
    Vocoder { generator: ToyGenerator, config: TrainConfig },
    Delay { shift: f64 },
}

pub fn delay_checkpoint(shift: f64) -> Vec<StoredTensor> {
    vec![StoredTensor { name: DELAY_TENSOR.into(), shape: vec![1], values: vec![shift] }]
}

/// Accepts a run directory or a checkpoint file. The generator architecture
/// comes from `config`, else the `config.json` next to the checkpoint, else
/// the defaults.
pub fn load_model(path: &Path, config: Option<&Path>) -> Result<Model> {
    let (file, dir) = if path.is_dir() {
        (path.join(CHECKPOINT_FILE), path.to_path_buf())
    } else {
        (path.to_path_buf(), path.parent().map_or_else(PathBuf::new, Path::to_path_buf))
    };
    let tensors = checkpoint::load(&file)?;
    if let [t] = tensors.as_slice() {
        if t.name == DELAY_TENSOR {
            return match t.values.as_slice() {
                [shift] => Ok(Model::Delay { shift: *shift }),
                _ => Err(Error::Checkpoint(format!("{DELAY_TENSOR} must hold one value"))),
            };
        }
    }
    let sibling = dir.join(CONFIG_FILE);
    let config_path = config.map(Path::to_path_buf).or_else(|| sibling.exists().then_some(sibling));
    let config = load_or_default(config_path.as_deref())?;
    let mut generator = build_toy_generator(&config.generator, config.mel.hop, 0)?;
    checkpoint::restore(&mut generator, &tensors)?;
    Ok(Model::Vocoder { generator, config })
}

impl Model {
    fn check_rate(&self, x: &Signal) -> Result<()> {
        if let Model::Vocoder { config, .. } = self {
            if x.sample_rate() != config.mel.sample_rate {
                return Err(Error::Usage(format!(
                    "input is {} Hz but the model runs at {} Hz",
                    x.sample_rate(),
                    config.mel.sample_rate
                )));
            }
        }
        Ok(())
    }

    /// Output audio for input audio (vocoder: analysis then synthesis).
    pub fn process(&self, x: &Signal) -> Result<Signal> {
        self.check_rate(x)?;
        match self {
            Model::Vocoder { generator, config } => {
                let mel = MelTransform::new(config.mel)?;
                Ok(synthesize_audio(generator, &features_of(x, &mel)?)?)
            }
            Model::Delay { shift } => Ok(delay(x, *shift, DEFAULT_HALF_WIDTH)?),
        }
    }

    /// Equivariance over the standard shift set. Vocoder shifts act on the
    /// feature frames of `x`; delay shifts act on `x` directly.
    pub fn equivariance(&self, x: &Signal) -> Result<EquivarianceReport> {
        self.check_rate(x)?;
        match self {
            Model::Vocoder { generator, config } => {
                let features = features_of(x, &MelTransform::new(config.mel)?)?;
                Ok(generator_equivariance(generator, &features, &EQUIVARIANCE_DELTAS, HELD_OUT_MARGIN)?)
            }
            Model::Delay { shift } => Ok(equivariance_error(
                |s: &Signal| delay(s, *shift, DEFAULT_HALF_WIDTH),
                x,
                &EQUIVARIANCE_DELTAS,
                1.0,
                DELAY_MARGIN,
            )?),
        }
    }
}
