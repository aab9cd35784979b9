//! Training runs written to an output directory: the resolved config, the
//! per-step loss CSV and a final checkpoint of both models.

use std::fs;
use std::path::{Path, PathBuf};

use jengan_core::vocoder::{Corpus, LossBundle, TrainConfig, Trainer};

use crate::checkpoint::{self, StoredTensor};
use crate::config::save_config;
use crate::losslog::LossLog;
use crate::pipeline::BatchStream;
use crate::{Error, Result};

pub const CONFIG_FILE: &str = "config.json";
pub const CHECKPOINT_FILE: &str = "checkpoint.jgn";
pub const LOSSES_FILE: &str = "losses.csv";

/// Files of one run directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunPaths {
    pub dir: PathBuf,
}

impl RunPaths {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RunPaths { dir: dir.into() }
    }

    pub fn config(&self) -> PathBuf {
        self.dir.join(CONFIG_FILE)
    }

    pub fn checkpoint(&self) -> PathBuf {
        self.dir.join(CHECKPOINT_FILE)
    }

    pub fn losses(&self) -> PathBuf {
        self.dir.join(LOSSES_FILE)
    }
}

pub fn model_tensors(trainer: &Trainer) -> Vec<StoredTensor> {
    checkpoint::collect(&[&trainer.generator, &trainer.discriminator])
}

/// Trains for `steps` steps on the synthetic corpus seeded by `config.seed`.
/// With zero steps only the config and the initial checkpoint are written.
pub fn train_to_dir(
    config: TrainConfig,
    steps: u64,
    out: &Path,
    mut progress: impl FnMut(&LossBundle),
) -> Result<Trainer> {
    fs::create_dir_all(out).map_err(Error::io(out))?;
    let paths = RunPaths::new(out);
    let mut trainer = Trainer::new(config)?;
    save_config(paths.config(), &trainer.config)?;
    if steps > 0 {
        let corpus = Corpus::new(&trainer.config, trainer.config.seed);
        let mut batches = BatchStream::spawn(corpus, trainer.mel.clone(), trainer.config.batch_size, steps);
        let mut log = LossLog::create(paths.losses())?;
        for _ in 0..steps {
            let losses = trainer.train_step(&batches.next_batch()?)?;
            log.append(&losses)?;
            progress(&losses);
        }
        log.finish()?;
    }
    checkpoint::save(paths.checkpoint(), &model_tensors(&trainer))?;
    Ok(trainer)
}
