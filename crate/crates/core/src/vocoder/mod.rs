//! Desk-scale vocoder: a transposed-conv generator, a strided-conv
//! discriminator, least-squares GAN losses with feature matching and log-mel
//! reconstruction, and a training step that can wrap either model.

mod blocks;
mod config;
mod data;
mod discriminator;
mod eval;
mod generator;
pub mod loss;
mod train;

pub use blocks::{DownBlock, UpBlock};
pub use config::{
    CorpusConfig, DiscriminatorConfig, FeatureTap, GeneratorConfig, JenganConfig, JenganMode, LossWeights, TrainConfig,
};
pub use data::{Batch, Corpus};
pub use discriminator::{build_toy_discriminator, DiscriminatorPass, ToyDiscriminator};
pub use eval::{
    evaluate_held_out, features_of, generator_alias, generator_equivariance, synthesize_audio, HeldOutReport,
    EQUIVARIANCE_DELTAS, HELD_OUT_LEN, HELD_OUT_MARGIN, HELD_OUT_SALT,
};
pub use generator::{build_toy_generator, GeneratorPass, ToyGenerator};
pub use train::{inference, LossBundle, Trainer};
