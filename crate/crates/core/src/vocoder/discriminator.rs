use alloc::format;
use alloc::vec::Vec;

use super::blocks::DownBlock;
use super::config::{DiscriminatorConfig, FeatureTap};
use crate::delta::{DeltaRng, DeltaSchedule};
use crate::nn::{Conv1d, Module, Param, Tensor1D};
use crate::wrap::{backward_stack, discriminator_pair_forward, forward_stack, StackPass, WrapStats};
use crate::{Error, Result};

/// Strided-conv blocks with per-block feature taps and a convolutional
/// score head (least-squares GAN score map).
#[derive(Debug, Clone, PartialEq)]
pub struct ToyDiscriminator {
    pub config: DiscriminatorConfig,
    pub blocks: Vec<DownBlock>,
    pub head: Conv1d,
}

#[derive(Debug, Clone)]
pub struct DiscriminatorPass {
    pub score: Tensor1D,
    pub stack: StackPass,
}

impl DiscriminatorPass {
    pub fn features(&self, tap: FeatureTap) -> Vec<&Tensor1D> {
        match tap {
            FeatureTap::PostWrap => self.stack.block_outputs.iter().collect(),
            FeatureTap::PreFilter => self.stack.tapes.iter().map(|t| &t.pre_filter).collect(),
        }
    }
}

pub fn build_toy_discriminator(config: &DiscriminatorConfig, seed: u64) -> Result<ToyDiscriminator> {
    config.validate()?;
    let mut rng = DeltaRng::seed_from_u64(seed);
    let mut in_ch = 1;
    let mut blocks = Vec::with_capacity(config.channels.len());
    for (i, (&ch, &stride)) in config.channels.iter().zip(&config.strides).enumerate() {
        blocks.push(DownBlock::new(&format!("disc.block{i}"), in_ch, ch, stride, &mut rng)?);
        in_ch = ch;
    }
    let head = Conv1d::same("disc.head", in_ch, 1, config.head_kernel, 1, &mut rng);
    Ok(ToyDiscriminator { config: config.clone(), blocks, head })
}

impl ToyDiscriminator {
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn forward(
        &self,
        audio: &Tensor1D,
        schedule: Option<&DeltaSchedule>,
        stats: &mut WrapStats,
    ) -> Result<DiscriminatorPass> {
        if audio.channels != 1 {
            return Err(Error::ShapeMismatch(format!(
                "discriminator expects mono audio, got {} channels",
                audio.channels
            )));
        }
        let stack = forward_stack(&self.blocks, schedule, audio, stats)?;
        let score = self.head.forward(&stack.output)?;
        Ok(DiscriminatorPass { score, stack })
    }

    /// Real and fake through the same wrapped blocks; `fake_schedule = None`
    /// reuses `schedule` (synchronized shifts).
    pub fn pair_forward(
        &self,
        real: &Tensor1D,
        fake: &Tensor1D,
        schedule: &DeltaSchedule,
        fake_schedule: Option<&DeltaSchedule>,
        stats: &mut WrapStats,
    ) -> Result<(DiscriminatorPass, DiscriminatorPass)> {
        if real.channels != 1 {
            return Err(Error::ShapeMismatch(format!(
                "discriminator expects mono audio, got {} channels",
                real.channels
            )));
        }
        let pair = discriminator_pair_forward(&self.blocks, schedule, fake_schedule, real, fake, stats)?;
        let real_score = self.head.forward(&pair.real.output)?;
        let fake_score = self.head.forward(&pair.fake.output)?;
        Ok((
            DiscriminatorPass { score: real_score, stack: pair.real },
            DiscriminatorPass { score: fake_score, stack: pair.fake },
        ))
    }

    /// Returns `dL/daudio`; parameter gradients accumulate as a side effect.
    pub fn backward(
        &mut self,
        pass: &DiscriminatorPass,
        grad_score: &Tensor1D,
        feature_grads: Option<&[Tensor1D]>,
        tap: FeatureTap,
    ) -> Result<Tensor1D> {
        let g = self.head.backward(&pass.stack.output, grad_score)?;
        backward_stack(&mut self.blocks, &pass.stack, &g, feature_grads, tap == FeatureTap::PreFilter)
    }
}

impl Module for ToyDiscriminator {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        self.blocks.iter().for_each(|b| b.visit_params(f));
        self.head.visit_params(f);
    }

    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.blocks.iter_mut().for_each(|b| b.visit_params_mut(f));
        self.head.visit_params_mut(f);
    }
}
