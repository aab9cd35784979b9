use alloc::format;
use alloc::vec::Vec;

use super::blocks::UpBlock;
use super::config::GeneratorConfig;
use crate::delta::{DeltaRng, DeltaSchedule};
use crate::nn::{leaky_relu, leaky_relu_backward, tanh, tanh_backward, Conv1d, Module, Param, Tensor1D, LEAKY_SLOPE};
use crate::wrap::{backward_stack, forward_stack, Block, StackPass, WrapStats};
use crate::{Error, Ratio, Result};

/// Mel features in, waveform out: input conv, upsampling blocks, leaky
/// rectifier, output conv, tanh. Only the blocks are ever wrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyGenerator {
    pub config: GeneratorConfig,
    pub conv_pre: Conv1d,
    pub blocks: Vec<UpBlock>,
    pub conv_post: Conv1d,
}

/// Everything the generator backward pass needs.
#[derive(Debug, Clone)]
pub struct GeneratorPass {
    pub audio: Tensor1D,
    features: Tensor1D,
    stack: StackPass,
    post_in: Tensor1D,
}

impl GeneratorPass {
    pub fn block_outputs(&self) -> &[Tensor1D] {
        &self.stack.block_outputs
    }
}

pub fn build_toy_generator(config: &GeneratorConfig, hop: usize, seed: u64) -> Result<ToyGenerator> {
    config.validate(hop)?;
    let mut rng = DeltaRng::seed_from_u64(seed);
    let k = config.io_kernel;
    let conv_pre = Conv1d::same("gen.pre", config.mel_bins, config.channels(0), k, 1, &mut rng);
    let blocks = config
        .upsample_rates
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            UpBlock::new(
                &format!("gen.block{i}"),
                config.channels(i),
                config.channels(i + 1),
                r,
                config.resblock_kernel,
                &config.resblock_dilations,
                &mut rng,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let last = config.channels(config.upsample_rates.len());
    let conv_post = Conv1d::same("gen.post", last, 1, k, 1, &mut rng);
    Ok(ToyGenerator { config: config.clone(), conv_pre, blocks, conv_post })
}

impl ToyGenerator {
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_ratio(&self) -> Ratio {
        self.blocks.iter().fold(Ratio::ONE, |r, b| r * b.resample_ratio())
    }

    pub fn forward(
        &self,
        features: &Tensor1D,
        schedule: Option<&DeltaSchedule>,
        stats: &mut WrapStats,
    ) -> Result<GeneratorPass> {
        if features.channels != self.config.mel_bins {
            return Err(Error::ShapeMismatch(format!(
                "generator expects {} feature channels, got {}",
                self.config.mel_bins, features.channels
            )));
        }
        let h = self.conv_pre.forward(features)?;
        let stack = forward_stack(&self.blocks, schedule, &h, stats)?;
        let post_in = leaky_relu(&stack.output, LEAKY_SLOPE);
        let audio = tanh(&self.conv_post.forward(&post_in)?);
        Ok(GeneratorPass { audio, features: features.clone(), stack, post_in })
    }

    /// Accumulates parameter gradients and returns the feature gradient.
    pub fn backward(&mut self, pass: &GeneratorPass, grad_audio: &Tensor1D) -> Result<Tensor1D> {
        let g = tanh_backward(&pass.audio, grad_audio);
        let g = self.conv_post.backward(&pass.post_in, &g)?;
        let g = leaky_relu_backward(&pass.stack.output, &g, LEAKY_SLOPE);
        let g = backward_stack(&mut self.blocks, &pass.stack, &g, None, false)?;
        self.conv_pre.backward(&pass.features, &g)
    }

    /// Plain, unwrapped composition.
    pub fn inference(&self, features: &Tensor1D) -> Result<Tensor1D> {
        Ok(self.forward(features, None, &mut WrapStats::default())?.audio)
    }
}

impl Module for ToyGenerator {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        self.conv_pre.visit_params(f);
        self.blocks.iter().for_each(|b| b.visit_params(f));
        self.conv_post.visit_params(f);
    }

    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.conv_pre.visit_params_mut(f);
        self.blocks.iter_mut().for_each(|b| b.visit_params_mut(f));
        self.conv_post.visit_params_mut(f);
    }
}
