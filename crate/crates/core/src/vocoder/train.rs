use alloc::vec::Vec;

use super::config::{JenganConfig, TrainConfig};
use super::data::Batch;
use super::discriminator::{build_toy_discriminator, DiscriminatorPass, ToyDiscriminator};
use super::generator::{build_toy_generator, ToyGenerator};
use super::loss;
use crate::delta::{sample_schedule, zero_schedule, DeltaRng, DeltaSchedule};
use crate::metrics::MelTransform;
use crate::nn::{Adam, Module, Tensor1D};
use crate::wrap::WrapStats;
use crate::{Error, Result};

/// Losses and shift bookkeeping of one training step.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LossBundle {
    pub step: u64,
    /// Total generator objective.
    pub loss_g: f64,
    pub loss_d: f64,
    pub loss_adv: f64,
    /// Unweighted feature-matching and reconstruction terms.
    pub loss_fm: f64,
    pub loss_recon: f64,
    pub generator_deltas: Vec<f64>,
    pub disc_real_deltas: Vec<f64>,
    pub disc_fake_deltas: Vec<f64>,
    pub wrapped_calls: u64,
    pub filters_applied: u64,
}

/// Owns both models, their optimizers and the shift stream.
#[derive(Debug, Clone)]
pub struct Trainer {
    pub config: TrainConfig,
    pub generator: ToyGenerator,
    pub discriminator: ToyDiscriminator,
    pub opt_g: Adam,
    pub opt_d: Adam,
    pub mel: MelTransform,
    delta_rng: DeltaRng,
    step: u64,
}

impl Trainer {
    pub fn new(config: TrainConfig) -> Result<Self> {
        config.validate()?;
        let mut root = DeltaRng::seed_from_u64(config.seed);
        let generator = build_toy_generator(&config.generator, config.mel.hop, root.next_u64())?;
        let discriminator = build_toy_discriminator(&config.discriminator, root.next_u64())?;
        let delta_rng = root.fork();
        Ok(Trainer {
            opt_g: Adam::new(config.adam_generator),
            opt_d: Adam::new(config.adam_discriminator),
            mel: MelTransform::new(config.mel)?,
            generator,
            discriminator,
            delta_rng,
            step: 0,
            config,
        })
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    fn draw(&mut self, n_blocks: usize) -> Result<DeltaSchedule> {
        let j = self.config.jengan;
        if j.force_zero {
            zero_schedule(n_blocks)
        } else {
            sample_schedule(j.sampling, n_blocks, &mut self.delta_rng)
        }
    }

    /// One discriminator update followed by one generator update.
    pub fn train_step(&mut self, batch: &Batch) -> Result<LossBundle> {
        let step = self.step;
        let JenganConfig { mode, sync, feature_tap, .. } = self.config.jengan;
        let weights = self.config.weights;
        let mut stats = WrapStats::default();

        let gen_schedule = if mode.generator() { Some(self.draw(self.generator.n_blocks())?) } else { None };
        let (real_schedule, fake_schedule) = if mode.discriminator() {
            let real = self.draw(self.discriminator.n_blocks())?;
            let fake = if sync { real.clone() } else { self.draw(self.discriminator.n_blocks())? };
            (Some(real), Some(fake))
        } else {
            (None, None)
        };

        let gen_pass = self.generator.forward(&batch.features, gen_schedule.as_ref(), &mut stats)?;
        let fake = &gen_pass.audio;

        // discriminator update on the detached generator output
        self.discriminator.zero_grad();
        let (d_real, d_fake) = self.disc_pair(&batch.audio, fake, &real_schedule, &fake_schedule, &mut stats)?;
        let (loss_d, g_real, g_fake) = loss::lsgan_discriminator(&d_real.score, &d_fake.score);
        if !loss_d.is_finite() {
            return Err(Error::Diverged { step, what: "discriminator loss" });
        }
        self.discriminator.backward(&d_real, &g_real, None, feature_tap)?;
        self.discriminator.backward(&d_fake, &g_fake, None, feature_tap)?;
        self.opt_d.step(&mut self.discriminator)?;

        // generator update through the refreshed discriminator
        let (d_real, d_fake) = self.disc_pair(&batch.audio, fake, &real_schedule, &fake_schedule, &mut stats)?;
        let (loss_adv, g_score) = loss::lsgan_generator(&d_fake.score);
        let (loss_fm, fm_grads) = loss::feature_matching(&d_real.features(feature_tap), &d_fake.features(feature_tap));
        let g_score = g_score.map(|v| v * weights.adversarial);
        let fm_grads: Vec<Tensor1D> = fm_grads.into_iter().map(|g| g.map(|v| v * weights.feature_matching)).collect();
        let mut grad_audio = self.discriminator.backward(&d_fake, &g_score, Some(&fm_grads), feature_tap)?;
        self.discriminator.zero_grad();

        let loss_recon = self.reconstruction(fake, batch, weights.reconstruction, &mut grad_audio)?;
        let loss_g =
            weights.adversarial * loss_adv + weights.feature_matching * loss_fm + weights.reconstruction * loss_recon;
        for (v, what) in
            [(loss_adv, "adversarial loss"), (loss_fm, "feature-matching loss"), (loss_recon, "reconstruction loss")]
        {
            if !v.is_finite() {
                return Err(Error::Diverged { step, what });
            }
        }

        self.generator.zero_grad();
        self.generator.backward(&gen_pass, &grad_audio)?;
        self.opt_g.step(&mut self.generator)?;

        self.step += 1;
        Ok(LossBundle {
            step,
            loss_g,
            loss_d,
            loss_adv,
            loss_fm,
            loss_recon,
            generator_deltas: gen_schedule.map(|s| s.values()).unwrap_or_default(),
            disc_real_deltas: real_schedule.map(|s| s.values()).unwrap_or_default(),
            disc_fake_deltas: fake_schedule.map(|s| s.values()).unwrap_or_default(),
            wrapped_calls: stats.wrapped_calls,
            filters_applied: stats.filters_applied,
        })
    }

    fn disc_pair(
        &self,
        real: &Tensor1D,
        fake: &Tensor1D,
        real_schedule: &Option<DeltaSchedule>,
        fake_schedule: &Option<DeltaSchedule>,
        stats: &mut WrapStats,
    ) -> Result<(DiscriminatorPass, DiscriminatorPass)> {
        match (real_schedule, fake_schedule) {
            (Some(r), f) => self.discriminator.pair_forward(real, fake, r, f.as_ref(), stats),
            (None, _) => {
                Ok((self.discriminator.forward(real, None, stats)?, self.discriminator.forward(fake, None, stats)?))
            }
        }
    }

    /// L1 log-mel loss averaged over the batch; adds `weight * dL/dfake` to `grad`.
    fn reconstruction(&self, fake: &Tensor1D, batch: &Batch, weight: f64, grad: &mut Tensor1D) -> Result<f64> {
        let b = fake.batch as f64;
        let mut total = 0.0;
        for (i, target) in batch.target_mel.iter().enumerate() {
            let (mel, cache) = self.mel.forward_cached(fake.row(i, 0))?;
            let (l, g) = loss::l1(&mel.data, &target.data);
            total += l / b;
            let gx = self.mel.backward(&cache, &g);
            for (dst, src) in grad.row_mut(i, 0).iter_mut().zip(gx) {
                *dst += weight * src / b;
            }
        }
        Ok(total)
    }
}

/// Runs the generator without any wrapping.
pub fn inference(generator: &ToyGenerator, features: &Tensor1D) -> Result<Tensor1D> {
    generator.inference(features)
}
