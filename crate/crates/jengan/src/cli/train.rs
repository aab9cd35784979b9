use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use jengan_core::vocoder::{JenganMode, TrainConfig};
use jengan_core::SamplingMethod;

use super::{say, Status};
use crate::config::load_or_default;
use crate::losslog;
use crate::run::{train_to_dir, RunPaths};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Off,
    Gen,
    Disc,
    Both,
}

impl From<Mode> for JenganMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Off => JenganMode::Off,
            Mode::Gen => JenganMode::Generator,
            Mode::Disc => JenganMode::Discriminator,
            Mode::Both => JenganMode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampling {
    Discrete,
    Uniform,
    Normal,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// JSON training config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Which models are trained with wrapped blocks.
    #[arg(long, value_enum)]
    pub jengan: Option<Mode>,
    /// Shift distribution.
    #[arg(long, value_enum)]
    pub sampling: Option<Sampling>,
    /// Share discriminator shifts between real and generated audio.
    #[arg(long, conflicts_with = "async_shifts")]
    pub sync: bool,
    /// Draw the generated-audio discriminator shifts independently.
    #[arg(long = "async")]
    pub async_shifts: bool,
    /// Training steps; 0 writes only the initial checkpoint.
    #[arg(long, default_value_t = 2000)]
    pub steps: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Print losses every this many steps (0: never).
    #[arg(long, default_value_t = 100)]
    pub log_every: u64,
    /// Wrap every block but force all shifts to zero.
    #[arg(long, hide = true)]
    pub force_zero_delta: bool,
}

impl Args {
    /// The file config (or defaults) with every given flag applied.
    pub fn resolve(&self) -> Result<TrainConfig> {
        let mut c = load_or_default(self.config.as_deref())?;
        if let Some(m) = self.jengan {
            c.jengan.mode = m.into();
        }
        if let Some(s) = self.sampling {
            c.jengan.sampling = match s {
                Sampling::Discrete => SamplingMethod::Discrete,
                Sampling::Uniform => SamplingMethod::Uniform,
                Sampling::Normal => SamplingMethod::normal(),
            };
        }
        if self.sync {
            c.jengan.sync = true;
        }
        if self.async_shifts {
            c.jengan.sync = false;
        }
        if let Some(seed) = self.seed {
            c.seed = seed;
        }
        if self.force_zero_delta {
            c.jengan.force_zero = true;
        }
        c.validate()?;
        Ok(c)
    }
}

pub fn run(args: Args, out: &mut dyn Write) -> Result<Status> {
    let config = args.resolve()?;
    let paths = RunPaths::new(&args.out);
    let every = args.log_every;
    let last = args.steps.saturating_sub(1);
    if every > 0 && args.steps > 0 {
        say(out, losslog::HEADER)?;
    }
    train_to_dir(config, args.steps, &args.out, |l| {
        if every > 0 && (l.step % every == 0 || l.step == last) {
            // progress is best effort; a closed stdout must not abort training
            let _ = writeln!(out, "{}", losslog::row(l));
        }
    })?;
    say(out, format!("checkpoint written to {}", paths.checkpoint().display()))?;
    Ok(Status::Success)
}
