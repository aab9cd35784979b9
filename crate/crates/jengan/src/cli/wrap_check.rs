use std::io::Write;
use std::path::PathBuf;

use jengan_core::delta::{DeltaSample, DeltaSchedule};
use jengan_core::nn::Tensor1D;
use jengan_core::vocoder::{build_toy_discriminator, build_toy_generator};
use jengan_core::wrap::{wrap_forward, Tape, WrapStats};
use jengan_core::{assign_shift, Block, DeltaRng, SamplingMethod, ShiftAssignment, ShiftSide};

use super::{say, Status};
use crate::config::load_or_default;
use crate::Result;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// JSON training config describing the toy models.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for the model initialization and probe inputs.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replace the zero-shift wrapper with one that shifts by half a sample.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

struct Row {
    check: &'static str,
    target: String,
    max_error: f64,
    tolerance: f64,
}

impl Row {
    fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

fn max_abs_diff(a: &Tensor1D, b: &Tensor1D) -> f64 {
    if !a.same_shape(b) {
        return f64::INFINITY;
    }
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest difference over the middle half of the time axis.
fn interior_diff(a: &Tensor1D, b: &Tensor1D) -> f64 {
    if !a.same_shape(b) {
        return f64::INFINITY;
    }
    let (lo, hi) = (a.len / 4, a.len - a.len / 4);
    let mut worst = 0.0f64;
    for bi in 0..a.batch {
        for c in 0..a.channels {
            for (x, y) in a.row(bi, c)[lo..hi].iter().zip(&b.row(bi, c)[lo..hi]) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    worst
}

fn random(rng: &mut DeltaRng, channels: usize, len: usize) -> Tensor1D {
    let data = (0..2 * channels * len).map(|_| rng.uniform(-1.0, 1.0)).collect();
    Tensor1D::from_vec(2, channels, len, data).unwrap()
}

fn schedule(values: &[f64]) -> DeltaSchedule {
    DeltaSchedule {
        per_block: values
            .iter()
            .map(|&value| DeltaSample { value, raw: value, method: SamplingMethod::Discrete })
            .collect(),
    }
}

fn block_rows(rows: &mut Vec<Row>, name: &str, block: &dyn Block, x: &Tensor1D, zero: &ShiftAssignment) -> Result<()> {
    let plain = block.forward(x, &mut Tape::new())?;
    let (wrapped, _) = wrap_forward(block, zero, x, &mut WrapStats::default())?;
    let exact = if wrapped == plain { 0.0 } else { max_abs_diff(&wrapped, &plain).max(f64::MIN_POSITIVE) };
    rows.push(Row { check: "zero-shift block", target: name.into(), max_error: exact, tolerance: 0.0 });

    // shifts that are whole samples on both sides cancel exactly away from the edges
    let r = block.resample_ratio();
    let scale = plain.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut worst = None::<f64>;
    for v in [-2.0, -1.0, 1.0, 2.0] {
        let a = assign_shift(v, r)?;
        if a.input_shift.fract() != 0.0 || a.output_shift.fract() != 0.0 {
            continue;
        }
        let (shifted, _) = wrap_forward(block, &a, x, &mut WrapStats::default())?;
        let e = interior_diff(&shifted, &plain) / scale;
        worst = Some(worst.map_or(e, |w| w.max(e)));
    }
    if let Some(e) = worst {
        rows.push(Row { check: "integer-shift block", target: name.into(), max_error: e, tolerance: 1e-12 });
    }
    Ok(())
}

pub fn run(args: Args, out: &mut dyn Write) -> Result<Status> {
    let mut config = load_or_default(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate()?;
    let generator = build_toy_generator(&config.generator, config.mel.hop, config.seed)?;
    let discriminator = build_toy_discriminator(&config.discriminator, config.seed)?;
    let mut rng = DeltaRng::seed_from_u64(config.seed ^ 0x5EED);
    let zero = if args.inject_fault {
        ShiftAssignment { input_shift: 0.5, output_shift: 0.0, sampled_value: 0.5, side: ShiftSide::Both }
    } else {
        ShiftAssignment::ZERO
    };
    let fault_value = if args.inject_fault { 0.5 } else { 0.0 };

    let mut rows = Vec::new();
    let frames = 32;
    for (i, b) in generator.blocks.iter().enumerate() {
        let len = frames * generator.blocks[..i].iter().map(|b| b.resample_ratio().num() as usize).product::<usize>();
        let x = random(&mut rng, b.up.in_channels, len);
        block_rows(&mut rows, &format!("gen.block{i}"), b, &x, &zero)?;
    }
    let audio_len = config.segment_len;
    let mut len = audio_len;
    for (i, b) in discriminator.blocks.iter().enumerate() {
        let x = random(&mut rng, b.conv.in_channels, len);
        block_rows(&mut rows, &format!("disc.block{i}"), b, &x, &zero)?;
        len = b.resample_ratio().scale_len(len);
    }

    let mut g_values = vec![0.0; generator.n_blocks()];
    g_values[0] = fault_value;
    let features = random(&mut rng, config.generator.mel_bins, frames);
    let wrapped = generator.forward(&features, Some(&schedule(&g_values)), &mut WrapStats::default())?.audio;
    let plain = generator.inference(&features)?;
    rows.push(Row {
        check: "zero-schedule stack",
        target: "generator".into(),
        max_error: max_abs_diff(&wrapped, &plain),
        tolerance: 0.0,
    });

    let mut d_values = vec![0.0; discriminator.n_blocks()];
    d_values[0] = fault_value;
    let audio = random(&mut rng, 1, audio_len);
    let wrapped = discriminator.forward(&audio, Some(&schedule(&d_values)), &mut WrapStats::default())?;
    let plain = discriminator.forward(&audio, None, &mut WrapStats::default())?;
    let feature_err = wrapped
        .stack
        .block_outputs
        .iter()
        .zip(&plain.stack.block_outputs)
        .map(|(a, b)| max_abs_diff(a, b))
        .fold(max_abs_diff(&wrapped.score, &plain.score), f64::max);
    rows.push(Row {
        check: "zero-schedule stack",
        target: "discriminator".into(),
        max_error: feature_err,
        tolerance: 0.0,
    });

    say(out, format!("{:<22} {:<14} {:>12} {:>10}  status", "check", "target", "max_error", "tolerance"))?;
    for r in &rows {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        say(out, format!("{:<22} {:<14} {:>12.3e} {:>10.0e}  {status}", r.check, r.target, r.max_error, r.tolerance))?;
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    say(out, format!("{} checks, {} failed", rows.len(), failed))?;
    Ok(if failed == 0 { Status::Success } else { Status::CheckFailed })
}
