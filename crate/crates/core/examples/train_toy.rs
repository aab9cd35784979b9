//! Trains the toy vocoder and reports equivariance and aliasing of the
//! unwrapped generator on held-out tones.
//!
//! Usage: `cargo run --release -p jengan-core --example train_toy -- [steps] [off|gen|disc|both] [seed]`

use std::time::Instant;

use jengan_core::vocoder::{evaluate_held_out, Corpus, JenganMode, TrainConfig, Trainer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let steps: u64 = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(200);
    let mode = match args.get(2).map(String::as_str) {
        None | Some("both") => JenganMode::Both,
        Some("off") => JenganMode::Off,
        Some("gen") => JenganMode::Generator,
        Some("disc") => JenganMode::Discriminator,
        Some(other) => return Err(format!("unknown mode {other}").into()),
    };
    let seed: u64 = args.get(3).map(|s| s.parse()).transpose()?.unwrap_or(0);

    let mut config = TrainConfig { seed, ..TrainConfig::default() };
    config.jengan.mode = mode;
    let mut trainer = Trainer::new(config)?;
    let corpus = Corpus::new(&trainer.config, seed);

    let started = Instant::now();
    for step in 0..steps {
        let batch = corpus.batch(step, trainer.config.batch_size, &trainer.mel)?;
        let losses = trainer.train_step(&batch)?;
        if step % 100 == 0 || step + 1 == steps {
            println!(
                "step {step:5}  g {:.4}  d {:.4}  fm {:.4}  recon {:.4}",
                losses.loss_g, losses.loss_d, losses.loss_fm, losses.loss_recon
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    println!("{:.1} ms/step", 1e3 * elapsed / steps.max(1) as f64);

    let report = evaluate_held_out(&trainer.generator, &trainer.config, 8, seed)?;
    println!("mode {}  equivariance {:.5}  alias {:.5}", mode.name(), report.mean_equivariance, report.mean_alias);
    Ok(())
}
