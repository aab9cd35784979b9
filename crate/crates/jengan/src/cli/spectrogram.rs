use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use jengan_core::metrics::{mel_spectrogram, MelConfig};

use super::{emit, Status};
use crate::wav::read_wav;
use crate::{Error, Result};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Mono 16-bit PCM WAV file.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV with header `frame,mel_0,...`; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Frame hop in samples.
    #[arg(long, default_value_t = MelConfig::default().hop)]
    pub hop: usize,
}

pub fn run(args: Args, out: &mut dyn Write) -> Result<Status> {
    let x = read_wav(&args.input)?;
    if x.channels() != 1 {
        return Err(Error::Usage(format!("{} has {} channels; expected mono", args.input.display(), x.channels())));
    }
    let defaults = MelConfig::default();
    let cfg = MelConfig { hop: args.hop, fmax: defaults.fmax.min(x.sample_rate() / 2.0), ..defaults };
    let mel = mel_spectrogram(&x, &cfg)?;
    let mut csv = String::from("frame");
    for m in 0..mel.n_mels {
        write!(csv, ",mel_{m}").unwrap();
    }
    csv.push('\n');
    for t in 0..mel.frames {
        write!(csv, "{t}").unwrap();
        for v in mel.frame(t) {
            write!(csv, ",{v}").unwrap();
        }
        csv.push('\n');
    }
    emit(args.out.as_deref(), &csv, out)?;
    Ok(Status::Success)
}
