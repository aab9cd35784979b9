use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use jengan_core::{frequency_response, make_sinc_kernel, DEFAULT_HALF_WIDTH};

use super::{emit, sibling, Status};
use crate::Result;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Shift in samples; the kernel delays a signal by this amount.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    /// Taps on each side of the center.
    #[arg(long, default_value_t = DEFAULT_HALF_WIDTH)]
    pub half_width: usize,
    /// Taps CSV (`n,tap`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Magnitude response CSV (`freq,magnitude`, freq as a fraction of pi).
    /// Defaults to `<out stem>_response.csv` next to `--out`.
    #[arg(long)]
    pub response: Option<PathBuf>,
    /// Frequency points of the response.
    #[arg(long, default_value_t = 257)]
    pub points: usize,
}

pub fn run(args: Args, out: &mut dyn Write) -> Result<Status> {
    let k = make_sinc_kernel(args.delta, args.half_width)?;
    let mut taps = String::from("n,tap\n");
    for (i, t) in k.taps().iter().enumerate() {
        writeln!(taps, "{},{t}", i as i64 - args.half_width as i64).unwrap();
    }
    emit(args.out.as_deref(), &taps, out)?;

    let response_path = args.response.or_else(|| args.out.as_deref().map(|p| sibling(p, "_response.csv")));
    if let Some(path) = response_path {
        let mut csv = String::from("freq,magnitude\n");
        for (f, m) in frequency_response(&k, args.points)? {
            writeln!(csv, "{f},{m}").unwrap();
        }
        emit(Some(&path), &csv, out)?;
    }
    Ok(Status::Success)
}
