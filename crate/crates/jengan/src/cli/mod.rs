//! Command-line interface. Exit codes: 0 success, 1 a check or operation
//! failed, 2 invalid invocation or input.

mod design_filter;
mod eval;
mod spectrogram;
mod train;
mod wrap_check;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "jengan", version, about = "Shift-equivariant anti-aliasing experiments for 1-D GANs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the taps and magnitude response of a shifted sinc kernel as CSV.
    DesignFilter(design_filter::Args),
    /// Check zero-shift transparency and composition on the configured toy model.
    WrapCheck(wrap_check::Args),
    /// Train the toy vocoder, writing config, loss CSV and checkpoint.
    Train(train::Args),
    /// Evaluate a metric on audio files or a checkpoint.
    Eval(eval::Args),
    /// Export log-mel frames of a WAV file as CSV.
    Spectrogram(spectrogram::Args),
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    CheckFailed,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(Status::Success) => 0,
        Ok(Status::CheckFailed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<Status> {
    match command {
        Command::DesignFilter(a) => design_filter::run(a, out),
        Command::WrapCheck(a) => wrap_check::run(a, out),
        Command::Train(a) => train::run(a, out),
        Command::Eval(a) => eval::run(a, out),
        Command::Spectrogram(a) => spectrogram::run(a, out),
    }
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(Error::io(p)),
        None => out.write_all(text.as_bytes()).map_err(Error::io("<stdout>")),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", text.as_ref()).map_err(Error::io("<stdout>"))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}
