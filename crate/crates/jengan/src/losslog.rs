//! Per-step loss log in CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use jengan_core::vocoder::LossBundle;

use crate::{Error, Result};

pub const HEADER: &str = "step,loss_g,loss_d,loss_fm,loss_recon";

/// Formats one row; values use the shortest representation that round-trips.
pub fn row(l: &LossBundle) -> String {
    format!("{},{},{},{},{}", l.step, l.loss_g, l.loss_d, l.loss_fm, l.loss_recon)
}

pub struct LossLog {
    path: PathBuf,
    out: BufWriter<File>,
}

impl LossLog {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(Error::io(&path))?;
        let mut log = LossLog { out: BufWriter::new(file), path };
        log.line(HEADER)?;
        Ok(log)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(Error::io(&self.path))
    }

    pub fn append(&mut self, l: &LossBundle) -> Result<()> {
        self.line(&row(l))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(Error::io(&self.path))
    }
}
