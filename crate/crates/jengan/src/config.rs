//! JSON training configuration. Every field is optional and falls back to
//! the built-in default; command-line flags are applied on top.

use std::fs;
use std::path::Path;

use jengan_core::vocoder::TrainConfig;

use crate::{Error, Result};

pub fn parse_config(text: &str, origin: &Path) -> Result<TrainConfig> {
    serde_json::from_str(text).map_err(|source| Error::ConfigFile { path: origin.to_path_buf(), source })
}

pub fn load_config(path: impl AsRef<Path>) -> Result<TrainConfig> {
    let path = path.as_ref();
    parse_config(&fs::read_to_string(path).map_err(Error::io(path))?, path)
}

/// The file's config, or the default when no file is given.
pub fn load_or_default(path: Option<&Path>) -> Result<TrainConfig> {
    path.map_or_else(|| Ok(TrainConfig::default()), load_config)
}

pub fn to_json(config: &TrainConfig) -> String {
    let mut s = serde_json::to_string_pretty(config).expect("configs always serialize");
    s.push('\n');
    s
}

pub fn save_config(path: impl AsRef<Path>, config: &TrainConfig) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(config)).map_err(Error::io(path))
}
