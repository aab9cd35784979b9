//! File formats, experiment plumbing and the command line for `jengan-core`.
//!
//! WAV audio (16-bit PCM), binary parameter checkpoints, JSON training
//! configs, loss CSVs and a background batch pipeline, tied together by the
//! `jengan` binary.

pub mod checkpoint;
pub mod cli;
pub mod config;
mod error;
pub mod losslog;
pub mod model;
pub mod pipeline;
pub mod run;
pub mod wav;

pub use error::{Error, Result};
