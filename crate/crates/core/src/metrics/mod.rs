//! Measurements: shift-equivariance error, aliasing energy, log-mel MAE and
//! multi-resolution STFT distance, plus the transforms they share and a
//! cross-correlation delay estimator.

mod alias;
mod delay;
mod equivariance;
pub mod fft;
pub mod mel;
mod mstft;
pub mod stft;

pub use alias::{alias_energy, AliasReport};
pub use delay::estimate_delay;
pub use equivariance::{equivariance_error, EquivarianceReport};
pub use mel::{mel_filterbank, mel_mae, mel_mae_with, mel_spectrogram, LogMel, MelConfig, MelTransform};
pub use mstft::{mstft, stft_distance, MSTFT_EPS, MSTFT_RESOLUTIONS};
pub use stft::{stft_magnitude, Padding, Spectrogram, Stft, StftConfig};
