use alloc::format;

use super::stft::{Stft, StftConfig};
use crate::math;
use crate::{Error, Result, Signal};

/// `(fft_size, hop, win_length)` of the three analysis resolutions.
pub const MSTFT_RESOLUTIONS: [(usize, usize, usize); 3] = [(512, 50, 240), (1024, 120, 600), (2048, 240, 1200)];

/// Squared-magnitude clamp applied before the square root.
pub const MSTFT_EPS: f64 = 1e-8;

/// Spectral convergence plus mean absolute log-magnitude difference at one
/// resolution, with `target` as the reference of the convergence term.
pub fn stft_distance(estimate: &[f64], target: &[f64], cfg: StftConfig) -> Result<f64> {
    let stft = Stft::new(cfg)?;
    let mag = |x: &[f64]| -> Result<alloc::vec::Vec<f64>> {
        Ok(stft
            .spectra(x)?
            .into_iter()
            .flat_map(|s| s.into_iter().map(|c| math::sqrt(c.norm_sqr().max(MSTFT_EPS))))
            .collect())
    };
    let (e, t) = (mag(estimate)?, mag(target)?);
    let diff: f64 = e.iter().zip(&t).map(|(a, b)| (b - a) * (b - a)).sum();
    let norm: f64 = t.iter().map(|b| b * b).sum();
    let sc = if diff == 0.0 { 0.0 } else { math::sqrt(diff) / math::sqrt(norm) };
    let log_l1 = e.iter().zip(&t).map(|(a, b)| (math::ln(*a) - math::ln(*b)).abs()).sum::<f64>() / e.len() as f64;
    Ok(sc + log_l1)
}

/// Multi-resolution STFT distance summed over [`MSTFT_RESOLUTIONS`].
pub fn mstft(estimate: &Signal, target: &Signal) -> Result<f64> {
    if !estimate.same_shape(target) || estimate.channels() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "mono signals of equal length required, got {} and {} samples",
            estimate.len(),
            target.len()
        )));
    }
    MSTFT_RESOLUTIONS.iter().try_fold(0.0, |acc, &(n, hop, win)| {
        Ok(acc + stft_distance(estimate.data(), target.data(), StftConfig::centered(n, hop, win))?)
    })
}
