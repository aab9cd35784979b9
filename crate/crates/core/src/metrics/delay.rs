use alloc::vec::Vec;

use crate::{Error, Result};

/// Delay of `delayed` relative to `reference` in samples.
///
/// The cross-correlation `c(l) = sum_t reference[t] * delayed[t + l]` is
/// evaluated for integer lags in `-max_lag..=max_lag`, with `t` restricted to
/// samples at least `margin` from either end, and its peak is refined by a
/// three-point parabola through the neighbouring lags.
pub fn estimate_delay(reference: &[f64], delayed: &[f64], max_lag: usize, margin: usize) -> Result<f64> {
    if reference.len() != delayed.len() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "reference has {} samples, delayed has {}",
            reference.len(),
            delayed.len()
        )));
    }
    if margin < max_lag + 1 {
        return Err(Error::MarginTooSmall { margin, required: max_lag + 1 });
    }
    let len = reference.len();
    if len <= 2 * margin {
        return Err(Error::TooShort { len, required: 2 * margin + 1 });
    }
    let lags = max_lag as isize;
    let corr: Vec<f64> = (-lags..=lags)
        .map(|l| (margin..len - margin).map(|t| reference[t] * delayed[(t as isize + l) as usize]).sum())
        .collect();
    let peak = (0..corr.len()).fold(0, |best, i| if corr[i] > corr[best] { i } else { best });
    let lag = peak as f64 - max_lag as f64;
    if peak == 0 || peak + 1 == corr.len() {
        return Ok(lag);
    }
    let (a, b, c) = (corr[peak - 1], corr[peak], corr[peak + 1]);
    let curvature = a - 2.0 * b + c;
    Ok(if curvature == 0.0 { lag } else { lag + 0.5 * (a - c) / curvature })
}
