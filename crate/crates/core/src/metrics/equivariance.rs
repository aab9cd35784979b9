use alloc::vec::Vec;

use crate::math;
use crate::sinc::{delay, DEFAULT_HALF_WIDTH};
use crate::{Error, Result, Signal};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivarianceReport {
    pub deltas: Vec<f64>,
    /// RMS difference over interior output samples, one per shift.
    pub errors: Vec<f64>,
    pub mean_error: f64,
    /// RMS of the unshifted model output over the same interior.
    pub reference_rms: f64,
    pub margin: usize,
}

impl EquivarianceReport {
    /// Mean error divided by the reference RMS.
    pub fn relative_mean(&self) -> f64 {
        if self.reference_rms == 0.0 {
            0.0
        } else {
            self.mean_error / self.reference_rms
        }
    }
}

/// Compares `model(delay(x, d))` with `delay(model(x), d * rate_ratio)` for
/// every `d`, excluding `margin` output samples at each end.
pub fn equivariance_error<F>(
    model: F,
    x: &Signal,
    deltas: &[f64],
    rate_ratio: f64,
    margin: usize,
) -> Result<EquivarianceReport>
where
    F: Fn(&Signal) -> Result<Signal>,
{
    // one filter on the input side, one on the output side
    let required = 2 * DEFAULT_HALF_WIDTH;
    if margin < required {
        return Err(Error::MarginTooSmall { margin, required });
    }
    let reference = model(x)?;
    let len = reference.len();
    if 2 * margin >= len {
        return Err(Error::TooShort { len, required: 2 * margin + 1 });
    }
    let interior = |s: &Signal| -> Vec<f64> {
        (0..s.channels()).flat_map(|c| s.channel(c)[margin..len - margin].to_vec()).collect()
    };
    let ref_inner = interior(&reference);
    let reference_rms = rms(&ref_inner);
    let mut errors = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let shifted_out = model(&delay(x, d, DEFAULT_HALF_WIDTH)?)?;
        let expected = delay(&reference, d * rate_ratio, DEFAULT_HALF_WIDTH)?;
        if !shifted_out.same_shape(&expected) {
            return Err(Error::ShapeMismatch("model output shape depends on the input shift".into()));
        }
        let diff: Vec<f64> = interior(&shifted_out).iter().zip(interior(&expected)).map(|(a, b)| a - b).collect();
        errors.push(rms(&diff));
    }
    let mean_error = if errors.is_empty() { 0.0 } else { errors.iter().sum::<f64>() / errors.len() as f64 };
    Ok(EquivarianceReport { deltas: deltas.to_vec(), errors, mean_error, reference_rms, margin })
}

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    math::sqrt(v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64)
}
