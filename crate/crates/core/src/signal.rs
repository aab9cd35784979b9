use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Multi-channel, finite-length, uniformly sampled real sequence.
///
/// Samples are stored channel-major: channel `c` occupies
/// `data[c * len .. (c + 1) * len]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Signal {
    channels: usize,
    len: usize,
    sample_rate: f64,
    data: Vec<f64>,
}

impl Signal {
    pub fn new(channels: usize, sample_rate: f64, data: Vec<f64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidSignal("channel count must be positive".into()));
        }
        if data.is_empty() || !data.len().is_multiple_of(channels) {
            return Err(Error::InvalidSignal(format!(
                "{} samples cannot be split into {} non-empty channels",
                data.len(),
                channels
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSignal(format!("bad sample rate {sample_rate}")));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite sample at index {i}")));
        }
        let len = data.len() / channels;
        Ok(Self { channels, len, sample_rate, data })
    }

    pub fn mono(sample_rate: f64, data: Vec<f64>) -> Result<Self> {
        Self::new(1, sample_rate, data)
    }

    pub fn zeros(channels: usize, len: usize, sample_rate: f64) -> Result<Self> {
        Self::new(channels, sample_rate, alloc::vec![0.0; channels * len])
    }

    pub(crate) fn from_parts_unchecked(channels: usize, len: usize, sample_rate: f64, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), channels * len);
        Self { channels, len, sample_rate, data }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.data[c * self.len..(c + 1) * self.len]
    }

    pub fn rms(&self) -> f64 {
        let e: f64 = self.data.iter().map(|v| v * v).sum();
        crate::math::sqrt(e / self.data.len() as f64)
    }

    pub fn same_shape(&self, other: &Signal) -> bool {
        self.channels == other.channels && self.len == other.len
    }
}

/// Positive rational resampling ratio, output rate over input rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ratio {
    num: u32,
    den: u32,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidRatio { num, den });
        }
        let g = gcd(num, den);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn upsample(rate: u32) -> Result<Self> {
        Self::new(rate, 1)
    }

    pub fn downsample(rate: u32) -> Result<Self> {
        Self::new(1, rate)
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    /// Output length for an input of `len` samples, `round(len * r)`.
    pub fn scale_len(self, len: usize) -> usize {
        let scaled = len as u64 * self.num as u64;
        ((scaled + self.den as u64 / 2) / self.den as u64) as usize
    }
}

impl core::ops::Mul for Ratio {
    type Output = Ratio;

    fn mul(self, other: Ratio) -> Ratio {
        let num = self.num as u64 * other.num as u64;
        let den = self.den as u64 * other.den as u64;
        let g = gcd64(num, den);
        Ratio { num: (num / g) as u32, den: (den / g) as u32 }
    }
}

impl core::fmt::Display for Ratio {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    gcd64(a as u64, b as u64) as u32
}

fn gcd64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Signal::mono(22050.0, vec![]).is_err());
        assert!(Signal::mono(22050.0, vec![0.0, f64::NAN]).is_err());
        assert!(Signal::new(2, 22050.0, vec![0.0; 3]).is_err());
        assert!(Signal::mono(0.0, vec![0.0]).is_err());
    }

    #[test]
    fn ratio_reduces_and_scales() {
        let r = Ratio::new(4, 16).unwrap();
        assert_eq!((r.num(), r.den()), (1, 4));
        assert_eq!(r.scale_len(100), 25);
        assert_eq!((Ratio::upsample(4).unwrap() * Ratio::upsample(16).unwrap()).num(), 64);
        assert!(Ratio::new(0, 1).is_err());
    }
}
