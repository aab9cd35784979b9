//! Shift sampling: discrete, uniform and normal draws with seeded streams.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::math::{self, PI};
use crate::{Error, Result};

pub const DISCRETE_VALUES: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
pub const UNIFORM_LOW: f64 = -2.0;
pub const UNIFORM_HIGH: f64 = 2.0;
pub const NORMAL_STD_DEV: f64 = 2.0;
pub const DEFAULT_NORMAL_CLAMP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
#[derive(Default)]
pub enum SamplingMethod {
    /// Equal probability over {-2, -1, 0, 1, 2}.
    #[default]
    Discrete,
    /// Uniform over the half-open range [-2, 2).
    Uniform,
    /// Zero-mean normal with standard deviation 2, clamped to `[-clamp, clamp]`.
    Normal { clamp: f64 },
}

impl SamplingMethod {
    pub fn normal() -> Self {
        SamplingMethod::Normal { clamp: DEFAULT_NORMAL_CLAMP }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SamplingMethod::Discrete => "discrete",
            SamplingMethod::Uniform => "uniform",
            SamplingMethod::Normal { .. } => "normal",
        }
    }

    /// Largest magnitude this method can emit.
    pub fn bound(&self) -> f64 {
        match *self {
            SamplingMethod::Discrete | SamplingMethod::Uniform => 2.0,
            SamplingMethod::Normal { clamp } => clamp,
        }
    }
}

/// Seeded xoshiro256++ stream.
///
/// Uniform variates take the top 53 bits of each output; normal variates use
/// the Box-Muller cosine branch, one output pair per variate.
#[derive(Debug, Clone)]
pub struct DeltaRng(Xoshiro256PlusPlus);

impl DeltaRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        DeltaRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }

    /// Standard normal variate.
    pub fn gaussian(&mut self) -> f64 {
        // 1 - u lies in (0, 1], keeping the logarithm finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * PI * u2)
    }

    /// Derives an independent stream, for handing to a sub-task.
    pub fn fork(&mut self) -> DeltaRng {
        DeltaRng::seed_from_u64(self.next_u64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaSample {
    pub value: f64,
    /// The draw before clamping; equals `value` except for clamped normal draws.
    pub raw: f64,
    pub method: SamplingMethod,
}

impl DeltaSample {
    pub fn zero(method: SamplingMethod) -> Self {
        DeltaSample { value: 0.0, raw: 0.0, method }
    }
}

pub fn sample_delta(method: SamplingMethod, rng: &mut DeltaRng) -> DeltaSample {
    let raw = match method {
        SamplingMethod::Discrete => DISCRETE_VALUES[rng.index(DISCRETE_VALUES.len())],
        SamplingMethod::Uniform => rng.uniform(UNIFORM_LOW, UNIFORM_HIGH),
        SamplingMethod::Normal { .. } => NORMAL_STD_DEV * rng.gaussian(),
    };
    let value = match method {
        SamplingMethod::Normal { clamp } => raw.clamp(-clamp, clamp),
        _ => raw,
    };
    DeltaSample { value, raw, method }
}

/// One shift per wrapped block, in block order.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaSchedule {
    pub per_block: Vec<DeltaSample>,
}

impl DeltaSchedule {
    pub fn len(&self) -> usize {
        self.per_block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_block.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.per_block.iter().map(|s| s.value).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.per_block.iter().all(|s| s.value == 0.0)
    }
}

pub fn sample_schedule(method: SamplingMethod, n_blocks: usize, rng: &mut DeltaRng) -> Result<DeltaSchedule> {
    if n_blocks == 0 {
        return Err(Error::Config("a schedule needs at least one block".into()));
    }
    let per_block = (0..n_blocks).map(|_| sample_delta(method, rng)).collect();
    Ok(DeltaSchedule { per_block })
}

/// All-zero schedule: the wrapped model reduces to the plain model.
pub fn zero_schedule(n_blocks: usize) -> Result<DeltaSchedule> {
    if n_blocks == 0 {
        return Err(Error::Config("a schedule needs at least one block".into()));
    }
    let per_block = (0..n_blocks).map(|_| DeltaSample::zero(SamplingMethod::Discrete)).collect();
    Ok(DeltaSchedule { per_block })
}
