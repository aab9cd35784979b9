use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, Signal};

/// Batch of multi-channel sequences, laid out `[batch][channel][time]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor1D {
    pub batch: usize,
    pub channels: usize,
    pub len: usize,
    pub data: Vec<f64>,
}

impl Tensor1D {
    pub fn zeros(batch: usize, channels: usize, len: usize) -> Self {
        Tensor1D { batch, channels, len, data: vec![0.0; batch * channels * len] }
    }

    pub fn from_vec(batch: usize, channels: usize, len: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != batch * channels * len {
            return Err(Error::ShapeMismatch(format!("{} values for shape [{batch}, {channels}, {len}]", data.len())));
        }
        Ok(Tensor1D { batch, channels, len, data })
    }

    pub fn from_signal(x: &Signal) -> Self {
        Tensor1D { batch: 1, channels: x.channels(), len: x.len(), data: x.data().to_vec() }
    }

    /// Stacks equally shaped signals into one batch.
    pub fn stack(signals: &[Signal]) -> Result<Self> {
        let first = signals.first().ok_or_else(|| Error::ShapeMismatch("empty batch".into()))?;
        let mut data = Vec::with_capacity(signals.len() * first.data().len());
        for s in signals {
            if !s.same_shape(first) {
                return Err(Error::ShapeMismatch("signals in a batch differ in shape".into()));
            }
            data.extend_from_slice(s.data());
        }
        Ok(Tensor1D { batch: signals.len(), channels: first.channels(), len: first.len(), data })
    }

    pub fn to_signal(&self, item: usize, sample_rate: f64) -> Signal {
        let n = self.channels * self.len;
        Signal::from_parts_unchecked(self.channels, self.len, sample_rate, self.data[item * n..(item + 1) * n].to_vec())
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.batch, self.channels, self.len]
    }

    pub fn same_shape(&self, other: &Tensor1D) -> bool {
        self.shape() == other.shape()
    }

    pub fn row(&self, b: usize, c: usize) -> &[f64] {
        let start = (b * self.channels + c) * self.len;
        &self.data[start..start + self.len]
    }

    pub fn row_mut(&mut self, b: usize, c: usize) -> &mut [f64] {
        let start = (b * self.channels + c) * self.len;
        &mut self.data[start..start + self.len]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor1D {
        Tensor1D {
            batch: self.batch,
            channels: self.channels,
            len: self.len,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Tensor1D) {
        debug_assert!(self.same_shape(other));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
