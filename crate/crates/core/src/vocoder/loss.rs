//! Least-squares GAN, feature-matching and L1 losses with their gradients.

use alloc::vec::Vec;

use crate::nn::Tensor1D;

fn mean_of(t: &Tensor1D, f: impl Fn(f64) -> f64) -> f64 {
    t.data.iter().map(|&v| f(v)).sum::<f64>() / t.data.len() as f64
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `mean((real - 1)^2) + mean(fake^2)` and its gradients.
pub fn lsgan_discriminator(real: &Tensor1D, fake: &Tensor1D) -> (f64, Tensor1D, Tensor1D) {
    let loss = mean_of(real, |v| (v - 1.0) * (v - 1.0)) + mean_of(fake, |v| v * v);
    let (nr, nf) = (real.data.len() as f64, fake.data.len() as f64);
    (loss, real.map(|v| 2.0 * (v - 1.0) / nr), fake.map(|v| 2.0 * v / nf))
}

/// `mean((fake - 1)^2)` and its gradient.
pub fn lsgan_generator(fake: &Tensor1D) -> (f64, Tensor1D) {
    let n = fake.data.len() as f64;
    (mean_of(fake, |v| (v - 1.0) * (v - 1.0)), fake.map(|v| 2.0 * (v - 1.0) / n))
}

/// Mean absolute difference and its gradient w.r.t. `estimate`.
pub fn l1(estimate: &[f64], target: &[f64]) -> (f64, Vec<f64>) {
    let n = estimate.len() as f64;
    let loss = estimate.iter().zip(target).map(|(a, b)| (a - b).abs()).sum::<f64>() / n;
    let grad = estimate.iter().zip(target).map(|(a, b)| sign(a - b) / n).collect();
    (loss, grad)
}

/// Sum over blocks of the mean absolute feature difference; gradients are
/// w.r.t. the generated-signal features (real features are constants).
pub fn feature_matching(real: &[&Tensor1D], fake: &[&Tensor1D]) -> (f64, Vec<Tensor1D>) {
    let mut total = 0.0;
    let mut grads = Vec::with_capacity(fake.len());
    for (r, f) in real.iter().zip(fake) {
        let (loss, g) = l1(&f.data, &r.data);
        total += loss;
        grads.push(Tensor1D { batch: f.batch, channels: f.channels, len: f.len, data: g });
    }
    (total, grads)
}
