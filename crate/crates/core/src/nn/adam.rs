use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

use super::Module;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig { lr: 1e-3, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// Adaptive-moment optimizer with bias correction.
///
/// Moment buffers are created on the first step and matched to parameters
/// by visit order afterwards.
#[derive(Debug, Clone)]
pub struct Adam {
    pub config: AdamConfig,
    step: u64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(config: AdamConfig) -> Self {
        Adam { config, step: 0, first: Vec::new(), second: Vec::new() }
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    pub fn step(&mut self, model: &mut dyn Module) -> Result<()> {
        if self.step == 0 {
            model.visit_params(&mut |p| {
                self.first.push(vec![0.0; p.len()]);
                self.second.push(vec![0.0; p.len()]);
            });
        }
        let mut shapes_ok = true;
        let mut count = 0;
        model.visit_params(&mut |p| {
            shapes_ok &= self.first.get(count).is_some_and(|m| m.len() == p.len());
            count += 1;
        });
        if !shapes_ok || count != self.first.len() {
            return Err(Error::ShapeMismatch(format!(
                "optimizer state tracks {} tensors, model has {count}",
                self.first.len()
            )));
        }

        self.step += 1;
        let AdamConfig { lr, beta1, beta2, eps } = self.config;
        let c1 = 1.0 - math::powf(beta1, self.step as f64);
        let c2 = 1.0 - math::powf(beta2, self.step as f64);
        let mut i = 0;
        let (first, second) = (&mut self.first, &mut self.second);
        model.visit_params_mut(&mut |p| {
            let (m, v) = (&mut first[i], &mut second[i]);
            for ((w, &g), (mk, vk)) in p.value.iter_mut().zip(&p.grad).zip(m.iter_mut().zip(v.iter_mut())) {
                *mk = beta1 * *mk + (1.0 - beta1) * g;
                *vk = beta2 * *vk + (1.0 - beta2) * g * g;
                let mh = *mk / c1;
                let vh = *vk / c2;
                *w -= lr * mh / (math::sqrt(vh) + eps);
            }
            i += 1;
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Param;

    struct Scalar(Param);

    impl Module for Scalar {
        fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
            f(&self.0)
        }
        fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
            f(&mut self.0)
        }
    }

    #[test]
    fn zero_gradient_leaves_params() {
        let mut m = Scalar(Param::zeros("w", &[3]));
        m.0.value = vec![1.0, -2.0, 3.0];
        let mut opt = Adam::new(AdamConfig::default());
        for _ in 0..5 {
            opt.step(&mut m).unwrap();
        }
        assert_eq!(m.0.value, [1.0, -2.0, 3.0]);
    }

    #[test]
    fn first_step_moves_by_lr() {
        let mut m = Scalar(Param::zeros("w", &[1]));
        m.0.grad[0] = 1.0;
        let mut opt = Adam::new(AdamConfig { lr: 0.1, ..AdamConfig::default() });
        opt.step(&mut m).unwrap();
        // m_hat = v_hat = 1, so the step is lr / (1 + eps)
        let want = -0.1 / (1.0 + 1e-8);
        assert!((m.0.value[0] - want).abs() < 1e-15);
        assert!((m.0.value[0] + 0.1).abs() < 1e-8);
    }

    #[test]
    fn detects_shape_change() {
        let mut m = Scalar(Param::zeros("w", &[2]));
        let mut opt = Adam::new(AdamConfig::default());
        opt.step(&mut m).unwrap();
        let mut other = Scalar(Param::zeros("w", &[3]));
        assert!(opt.step(&mut other).is_err());
    }

    #[test]
    fn deterministic_trajectory() {
        let run = || {
            let mut m = Scalar(Param::zeros("w", &[2]));
            let mut opt = Adam::new(AdamConfig::default());
            let mut traj = Vec::new();
            for k in 0..20 {
                m.0.grad = vec![(k as f64).sin(), 2.0 * m.0.value[0] - 1.0];
                opt.step(&mut m).unwrap();
                traj.extend_from_slice(&m.0.value);
            }
            traj
        };
        assert_eq!(run(), run());
    }
}
