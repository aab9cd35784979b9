use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::delta::DeltaRng;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub shape: Vec<usize>,
    pub value: Vec<f64>,
    pub grad: Vec<f64>,
}

impl Param {
    pub fn zeros(name: impl Into<String>, shape: &[usize]) -> Self {
        let n = shape.iter().product();
        Param { name: name.into(), shape: shape.to_vec(), value: vec![0.0; n], grad: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }
}

/// Fan-in scaled uniform init, `U(-1/sqrt(fan_in), 1/sqrt(fan_in))`.
pub fn init_uniform(p: &mut Param, fan_in: usize, rng: &mut DeltaRng) {
    let bound = 1.0 / math::sqrt(fan_in.max(1) as f64);
    for v in &mut p.value {
        *v = rng.uniform(-bound, bound);
    }
}

/// Anything holding parameters, visited in a fixed order.
pub trait Module {
    fn visit_params(&self, f: &mut dyn FnMut(&Param));
    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param));

    fn zero_grad(&mut self) {
        self.visit_params_mut(&mut |p| p.grad.iter_mut().for_each(|g| *g = 0.0));
    }

    fn param_count(&self) -> usize {
        let mut n = 0;
        self.visit_params(&mut |p| n += p.len());
        n
    }

    /// Clones out every parameter (values and shapes), e.g. for checkpoints.
    fn snapshot(&self) -> Vec<Param> {
        let mut out = Vec::new();
        self.visit_params(&mut |p| out.push(p.clone()));
        out
    }
}
