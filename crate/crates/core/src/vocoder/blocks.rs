use alloc::format;
use alloc::vec::Vec;

use crate::delta::DeltaRng;
use crate::nn::{leaky_relu, leaky_relu_backward, Conv1d, ConvTranspose1d, Module, Param, Tensor1D, LEAKY_SLOPE};
use crate::wrap::{Block, Tape};
use crate::{Error, Ratio, Result};

/// Generator block: leaky rectifier, transposed-conv upsampler, then a
/// residual stack of dilated convolutions.
#[derive(Debug, Clone, PartialEq)]
pub struct UpBlock {
    pub up: ConvTranspose1d,
    pub res: Vec<Conv1d>,
    ratio: Ratio,
}

impl UpBlock {
    pub fn new(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        rate: usize,
        res_kernel: usize,
        dilations: &[usize],
        rng: &mut DeltaRng,
    ) -> Result<Self> {
        let up = ConvTranspose1d::upsampler(&format!("{name}.up"), in_channels, out_channels, rate, rng)?;
        let res = dilations
            .iter()
            .enumerate()
            .map(|(i, &d)| Conv1d::same(&format!("{name}.res{i}"), out_channels, out_channels, res_kernel, d, rng))
            .collect();
        Ok(UpBlock { up, res, ratio: Ratio::upsample(rate as u32)? })
    }
}

impl Module for UpBlock {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        self.up.visit_params(f);
        self.res.iter().for_each(|c| c.visit_params(f));
    }

    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.up.visit_params_mut(f);
        self.res.iter_mut().for_each(|c| c.visit_params_mut(f));
    }
}

impl Block for UpBlock {
    fn resample_ratio(&self) -> Ratio {
        self.ratio
    }

    // tape: [x, leaky(x), then (h_i, leaky(h_i)) per residual conv]
    fn forward(&self, x: &Tensor1D, tape: &mut Tape) -> Result<Tensor1D> {
        let a = leaky_relu(x, LEAKY_SLOPE);
        let mut h = self.up.forward(&a)?;
        tape.push(x.clone());
        tape.push(a);
        for conv in &self.res {
            let l = leaky_relu(&h, LEAKY_SLOPE);
            let c = conv.forward(&l)?;
            tape.push(h.clone());
            h.add_assign(&c);
            tape.push(l);
        }
        Ok(h)
    }

    fn backward(&mut self, tape: &Tape, grad: &Tensor1D) -> Result<Tensor1D> {
        if tape.len() != 2 + 2 * self.res.len() {
            return Err(Error::ShapeMismatch("up-block tape length".into()));
        }
        let mut g = grad.clone();
        for (i, conv) in self.res.iter_mut().enumerate().rev() {
            let (h, l) = (&tape[2 + 2 * i], &tape[3 + 2 * i]);
            let gl = conv.backward(l, &g)?;
            g.add_assign(&leaky_relu_backward(h, &gl, LEAKY_SLOPE));
        }
        let ga = self.up.backward(&tape[1], &g)?;
        Ok(leaky_relu_backward(&tape[0], &ga, LEAKY_SLOPE))
    }
}

/// Discriminator block: strided convolution followed by a leaky rectifier.
#[derive(Debug, Clone, PartialEq)]
pub struct DownBlock {
    pub conv: Conv1d,
    ratio: Ratio,
}

impl DownBlock {
    pub fn new(name: &str, in_channels: usize, out_channels: usize, stride: usize, rng: &mut DeltaRng) -> Result<Self> {
        let conv = Conv1d::strided(&format!("{name}.conv"), in_channels, out_channels, 2 * stride + 1, stride, rng);
        Ok(DownBlock { conv, ratio: Ratio::downsample(stride as u32)? })
    }
}

impl Module for DownBlock {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        self.conv.visit_params(f)
    }

    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.conv.visit_params_mut(f)
    }
}

impl Block for DownBlock {
    fn resample_ratio(&self) -> Ratio {
        self.ratio
    }

    fn forward(&self, x: &Tensor1D, tape: &mut Tape) -> Result<Tensor1D> {
        let z = self.conv.forward(x)?;
        let y = leaky_relu(&z, LEAKY_SLOPE);
        tape.push(x.clone());
        tape.push(z);
        Ok(y)
    }

    fn backward(&mut self, tape: &Tape, grad: &Tensor1D) -> Result<Tensor1D> {
        if tape.len() != 2 {
            return Err(Error::ShapeMismatch("down-block tape length".into()));
        }
        let gz = leaky_relu_backward(&tape[1], grad, LEAKY_SLOPE);
        self.conv.backward(&tape[0], &gz)
    }
}
