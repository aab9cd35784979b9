use alloc::format;

use crate::delta::DeltaRng;
use crate::{Error, Result};

use super::{init_uniform, Module, Param, Tensor1D};

/// Cross-correlation `y[o, t] = b[o] + sum_{i,k} w[o, i, k] x[i, t*stride + k*dilation - pad_left]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv1d {
    pub weight: Param,
    pub bias: Param,
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel_size: usize,
    pub stride: usize,
    pub dilation: usize,
    pub pad_left: usize,
    pub pad_right: usize,
}

impl Conv1d {
    /// Stride-1 convolution with "same" padding; `kernel_size` must be odd.
    pub fn same(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        kernel_size: usize,
        dilation: usize,
        rng: &mut DeltaRng,
    ) -> Self {
        let pad = dilation * (kernel_size - 1) / 2;
        Self::with_geometry(name, in_channels, out_channels, kernel_size, 1, dilation, pad, pad, rng)
    }

    /// Strided convolution whose output length is `ceil(len / stride)`.
    pub fn strided(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        kernel_size: usize,
        stride: usize,
        rng: &mut DeltaRng,
    ) -> Self {
        // total padding of k - 1 gives floor((L - 1) / s) + 1 = ceil(L / s)
        let total = kernel_size - 1;
        let left = total / 2;
        Self::with_geometry(name, in_channels, out_channels, kernel_size, stride, 1, left, total - left, rng)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_geometry(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        kernel_size: usize,
        stride: usize,
        dilation: usize,
        pad_left: usize,
        pad_right: usize,
        rng: &mut DeltaRng,
    ) -> Self {
        assert!(kernel_size > 0 && stride > 0 && dilation > 0);
        let mut weight = Param::zeros(format!("{name}.weight"), &[out_channels, in_channels, kernel_size]);
        let mut bias = Param::zeros(format!("{name}.bias"), &[out_channels]);
        let fan_in = in_channels * kernel_size;
        init_uniform(&mut weight, fan_in, rng);
        init_uniform(&mut bias, fan_in, rng);
        Conv1d { weight, bias, in_channels, out_channels, kernel_size, stride, dilation, pad_left, pad_right }
    }

    pub fn output_len(&self, len: usize) -> usize {
        let span = self.dilation * (self.kernel_size - 1) + 1;
        let padded = len + self.pad_left + self.pad_right;
        if padded < span {
            0
        } else {
            (padded - span) / self.stride + 1
        }
    }

    fn check(&self, x: &Tensor1D) -> Result<usize> {
        if x.channels != self.in_channels {
            return Err(Error::ShapeMismatch(format!(
                "{} expects {} input channels, got {}",
                self.weight.name, self.in_channels, x.channels
            )));
        }
        let out = self.output_len(x.len);
        if out == 0 {
            return Err(Error::ShapeMismatch(format!("{} input of length {} too short", self.weight.name, x.len)));
        }
        Ok(out)
    }

    /// Valid output range for tap `k`: `0 <= t*s + off < len`.
    fn tap_range(&self, k: usize, len: usize, out_len: usize) -> (isize, usize, usize) {
        let off = (k * self.dilation) as isize - self.pad_left as isize;
        let s = self.stride as isize;
        let t0 = if off >= 0 { 0 } else { ((-off) + s - 1) / s };
        let last = len as isize - 1 - off;
        let t1 = if last < 0 { 0 } else { (last / s + 1).min(out_len as isize) };
        (off, t0.max(0) as usize, t1.max(0) as usize)
    }

    pub fn forward(&self, x: &Tensor1D) -> Result<Tensor1D> {
        let out_len = self.check(x)?;
        let mut y = Tensor1D::zeros(x.batch, self.out_channels, out_len);
        let k = self.kernel_size;
        for b in 0..x.batch {
            for o in 0..self.out_channels {
                let yr = y.row_mut(b, o);
                yr.iter_mut().for_each(|v| *v = self.bias.value[o]);
                for i in 0..self.in_channels {
                    let xr = x.row(b, i);
                    let w = &self.weight.value[(o * self.in_channels + i) * k..][..k];
                    for (kk, &wk) in w.iter().enumerate() {
                        let (off, t0, t1) = self.tap_range(kk, x.len, out_len);
                        if t0 >= t1 {
                            continue;
                        }
                        if self.stride == 1 {
                            let xs = &xr[(t0 as isize + off) as usize..(t1 as isize + off) as usize];
                            for (yt, xt) in yr[t0..t1].iter_mut().zip(xs) {
                                *yt += wk * xt;
                            }
                        } else {
                            for t in t0..t1 {
                                yr[t] += wk * xr[(t as isize * self.stride as isize + off) as usize];
                            }
                        }
                    }
                }
            }
        }
        Ok(y)
    }

    /// Accumulates parameter gradients and returns the input gradient.
    pub fn backward(&mut self, x: &Tensor1D, grad: &Tensor1D) -> Result<Tensor1D> {
        let out_len = self.check(x)?;
        if grad.shape() != [x.batch, self.out_channels, out_len] {
            return Err(Error::ShapeMismatch(format!("{} gradient shape", self.weight.name)));
        }
        let mut gx = Tensor1D::zeros(x.batch, self.in_channels, x.len);
        let k = self.kernel_size;
        for b in 0..x.batch {
            for o in 0..self.out_channels {
                let gy = grad.row(b, o);
                self.bias.grad[o] += gy.iter().sum::<f64>();
                for i in 0..self.in_channels {
                    let xr = x.row(b, i);
                    let base = (o * self.in_channels + i) * k;
                    for kk in 0..k {
                        let (off, t0, t1) = self.tap_range(kk, x.len, out_len);
                        if t0 >= t1 {
                            continue;
                        }
                        let wk = self.weight.value[base + kk];
                        let mut gw = 0.0;
                        let gxr = gx.row_mut(b, i);
                        if self.stride == 1 {
                            let lo = (t0 as isize + off) as usize;
                            let hi = (t1 as isize + off) as usize;
                            for ((g, xv), gxv) in gy[t0..t1].iter().zip(&xr[lo..hi]).zip(&mut gxr[lo..hi]) {
                                gw += g * xv;
                                *gxv += wk * g;
                            }
                        } else {
                            for (t, &g) in gy.iter().enumerate().take(t1).skip(t0) {
                                let j = (t as isize * self.stride as isize + off) as usize;
                                gw += g * xr[j];
                                gxr[j] += wk * g;
                            }
                        }
                        self.weight.grad[base + kk] += gw;
                    }
                }
            }
        }
        Ok(gx)
    }
}

impl Module for Conv1d {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        f(&self.weight);
        f(&self.bias);
    }

    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.weight);
        f(&mut self.bias);
    }
}

/// Transposed convolution `y[o, t*stride + k - padding] += w[i, o, k] x[i, t]`.
///
/// Output length is `(len - 1) * stride - 2 * padding + kernel_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvTranspose1d {
    pub weight: Param,
    pub bias: Param,
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel_size: usize,
    pub stride: usize,
    pub padding: usize,
}

impl ConvTranspose1d {
    pub fn new(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        kernel_size: usize,
        stride: usize,
        padding: usize,
        rng: &mut DeltaRng,
    ) -> Self {
        assert!(kernel_size > 0 && stride > 0);
        let mut weight = Param::zeros(format!("{name}.weight"), &[in_channels, out_channels, kernel_size]);
        let mut bias = Param::zeros(format!("{name}.bias"), &[out_channels]);
        // fan-in of each output sample: in_channels * kernel_size / stride taps
        let fan_in = (in_channels * kernel_size / stride).max(1);
        init_uniform(&mut weight, fan_in, rng);
        init_uniform(&mut bias, fan_in, rng);
        ConvTranspose1d { weight, bias, in_channels, out_channels, kernel_size, stride, padding }
    }

    /// Upsampler by `rate` with kernel `2 * rate` and output length `len * rate`.
    pub fn upsampler(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        rate: usize,
        rng: &mut DeltaRng,
    ) -> Result<Self> {
        if rate == 0 || (rate > 1 && rate % 2 == 1) {
            return Err(Error::Config(format!("upsample rate {rate} must be 1 or even")));
        }
        Ok(Self::new(name, in_channels, out_channels, 2 * rate, rate, rate / 2, rng))
    }

    pub fn output_len(&self, len: usize) -> usize {
        ((len as isize - 1) * self.stride as isize - 2 * self.padding as isize + self.kernel_size as isize).max(0)
            as usize
    }

    fn check(&self, x: &Tensor1D) -> Result<usize> {
        if x.channels != self.in_channels {
            return Err(Error::ShapeMismatch(format!(
                "{} expects {} input channels, got {}",
                self.weight.name, self.in_channels, x.channels
            )));
        }
        let out = self.output_len(x.len);
        if x.len == 0 || out == 0 {
            return Err(Error::ShapeMismatch(format!("{} input of length {} too short", self.weight.name, x.len)));
        }
        Ok(out)
    }

    /// Valid input range for tap `k`: `0 <= t*s + k - p < out_len`.
    fn tap_range(&self, k: usize, len: usize, out_len: usize) -> (isize, usize, usize) {
        let off = k as isize - self.padding as isize;
        let s = self.stride as isize;
        let t0 = if off >= 0 { 0 } else { ((-off) + s - 1) / s };
        let last = out_len as isize - 1 - off;
        let t1 = if last < 0 { 0 } else { (last / s + 1).min(len as isize) };
        (off, t0.max(0) as usize, t1.max(0) as usize)
    }

    pub fn forward(&self, x: &Tensor1D) -> Result<Tensor1D> {
        let out_len = self.check(x)?;
        let mut y = Tensor1D::zeros(x.batch, self.out_channels, out_len);
        let (k, s) = (self.kernel_size, self.stride as isize);
        for b in 0..x.batch {
            for o in 0..self.out_channels {
                let yr = y.row_mut(b, o);
                yr.iter_mut().for_each(|v| *v = self.bias.value[o]);
                for i in 0..self.in_channels {
                    let xr = x.row(b, i);
                    let w = &self.weight.value[(i * self.out_channels + o) * k..][..k];
                    for (kk, &wk) in w.iter().enumerate() {
                        let (off, t0, t1) = self.tap_range(kk, x.len, out_len);
                        for t in t0..t1 {
                            yr[(t as isize * s + off) as usize] += wk * xr[t];
                        }
                    }
                }
            }
        }
        Ok(y)
    }

    pub fn backward(&mut self, x: &Tensor1D, grad: &Tensor1D) -> Result<Tensor1D> {
        let out_len = self.check(x)?;
        if grad.shape() != [x.batch, self.out_channels, out_len] {
            return Err(Error::ShapeMismatch(format!("{} gradient shape", self.weight.name)));
        }
        let mut gx = Tensor1D::zeros(x.batch, self.in_channels, x.len);
        let (k, s) = (self.kernel_size, self.stride as isize);
        for b in 0..x.batch {
            for o in 0..self.out_channels {
                let gy = grad.row(b, o);
                self.bias.grad[o] += gy.iter().sum::<f64>();
                for i in 0..self.in_channels {
                    let xr = x.row(b, i);
                    let base = (i * self.out_channels + o) * k;
                    let gxr = gx.row_mut(b, i);
                    for kk in 0..k {
                        let (off, t0, t1) = self.tap_range(kk, x.len, out_len);
                        let wk = self.weight.value[base + kk];
                        let mut gw = 0.0;
                        for t in t0..t1 {
                            let g = gy[(t as isize * s + off) as usize];
                            gw += g * xr[t];
                            gxr[t] += wk * g;
                        }
                        self.weight.grad[base + kk] += gw;
                    }
                }
            }
        }
        Ok(gx)
    }
}

impl Module for ConvTranspose1d {
    fn visit_params(&self, f: &mut dyn FnMut(&Param)) {
        f(&self.weight);
        f(&self.bias);
    }

    fn visit_params_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.weight);
        f(&mut self.bias);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn rng() -> DeltaRng {
        DeltaRng::seed_from_u64(1234)
    }

    fn random(rng: &mut DeltaRng, b: usize, c: usize, l: usize) -> Tensor1D {
        let data = (0..b * c * l).map(|_| rng.uniform(-1.0, 1.0)).collect();
        Tensor1D::from_vec(b, c, l, data).unwrap()
    }

    #[test]
    fn pointwise_unit_conv_is_identity() {
        let mut c = Conv1d::same("c", 1, 1, 1, 1, &mut rng());
        c.weight.value = vec![1.0];
        c.bias.value = vec![0.0];
        let x = random(&mut rng(), 2, 1, 17);
        assert_eq!(c.forward(&x).unwrap(), x);
    }

    #[test]
    fn transposed_zero_insertion() {
        let mut t = ConvTranspose1d::new("t", 1, 1, 2, 2, 0, &mut rng());
        t.weight.value = vec![0.0, 1.0];
        t.bias.value = vec![0.0];
        let x = Tensor1D::from_vec(1, 1, 4, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let y = t.forward(&x).unwrap();
        assert_eq!(y.data, [0.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 4.0]);
    }

    #[test]
    fn output_lengths() {
        let mut r = rng();
        for rate in [2usize, 4, 8] {
            let t = ConvTranspose1d::upsampler("u", 2, 2, rate, &mut r).unwrap();
            assert_eq!(t.output_len(13), 13 * rate);
        }
        assert!(ConvTranspose1d::upsampler("u", 1, 1, 3, &mut r).is_err());
        for (stride, k) in [(2usize, 5usize), (4, 9), (3, 4)] {
            let c = Conv1d::strided("s", 1, 1, k, stride, &mut r);
            for len in 1..40 {
                assert_eq!(c.output_len(len), len.div_ceil(stride), "stride {stride} len {len}");
            }
        }
    }

    #[test]
    fn channel_mismatch_is_error() {
        let c = Conv1d::same("c", 3, 2, 3, 1, &mut rng());
        let x = Tensor1D::zeros(1, 2, 10);
        assert!(matches!(c.forward(&x), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn subsampled_transposed_conv_is_plain_conv() {
        // phase c of a stride-s transposed conv is a stride-1 conv with the
        // taps w[m*s + c + p], applied in reverse order
        let mut r = rng();
        let (s, k, p) = (2usize, 4usize, 1usize);
        let t = ConvTranspose1d::new("t", 1, 1, k, s, p, &mut r);
        let x = random(&mut r, 1, 1, 12);
        let y = t.forward(&x).unwrap();
        for c in 0..s {
            let taps: Vec<(isize, f64)> = (0..k)
                .filter(|kk| (kk + s - (c + p) % s) % s == 0)
                .map(|kk| (((kk as isize) - (c + p) as isize).div_euclid(s as isize), t.weight.value[kk]))
                .collect();
            for j in 0..x.len {
                let mut want = t.bias.value[0];
                for &(m, w) in &taps {
                    let src = j as isize - m;
                    if src >= 0 && (src as usize) < x.len {
                        want += w * x.data[src as usize];
                    }
                }
                let idx = j * s + c;
                if idx < y.len {
                    assert!((y.data[idx] - want).abs() < 1e-12);
                }
            }
        }
    }
}
