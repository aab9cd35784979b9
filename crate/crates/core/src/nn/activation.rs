use crate::math;

use super::Tensor1D;

/// Leaky rectifier slope used throughout the toy models.
pub const LEAKY_SLOPE: f64 = 0.1;

pub fn leaky_relu(x: &Tensor1D, slope: f64) -> Tensor1D {
    x.map(|v| if v > 0.0 { v } else { slope * v })
}

/// Uses `slope` as the sub-gradient at zero.
pub fn leaky_relu_backward(x: &Tensor1D, grad: &Tensor1D, slope: f64) -> Tensor1D {
    let mut g = grad.clone();
    for (gi, &xi) in g.data.iter_mut().zip(&x.data) {
        if xi <= 0.0 {
            *gi *= slope;
        }
    }
    g
}

pub fn tanh(x: &Tensor1D) -> Tensor1D {
    x.map(math::tanh)
}

/// Takes the forward output `y = tanh(x)`.
pub fn tanh_backward(y: &Tensor1D, grad: &Tensor1D) -> Tensor1D {
    let mut g = grad.clone();
    for (gi, &yi) in g.data.iter_mut().zip(&y.data) {
        *gi *= 1.0 - yi * yi;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn leaky_values() {
        let x = Tensor1D::from_vec(1, 1, 3, vec![0.0, -1.0, 2.0]).unwrap();
        assert_eq!(leaky_relu(&x, 0.1).data, [0.0, -0.1, 2.0]);
        let g = Tensor1D::from_vec(1, 1, 3, vec![1.0; 3]).unwrap();
        assert_eq!(leaky_relu_backward(&x, &g, 0.1).data, [0.1, 0.1, 1.0]);
    }

    #[test]
    fn tanh_range() {
        let x = Tensor1D::from_vec(1, 1, 3, vec![-50.0, 0.0, 50.0]).unwrap();
        let y = tanh(&x);
        assert!(y.data.iter().all(|v| (-1.0..=1.0).contains(v)));
        assert_eq!(y.data[1], 0.0);
    }
}
