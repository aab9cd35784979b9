//! Reverse-mode 1-D network primitives.
//!
//! Layers expose `forward(&self, x)` and `backward(&mut self, x, grad_out)`;
//! the caller keeps whatever activations a backward pass needs. Parameter
//! gradients accumulate until [`Module::zero_grad`].

mod activation;
mod adam;
mod conv;
mod param;
mod tensor;

pub use activation::{leaky_relu, leaky_relu_backward, tanh, tanh_backward, LEAKY_SLOPE};
pub use adam::{Adam, AdamConfig};
pub use conv::{Conv1d, ConvTranspose1d};
pub use param::{init_uniform, Module, Param};
pub use tensor::Tensor1D;
