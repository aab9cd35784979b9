//! Shift-equivariant anti-aliasing for 1-D generative networks.
//!
//! Network blocks are wrapped during training with a pair of shifted sinc
//! low-pass filters: the block input is advanced by a random shift and the
//! block output is delayed by the same shift, scaled by the block's
//! resampling ratio. A block that is shift-equivariant and band-limited is
//! unchanged by the wrapper, so the reconstruction and adversarial losses push
//! every wrapped block toward that behaviour. At inference the wrapper is
//! omitted and the network is exactly the unwrapped model.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every numeric piece:
//! filters, shift sampling, a small reverse-mode 1-D network core, the toy
//! vocoder and its training step, and the measurement suite. File formats,
//! WAV IO and the command line live in the `jengan` companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod delta;
mod error;
pub mod gradcheck;
pub mod math;
pub mod metrics;
pub mod nn;
pub mod signal;
pub mod sinc;
pub mod synth;
pub mod vocoder;
pub mod wrap;

pub use delta::{sample_delta, sample_schedule, zero_schedule, DeltaRng, DeltaSample, DeltaSchedule, SamplingMethod};
pub use error::{Error, Result};
pub use signal::{Ratio, Signal};
pub use sinc::{apply_filter, frequency_response, make_sinc_kernel, SincKernel, DEFAULT_HALF_WIDTH};
pub use wrap::{
    assign_shift, discriminator_pair_forward, generator_forward_jengan, wrap_block, Block, ShiftAssignment, ShiftSide,
};
