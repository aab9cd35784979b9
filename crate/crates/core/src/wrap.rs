//! Block wrapping with shifted input and output sinc filters.
//!
//! A wrapped block computes `M(x * K(-s_in)) * K(+s_out)` where `*` is the
//! channel-wise filtering of [`crate::sinc`]. For a rate-preserving block both
//! shifts equal the sampled value. Across a resampling block the shift is
//! carried at the higher rate, where it is largest, and scaled down on the
//! other side, so no filter ever shifts by more than the sampled magnitude.
//! A zero shift skips the filter entirely, which makes the zero schedule
//! bit-identical to the plain model.

use alloc::format;
use alloc::vec::Vec;

use crate::delta::DeltaSchedule;
use crate::nn::{Module, Tensor1D};
use crate::sinc::{self, SincKernel, DEFAULT_HALF_WIDTH};
use crate::{Error, Ratio, Result, Signal};

/// Activations a block keeps for its backward pass.
pub type Tape = Vec<Tensor1D>;

/// A differentiable network block with a declared resampling ratio.
pub trait Block: Module {
    /// Output rate over input rate.
    fn resample_ratio(&self) -> Ratio;

    fn forward(&self, x: &Tensor1D, tape: &mut Tape) -> Result<Tensor1D>;

    /// Accumulates parameter gradients and returns the input gradient.
    fn backward(&mut self, tape: &Tape, grad: &Tensor1D) -> Result<Tensor1D>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ShiftSide {
    /// Rate-preserving block; both filters use the sampled value.
    Both,
    /// Downsampling: the sampled value shifts the input.
    Input,
    /// Upsampling: the sampled value shifts the output.
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftAssignment {
    pub input_shift: f64,
    pub output_shift: f64,
    pub sampled_value: f64,
    pub side: ShiftSide,
}

impl ShiftAssignment {
    pub const ZERO: ShiftAssignment =
        ShiftAssignment { input_shift: 0.0, output_shift: 0.0, sampled_value: 0.0, side: ShiftSide::Both };

    pub fn is_zero(&self) -> bool {
        self.input_shift == 0.0 && self.output_shift == 0.0
    }
}

pub fn assign_shift(sampled_value: f64, r: Ratio) -> Result<ShiftAssignment> {
    if !sampled_value.is_finite() {
        return Err(Error::InvalidShift { shift: sampled_value, limit: f64::INFINITY });
    }
    let rate = r.as_f64();
    let a = if r.is_one() {
        ShiftAssignment {
            input_shift: sampled_value,
            output_shift: sampled_value,
            sampled_value,
            side: ShiftSide::Both,
        }
    } else if r.num() > r.den() {
        ShiftAssignment {
            input_shift: sampled_value / rate,
            output_shift: sampled_value,
            sampled_value,
            side: ShiftSide::Output,
        }
    } else {
        ShiftAssignment {
            input_shift: sampled_value,
            output_shift: sampled_value * rate,
            sampled_value,
            side: ShiftSide::Input,
        }
    };
    Ok(a)
}

/// Counters for how often the wrapped path ran.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WrapStats {
    pub wrapped_calls: u64,
    pub filters_applied: u64,
}

/// Tape of one wrapped block evaluation.
#[derive(Debug, Clone)]
pub struct WrapTape {
    pub assignment: ShiftAssignment,
    pub block: Tape,
    /// Block output before the output filter.
    pub pre_filter: Tensor1D,
}

fn input_kernel(a: &ShiftAssignment) -> Result<Option<SincKernel>> {
    (a.input_shift != 0.0).then(|| sinc::kernel(-a.input_shift)).transpose()
}

fn output_kernel(a: &ShiftAssignment) -> Result<Option<SincKernel>> {
    (a.output_shift != 0.0).then(|| sinc::kernel(a.output_shift)).transpose()
}

fn filtered(x: &Tensor1D, k: &SincKernel) -> Tensor1D {
    Tensor1D { data: sinc::correlate_rows(&x.data, x.len, k), ..x.clone_shape() }
}

fn filtered_adjoint(g: &Tensor1D, k: &SincKernel) -> Tensor1D {
    Tensor1D { data: sinc::correlate_rows_adjoint(&g.data, g.len, k), ..g.clone_shape() }
}

impl Tensor1D {
    fn clone_shape(&self) -> Tensor1D {
        Tensor1D { batch: self.batch, channels: self.channels, len: self.len, data: Vec::new() }
    }
}

/// Wrapped forward pass on a batch; returns the post-filter output.
pub fn wrap_forward<B: Block + ?Sized>(
    block: &B,
    a: &ShiftAssignment,
    x: &Tensor1D,
    stats: &mut WrapStats,
) -> Result<(Tensor1D, WrapTape)> {
    stats.wrapped_calls += 1;
    let kin = input_kernel(a)?;
    let kout = output_kernel(a)?;
    let mut tape = Tape::new();
    let y = match &kin {
        Some(k) => {
            stats.filters_applied += 1;
            block.forward(&filtered(x, k), &mut tape)?
        }
        None => block.forward(x, &mut tape)?,
    };
    let out = match &kout {
        Some(k) => {
            stats.filters_applied += 1;
            filtered(&y, k)
        }
        None => y.clone(),
    };
    Ok((out, WrapTape { assignment: *a, block: tape, pre_filter: y }))
}

/// Backward through a wrapped block. `grad_pre` is an extra gradient on the
/// pre-filter output (used when features are tapped before the output filter).
pub fn wrap_backward<B: Block + ?Sized>(
    block: &mut B,
    tape: &WrapTape,
    grad_out: &Tensor1D,
    grad_pre: Option<&Tensor1D>,
) -> Result<Tensor1D> {
    let a = &tape.assignment;
    let mut g = match output_kernel(a)? {
        Some(k) => filtered_adjoint(grad_out, &k),
        None => grad_out.clone(),
    };
    if let Some(extra) = grad_pre {
        g.add_assign(extra);
    }
    let gx = block.backward(&tape.block, &g)?;
    Ok(match input_kernel(a)? {
        Some(k) => filtered_adjoint(&gx, &k),
        None => gx,
    })
}

/// Wraps one block on a single signal; the output rate follows the block ratio.
pub fn wrap_block<B: Block + ?Sized>(block: &B, a: &ShiftAssignment, x: &Signal) -> Result<Signal> {
    check_support(a)?;
    let (y, _) = wrap_forward(block, a, &Tensor1D::from_signal(x), &mut WrapStats::default())?;
    Ok(y.to_signal(0, x.sample_rate() * block.resample_ratio().as_f64()))
}

fn check_support(a: &ShiftAssignment) -> Result<()> {
    let limit = DEFAULT_HALF_WIDTH as f64;
    for s in [a.input_shift, a.output_shift] {
        if s.is_nan() || s.abs() > limit {
            return Err(Error::InvalidShift { shift: s, limit });
        }
    }
    Ok(())
}

fn check_schedule(n_blocks: usize, schedule: &DeltaSchedule) -> Result<()> {
    if schedule.len() != n_blocks {
        return Err(Error::ScheduleLength { expected: n_blocks, got: schedule.len() });
    }
    Ok(())
}

/// Result of running a block stack, with everything backward needs.
#[derive(Debug, Clone)]
pub struct StackPass {
    pub output: Tensor1D,
    /// Post-wrap activation of every block.
    pub block_outputs: Vec<Tensor1D>,
    pub tapes: Vec<WrapTape>,
    pub assignments: Vec<ShiftAssignment>,
}

/// Runs `blocks` in order; with `schedule = None` the plain composition runs
/// and no wrapper code is entered.
pub fn forward_stack<B: Block>(
    blocks: &[B],
    schedule: Option<&DeltaSchedule>,
    x: &Tensor1D,
    stats: &mut WrapStats,
) -> Result<StackPass> {
    if let Some(s) = schedule {
        check_schedule(blocks.len(), s)?;
    }
    let mut h = x.clone();
    let mut block_outputs = Vec::with_capacity(blocks.len());
    let mut tapes = Vec::with_capacity(blocks.len());
    let mut assignments = Vec::with_capacity(blocks.len());
    for (i, block) in blocks.iter().enumerate() {
        let (y, tape) = match schedule {
            Some(s) => {
                let a = assign_shift(s.per_block[i].value, block.resample_ratio())?;
                assignments.push(a);
                wrap_forward(block, &a, &h, stats)?
            }
            None => {
                let mut t = Tape::new();
                let y = block.forward(&h, &mut t)?;
                assignments.push(ShiftAssignment::ZERO);
                (y.clone(), WrapTape { assignment: ShiftAssignment::ZERO, block: t, pre_filter: y })
            }
        };
        block_outputs.push(y.clone());
        tapes.push(tape);
        h = y;
    }
    Ok(StackPass { output: h, block_outputs, tapes, assignments })
}

/// Backward through a stack. `feature_grads[i]` (if any) is added to block
/// `i`'s output gradient, either after (`pre_filter = false`) or before the
/// output filter.
pub fn backward_stack<B: Block>(
    blocks: &mut [B],
    pass: &StackPass,
    grad_out: &Tensor1D,
    feature_grads: Option<&[Tensor1D]>,
    pre_filter: bool,
) -> Result<Tensor1D> {
    if pass.tapes.len() != blocks.len() {
        return Err(Error::ShapeMismatch(format!("{} tapes for {} blocks", pass.tapes.len(), blocks.len())));
    }
    let mut g = grad_out.clone();
    for i in (0..blocks.len()).rev() {
        let fg = feature_grads.map(|f| &f[i]);
        let (post, pre) = if pre_filter { (None, fg) } else { (fg, None) };
        if let Some(p) = post {
            g.add_assign(p);
        }
        g = wrap_backward(&mut blocks[i], &pass.tapes[i], &g, pre)?;
    }
    Ok(g)
}

/// Generator procedure: each block wrapped with its own schedule entry.
pub fn generator_forward_jengan<B: Block>(blocks: &[B], schedule: &DeltaSchedule, x: &Tensor1D) -> Result<Tensor1D> {
    check_schedule(blocks.len(), schedule)?;
    Ok(forward_stack(blocks, Some(schedule), x, &mut WrapStats::default())?.output)
}

/// Per-block features of a real/fake pair under the discriminator procedure.
#[derive(Debug, Clone)]
pub struct PairFeatures {
    pub real: StackPass,
    pub fake: StackPass,
    pub real_deltas: Vec<f64>,
    pub fake_deltas: Vec<f64>,
}

/// Discriminator procedure: both signals go through the same wrapped blocks.
/// With `fake_schedule = None` the real schedule is reused for the fake
/// signal, so paired features are extracted under identical shifts.
pub fn discriminator_pair_forward<B: Block>(
    blocks: &[B],
    schedule: &DeltaSchedule,
    fake_schedule: Option<&DeltaSchedule>,
    real: &Tensor1D,
    fake: &Tensor1D,
    stats: &mut WrapStats,
) -> Result<PairFeatures> {
    if !real.same_shape(fake) {
        return Err(Error::ShapeMismatch(format!("real {:?} vs fake {:?}", real.shape(), fake.shape())));
    }
    check_schedule(blocks.len(), schedule)?;
    let fake_schedule = fake_schedule.unwrap_or(schedule);
    check_schedule(blocks.len(), fake_schedule)?;
    let real_pass = forward_stack(blocks, Some(schedule), real, stats)?;
    let fake_pass = forward_stack(blocks, Some(fake_schedule), fake, stats)?;
    Ok(PairFeatures {
        real: real_pass,
        fake: fake_pass,
        real_deltas: schedule.values(),
        fake_deltas: fake_schedule.values(),
    })
}
