use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid shift {shift}: magnitude must not exceed {limit}")]
    InvalidShift { shift: f64, limit: f64 },
    #[error("invalid resampling ratio {num}/{den}")]
    InvalidRatio { num: u32, den: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("schedule has {got} entries but the model has {expected} blocks")]
    ScheduleLength { expected: usize, got: usize },
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("signal of length {len} is shorter than the required {required}")]
    TooShort { len: usize, required: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("edge margin {margin} is smaller than the required {required} samples")]
    MarginTooSmall { margin: usize, required: usize },
    #[error("training diverged at step {step}: {what} is not finite")]
    Diverged { step: u64, what: &'static str },
}
