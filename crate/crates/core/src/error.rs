use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ratio components must lie in 1..=2^31-1, got D={d}, A={a}")]
    InvalidRatio { d: u64, a: u64 },
    #[error("hardware clock went backwards: now {now} < sync point {sync}")]
    NonMonotoneClock { now: u64, sync: u64 },
    #[error("tick arithmetic overflowed")]
    Overflow,
    #[error("line stepping needs D < 2A, got D={d}, A={a}")]
    RatioTooSteep { d: u32, a: u32 },
    #[error("value must be finite and non-negative, got {0}")]
    InvalidFloat(f64),
    #[error("value {value} is not representable in binary{bits}")]
    NotRepresentable { value: f64, bits: u32 },
    #[error("no samples to aggregate")]
    EmptySamples,
    #[error("unsupported precision {0} (expected 24 or 53)")]
    UnsupportedPrecision(u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
