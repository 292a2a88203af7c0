//! Optimal clock skew compensation with integer-only arithmetic.
//!
//! Given a hardware clock reading `i` and an estimated inverse frequency
//! ratio `D/A`, the skew-compensated clock is the non-negative integer
//! nearest to `i·D/A`. Computing it as `⌊fp(i·D/A) + 0.5⌋` on a platform
//! with single-precision floats drifts by tens of ticks for large `i`;
//! [`direct_search`] starts from that float guess and corrects it exactly
//! using only integer addition, subtraction and comparison.
//!
//! * [`clock`] holds the domain types, the exact oracle and the logical clock.
//! * [`float_env`] models binary32/binary64 evaluation of `fp(i·D/A)`.
//! * [`bresenham`] is the bracket-and-step baseline.
//! * [`bench`] generates samples, aggregates statistics and fuzzes.

pub mod bench;
pub mod bresenham;
pub mod clock;
pub mod direct_search;
mod error;
pub mod float_env;

pub use clock::{advance_logical_clock, exact_compensate, ArgminResult, RatioDA, SyncEpoch, Tick};
pub use direct_search::{compensate, compensate_from, CompensationOutcome, SearchState, TerminalCase};
pub use error::{Error, Result};
pub use float_env::{BinaryFloat, EvalOrder, FloatEnv, FloatValue, Precision, TypedEnv};

/// Single-precision platform environment.
pub type Binary32Env = TypedEnv<f32>;
/// Double-precision platform environment.
pub type Binary64Env = TypedEnv<f64>;
