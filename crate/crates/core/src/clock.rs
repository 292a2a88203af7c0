//! Clock domain types, the exact nearest-tick oracle and the logical clock.
//!
//! A hardware clock runs at `(1 + ε)` times the reference rate. The inverse
//! ratio `1 / (1 + ε̂)` is carried as an integer pair `D / A`, and the
//! skew-compensated clock of a hardware reading `i` is the non-negative
//! integer nearest to `i·D/A`. Everything here is exact integer arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-negative clock counter value, in units of one clock resolution step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tick(u64);

impl Tick {
    pub const ZERO: Tick = Tick(0);

    pub const fn new(value: u64) -> Self {
        Tick(value)
    }

    pub const fn get(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, rhs: Tick) -> Option<Tick> {
        self.0.checked_add(rhs.0).map(Tick)
    }

    pub fn checked_sub(self, rhs: Tick) -> Option<Tick> {
        self.0.checked_sub(rhs.0).map(Tick)
    }

    pub(crate) fn wide(self) -> i128 {
        i128::from(self.0)
    }
}

impl From<u64> for Tick {
    fn from(v: u64) -> Self {
        Tick(v)
    }
}

impl From<u32> for Tick {
    fn from(v: u32) -> Self {
        Tick(u64::from(v))
    }
}

impl From<Tick> for u64 {
    fn from(t: Tick) -> u64 {
        t.0
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Estimated inverse clock-frequency ratio `D / A = 1 / (1 + ε̂)`.
///
/// Both components are positive 31-bit integers, so `i·D` for any 64-bit
/// tick fits comfortably in `i128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatioDA {
    d: u32,
    a: u32,
}

impl RatioDA {
    pub const MAX_COMPONENT: u32 = (1 << 31) - 1;

    pub fn new(d: u64, a: u64) -> Result<Self> {
        let ok = |v: u64| (1..=u64::from(Self::MAX_COMPONENT)).contains(&v);
        if ok(d) && ok(a) {
            Ok(RatioDA { d: d as u32, a: a as u32 })
        } else {
            Err(Error::InvalidRatio { d, a })
        }
    }

    /// The identity ratio `D = A`.
    pub fn unity(a: u32) -> Result<Self> {
        Self::new(u64::from(a), u64::from(a))
    }

    pub fn d(self) -> u32 {
        self.d
    }

    pub fn a(self) -> u32 {
        self.a
    }

    /// Estimated skew `ε̂` implied by `D / A = 1 / (1 + ε̂)`.
    pub fn estimated_skew(self) -> f64 {
        f64::from(self.a) / f64::from(self.d) - 1.0
    }

    /// Residual `k·A − i·D` in widened integers.
    pub fn residual(self, i: Tick, k: Tick) -> i128 {
        k.wide() * i128::from(self.a) - i.wide() * i128::from(self.d)
    }
}

impl fmt::Display for RatioDA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.d, self.a)
    }
}

/// The set of ticks minimizing `|k − i·D/A|`: one value, or two on an exact
/// half-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgminResult {
    pub lower: Tick,
    pub upper: Tick,
    pub tie: bool,
    /// `upper` on ties (round half up), otherwise the unique minimizer.
    pub canonical: Tick,
}

impl ArgminResult {
    pub fn contains(&self, k: Tick) -> bool {
        k == self.lower || k == self.upper
    }
}

/// Exact nearest-tick oracle, or `None` if the result does not fit a tick.
pub fn checked_exact_compensate(i: Tick, r: RatioDA) -> Option<ArgminResult> {
    let prod = u128::from(i.get()) * u128::from(r.d());
    let a = u128::from(r.a());
    let q = u64::try_from(prod / a).ok()?;
    let twice_rem = 2 * (prod % a);
    let (lower, upper) = match twice_rem.cmp(&a) {
        std::cmp::Ordering::Less => (q, q),
        std::cmp::Ordering::Equal => (q, q.checked_add(1)?),
        std::cmp::Ordering::Greater => {
            let up = q.checked_add(1)?;
            (up, up)
        }
    };
    Some(ArgminResult {
        lower: Tick(lower),
        upper: Tick(upper),
        tie: lower != upper,
        canonical: Tick(upper),
    })
}

/// Exact skew-compensated clock of `i` under ratio `r`.
///
/// Panics if `i·D/A + 1` exceeds `u64::MAX`, which needs `D/A` far from one.
pub fn exact_compensate(i: Tick, r: RatioDA) -> ArgminResult {
    checked_exact_compensate(i, r).expect("compensated tick exceeds u64 range")
}

/// Synchronization point of the logical clock: hardware and logical readings
/// at the sync instant plus the ratio estimated for the following interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncEpoch {
    pub hw_at_sync: Tick,
    pub logical_at_sync: Tick,
    pub ratio: RatioDA,
}

impl SyncEpoch {
    pub fn new(hw_at_sync: Tick, logical_at_sync: Tick, ratio: RatioDA) -> Self {
        SyncEpoch { hw_at_sync, logical_at_sync, ratio }
    }
}

/// Logical clock reading at hardware time `hw_now`: the logical value at the
/// last sync plus the compensated hardware increment since then.
pub fn advance_logical_clock<C>(epoch: &SyncEpoch, hw_now: Tick, compensator: C) -> Result<Tick>
where
    C: Fn(Tick, RatioDA) -> Tick,
{
    let increment = hw_now.checked_sub(epoch.hw_at_sync).ok_or(Error::NonMonotoneClock {
        now: hw_now.get(),
        sync: epoch.hw_at_sync.get(),
    })?;
    epoch
        .logical_at_sync
        .checked_add(compensator(increment, epoch.ratio))
        .ok_or(Error::Overflow)
}
