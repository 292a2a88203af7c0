//! Extended-Bresenham baseline: bracket `j` with candidate bounds, then step
//! an integer line across the bracket.
//!
//! For a slope `num/den < 1` the walk starts at column `i − l` on row `k`,
//! where `[k, k + l]` is the candidate bracket, and advances one column at a
//! time, keeping the exact error `E = y·den − x·num`. Ratios above one are
//! split as `i·D/A = i + i·(D − A)/A` and only the fractional slope is
//! stepped. The per-column rule picks the nearer of `y` and `y + 1`,
//! preferring `y` on an exact tie.

use serde::{Deserialize, Serialize};

use crate::clock::{RatioDA, Tick};
use crate::error::{Error, Result};
use crate::float_env::{fp_ratio_scaled, BinaryFloat, FloatEnv, FloatValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateBounds {
    pub lower: Tick,
    pub upper: Tick,
}

impl CandidateBounds {
    /// Candidate count minus one, `l`.
    pub fn width(&self) -> u64 {
        self.upper.get() - self.lower.get()
    }

    /// Whether the exact value `num/den` lies in `[lower, upper]`.
    pub fn contains_ratio(&self, num: u128, den: u128) -> bool {
        u128::from(self.lower.get()) * den <= num && num <= u128::from(self.upper.get()) * den
    }
}

/// Source of the candidate bracket around the platform value `t`.
pub trait BoundsProvider {
    fn bounds(&self, t: FloatValue, env: &FloatEnv) -> Result<CandidateBounds>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundsRule {
    /// Precision-loss bounds for `p`-bit floats, `u = 2^-p`.
    Theoretical,
    /// `[⌊t − eps⌋, ⌈t + eps⌉]`.
    FixedEpsilon(f64),
}

impl BoundsProvider for BoundsRule {
    fn bounds(&self, t: FloatValue, env: &FloatEnv) -> Result<CandidateBounds> {
        match *self {
            BoundsRule::Theoretical => theoretical_bounds(t, env),
            BoundsRule::FixedEpsilon(eps) => {
                if !(eps >= 0.0 && eps.is_finite()) {
                    return Err(Error::InvalidFloat(eps));
                }
                let t = t.value();
                Ok(CandidateBounds {
                    lower: to_tick((t - eps).max(0.0).floor()),
                    upper: to_tick((t + eps).ceil()),
                })
            }
        }
    }
}

fn to_tick(v: f64) -> Tick {
    Tick::new(v as u64)
}

/// Coefficients `(lower, upper)` of the precision-loss bracket for unit
/// roundoff `u`, evaluated in binary64.
pub fn precision_loss_coefficients(u: f64) -> (f64, f64) {
    let lower = (1.0 - u + 2.0 * u * u) / ((1.0 + u) * (1.0 + u) * (1.0 + 2.0 * u));
    let upper = (1.0 + 2.0 * u).powi(3) * (1.0 + u - 2.0 * u * u) / ((1.0 + u) * (1.0 + u));
    (lower, upper)
}

/// Bracket for a value computed in format `F`.
pub fn theoretical_bounds_in<F: BinaryFloat>(t: F) -> Result<CandidateBounds> {
    let t = FloatValue::from_native(t)?;
    theoretical_bounds_for(t.value(), F::FORMAT.unit_roundoff())
}

pub fn theoretical_bounds(t: FloatValue, env: &FloatEnv) -> Result<CandidateBounds> {
    theoretical_bounds_for(t.value(), env.unit_roundoff())
}

fn theoretical_bounds_for(t: f64, u: f64) -> Result<CandidateBounds> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidFloat(t));
    }
    let (lo, hi) = precision_loss_coefficients(u);
    Ok(CandidateBounds { lower: to_tick((t * lo).floor()), upper: to_tick((t * hi).ceil()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineOutcome {
    pub j: Tick,
    /// Bracket width `l`, reported as 1 when the bracket is a single tick.
    pub iterations: u64,
    /// Bracket used on the stepped slope (the fractional part when `D > A`).
    pub bounds: CandidateBounds,
}

/// Baseline compensation of `i` under `r`; needs `D < 2A`.
pub fn bresenham_compensate<P: BoundsProvider + ?Sized>(
    i: Tick,
    r: RatioDA,
    env: &FloatEnv,
    provider: &P,
) -> Result<BaselineOutcome> {
    let (d, a) = (r.d(), r.a());
    if u64::from(d) >= 2 * u64::from(a) {
        return Err(Error::RatioTooSteep { d, a });
    }
    if d == a {
        return Ok(BaselineOutcome { j: i, iterations: 1, bounds: CandidateBounds { lower: i, upper: i } });
    }
    if d > a {
        let frac = RatioDA::new(u64::from(d - a), u64::from(a))?;
        let out = slope_compensate(i, frac, env, provider)?;
        let j = i.checked_add(out.j).ok_or(Error::Overflow)?;
        return Ok(BaselineOutcome { j, ..out });
    }
    slope_compensate(i, r, env, provider)
}

fn slope_compensate<P: BoundsProvider + ?Sized>(
    i: Tick,
    slope: RatioDA,
    env: &FloatEnv,
    provider: &P,
) -> Result<BaselineOutcome> {
    let t = fp_ratio_scaled(i, slope, env);
    let bounds = provider.bounds(t, env)?;
    let j = line_step(i, slope, bounds, &mut |_, _, _| {});
    Ok(BaselineOutcome { j, iterations: bounds.width().max(1), bounds })
}

/// Steps columns `i − l ..= i` from row `bounds.lower`; returns the row at `i`.
///
/// `observer` sees `(x, y, E)` at every column including the first.
pub(crate) fn line_step(
    i: Tick,
    slope: RatioDA,
    bounds: CandidateBounds,
    observer: &mut dyn FnMut(u64, u64, i128),
) -> Tick {
    let num = i128::from(slope.d());
    let den = i128::from(slope.a());
    let l = bounds.width();
    let (mut x, mut y) = match i.get().checked_sub(l) {
        Some(x0) => (x0, bounds.lower.get()),
        // Bracket wider than the clock itself: the origin is exact.
        None => (0, 0),
    };
    let mut err = i128::from(y) * den - i128::from(x) * num;
    observer(x, y, err);
    while x < i.get() {
        x += 1;
        err -= num;
        // Moving up lowers |E| iff 2E' + den < 0 with E' the stay-put error.
        if 2 * err + den < 0 {
            y += 1;
            err += den;
        }
        observer(x, y, err);
    }
    Tick::new(y)
}
