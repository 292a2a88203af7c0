//! Platform floating-point model for `fp(i·D/A)` and round-half-up.
//!
//! Every operation is a single IEEE 754 round-to-nearest-even step in the
//! chosen binary format. Rust's `f32`/`f64` arithmetic and integer casts
//! already have exactly these semantics (no FMA contraction, no extended
//! intermediates), so the generic path is written over [`BinaryFloat`] and
//! instantiated for both formats.

use std::fmt;
use std::marker::PhantomData;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::clock::{RatioDA, Tick};
use crate::error::{Error, Result};

/// An IEEE 754 binary format usable as the platform float.
pub trait BinaryFloat: Float + FromPrimitive + ToPrimitive + fmt::Debug + Send + Sync + 'static {
    /// Significand precision in bits, hidden bit included.
    const PRECISION: u32;
    const FORMAT: Precision;

    /// One correct rounding of an unsigned integer into the format.
    fn from_u64_rounded(v: u64) -> Self {
        Self::from_u64(v).expect("integer to float conversion is total")
    }

    /// Exact widening to binary64.
    fn widen(self) -> f64 {
        self.to_f64().expect("finite float widens")
    }

    fn half() -> Self {
        Self::from_f64(0.5).expect("0.5 is representable")
    }
}

impl BinaryFloat for f32 {
    const PRECISION: u32 = 24;
    const FORMAT: Precision = Precision::Binary32;
}

impl BinaryFloat for f64 {
    const PRECISION: u32 = 53;
    const FORMAT: Precision = Precision::Binary64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Binary32,
    Binary64,
}

impl Precision {
    pub fn from_bits(p: u32) -> Result<Self> {
        match p {
            24 => Ok(Precision::Binary32),
            53 => Ok(Precision::Binary64),
            other => Err(Error::UnsupportedPrecision(other)),
        }
    }

    /// Precision `p` in bits.
    pub fn bits(self) -> u32 {
        match self {
            Precision::Binary32 => f32::PRECISION,
            Precision::Binary64 => f64::PRECISION,
        }
    }

    /// Storage width of the format (32 or 64).
    pub fn storage_bits(self) -> u32 {
        match self {
            Precision::Binary32 => 32,
            Precision::Binary64 => 64,
        }
    }

    /// Unit roundoff `u = 2^-p`, exact in binary64.
    pub fn unit_roundoff(self) -> f64 {
        (-(self.bits() as i32) as f64).exp2()
    }
}

/// Order of the two arithmetic operations in `fp(i·D/A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalOrder {
    /// `fl(fl(i·D) / A)`
    #[default]
    MulThenDiv,
    /// `fl(i · fl(D / A))`
    DivThenMul,
}

/// Runtime-selected evaluation environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloatEnv {
    pub precision: Precision,
    pub order: EvalOrder,
}

impl FloatEnv {
    pub const fn new(precision: Precision, order: EvalOrder) -> Self {
        FloatEnv { precision, order }
    }

    pub const fn binary32() -> Self {
        Self::new(Precision::Binary32, EvalOrder::MulThenDiv)
    }

    pub const fn binary64() -> Self {
        Self::new(Precision::Binary64, EvalOrder::MulThenDiv)
    }

    pub const fn with_order(self, order: EvalOrder) -> Self {
        Self::new(self.precision, order)
    }

    pub fn precision_p(&self) -> u32 {
        self.precision.bits()
    }

    pub fn unit_roundoff(&self) -> f64 {
        self.precision.unit_roundoff()
    }
}

impl Default for FloatEnv {
    fn default() -> Self {
        Self::binary32()
    }
}

impl<F: BinaryFloat> From<TypedEnv<F>> for FloatEnv {
    fn from(env: TypedEnv<F>) -> Self {
        FloatEnv::new(F::FORMAT, env.order)
    }
}

/// Statically typed environment; see the `Binary32Env`/`Binary64Env` aliases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TypedEnv<F> {
    pub order: EvalOrder,
    _format: PhantomData<F>,
}

impl<F: BinaryFloat> TypedEnv<F> {
    pub const fn new(order: EvalOrder) -> Self {
        TypedEnv { order, _format: PhantomData }
    }

    pub fn ratio_scaled(&self, i: Tick, r: RatioDA) -> F {
        ratio_scaled_in::<F>(i, r, self.order)
    }

    pub fn round_half_up(&self, x: F) -> Tick {
        round_half_up_in(x)
    }
}

/// A float result held exactly in binary64 and tagged with its source format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloatValue {
    value: f64,
    precision: Precision,
}

impl FloatValue {
    /// Rejects negative, non-finite, and non-representable values.
    pub fn new(value: f64, precision: Precision) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidFloat(value));
        }
        if precision == Precision::Binary32 && f64::from(value as f32) != value {
            return Err(Error::NotRepresentable { value, bits: 32 });
        }
        Ok(FloatValue { value, precision })
    }

    pub fn from_native<F: BinaryFloat>(x: F) -> Result<Self> {
        Self::new(x.widen(), F::FORMAT)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    fn native<F: BinaryFloat>(&self) -> F {
        // Rounds if the value came from a wider format.
        F::from_f64(self.value).expect("finite value")
    }
}

/// `fp(i·D/A)` in format `F`; inputs are each rounded into `F` once.
pub fn ratio_scaled_in<F: BinaryFloat>(i: Tick, r: RatioDA, order: EvalOrder) -> F {
    let i = F::from_u64_rounded(i.get());
    let d = F::from_u64_rounded(u64::from(r.d()));
    let a = F::from_u64_rounded(u64::from(r.a()));
    match order {
        EvalOrder::MulThenDiv => (i * d) / a,
        EvalOrder::DivThenMul => i * (d / a),
    }
}

/// `⌊fl(x + 0.5)⌋` with the addition rounded in `F`.
pub fn round_half_up_in<F: BinaryFloat>(x: F) -> Tick {
    let y = (x + F::half()).floor();
    Tick::new(y.to_u64().expect("non-negative in-range float"))
}

pub fn fp_ratio_scaled(i: Tick, r: RatioDA, env: &FloatEnv) -> FloatValue {
    let value = match env.precision {
        Precision::Binary32 => f64::from(ratio_scaled_in::<f32>(i, r, env.order)),
        Precision::Binary64 => ratio_scaled_in::<f64>(i, r, env.order),
    };
    FloatValue { value, precision: env.precision }
}

pub fn round_half_up(x: FloatValue, env: &FloatEnv) -> Tick {
    match env.precision {
        Precision::Binary32 => round_half_up_in(x.native::<f32>()),
        Precision::Binary64 => round_half_up_in(x.native::<f64>()),
    }
}

/// `round_half_up(fp(i·D/A))`, the platform's nearest-tick guess.
pub fn fp_nearest_tick(i: Tick, r: RatioDA, env: &FloatEnv) -> Tick {
    match env.precision {
        Precision::Binary32 => round_half_up_in(ratio_scaled_in::<f32>(i, r, env.order)),
        Precision::Binary64 => round_half_up_in(ratio_scaled_in::<f64>(i, r, env.order)),
    }
}
