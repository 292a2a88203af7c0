//! Arbitrary-precision reference for step-wise IEEE rounding.
//!
//! Each operation of `fp(i·D/A)` is computed exactly as a big rational and
//! then rounded to `p` significand bits, ties to even. This path shares no
//! code with the native `f32`/`f64` evaluation in `float_env`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::float_env::EvalOrder;

/// A non-negative binary float `mantissa · 2^exponent` with `mantissa < 2^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    pub mantissa: u64,
    pub exponent: i64,
}

impl Dyadic {
    pub fn to_rational(self) -> BigRational {
        let m = BigInt::from(self.mantissa);
        if self.exponent >= 0 {
            BigRational::from_integer(m << self.exponent as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exponent) as usize)
        }
    }

    /// Exact conversion; every value produced here has at most 53 bits.
    pub fn to_f64(self) -> f64 {
        let scale = (self.exponent as f64).exp2();
        self.mantissa as f64 * scale
    }
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Rounds a non-negative rational to `p` bits, round-to-nearest-even.
pub fn round_to_precision(x: &BigRational, p: u32) -> Dyadic {
    assert!(!x.is_negative(), "reference handles non-negative values only");
    if x.is_zero() {
        return Dyadic { mantissa: 0, exponent: 0 };
    }
    // floor(log2 x), starting from the bit-length estimate.
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    while &pow2(e) > x {
        e -= 1;
    }
    while &pow2(e + 1) <= x {
        e += 1;
    }
    let mut exponent = e - i64::from(p) + 1;
    let scaled = x / pow2(exponent);
    let (floor, rem): (BigInt, BigInt) = scaled.numer().div_mod_floor(scaled.denom());
    let twice_rem: BigInt = rem * 2;
    let mut m = floor;
    let round_up = match twice_rem.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => m.is_odd(),
        std::cmp::Ordering::Less => false,
    };
    if round_up {
        m += 1;
    }
    if m == BigInt::one() << p as usize {
        m >>= 1;
        exponent += 1;
    }
    Dyadic { mantissa: m.to_u64().expect("mantissa fits p bits"), exponent }
}

fn round_int(v: u64, p: u32) -> BigRational {
    round_to_precision(&BigRational::from_integer(BigInt::from(v)), p).to_rational()
}

/// `fp(i·D/A)` with each input conversion and each operation rounded to `p` bits.
pub fn step_rounded_ratio_dyadic(i: u64, d: u64, a: u64, p: u32, order: EvalOrder) -> Dyadic {
    let (fi, fd, fa) = (round_int(i, p), round_int(d, p), round_int(a, p));
    match order {
        EvalOrder::MulThenDiv => {
            let prod = round_to_precision(&(fi * fd), p).to_rational();
            round_to_precision(&(prod / fa), p)
        }
        EvalOrder::DivThenMul => {
            let q = round_to_precision(&(fd / fa), p).to_rational();
            round_to_precision(&(fi * q), p)
        }
    }
}

pub fn step_rounded_ratio(i: u64, d: u64, a: u64, p: u32, order: EvalOrder) -> f64 {
    step_rounded_ratio_dyadic(i, d, a, p, order).to_f64()
}

/// `⌊round_p(x + 1/2)⌋` computed exactly.
pub fn step_rounded_half_up(x: Dyadic, p: u32) -> u64 {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let y = round_to_precision(&(x.to_rational() + half), p).to_rational();
    y.floor().to_integer().to_u64().expect("in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ties_go_to_even() {
        // 2^24 + 1 is a tie between 2^24 and 2^24 + 2 in binary32.
        let r = round_to_precision(&rat((1 << 24) + 1, 1), 24);
        assert_eq!(r.to_f64(), 16_777_216.0);
        let r = round_to_precision(&rat((1 << 24) + 3, 1), 24);
        assert_eq!(r.to_f64(), 16_777_220.0);
    }

    #[test]
    fn carry_into_next_binade() {
        let r = round_to_precision(&rat((1 << 25) - 1, 1), 24);
        assert_eq!(r, Dyadic { mantissa: 1 << 23, exponent: 2 });
    }

    #[test]
    fn fractions_round_like_hardware() {
        assert_eq!(round_to_precision(&rat(1, 10), 53).to_f64(), 0.1);
        assert_eq!(round_to_precision(&rat(1, 10), 24).to_f64(), f64::from(0.1f32));
        assert_eq!(round_to_precision(&rat(2, 3), 24).to_f64(), f64::from(2.0f32 / 3.0));
    }

    #[test]
    fn known_binary32_chain() {
        let v = step_rounded_ratio_dyadic(1_000_000_000, 1_000_000, 999_950, 24, EvalOrder::MulThenDiv);
        assert_eq!(v.to_f64(), 1_000_049_984.0);
        assert_eq!(step_rounded_half_up(v, 24), 1_000_049_984);
    }
}
