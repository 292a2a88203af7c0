//! Counter-based SplitMix64.
//!
//! Draw `n` for a seed is the `(n + 1)`-th output of SplitMix64 (Steele,
//! Lea & Flood) started from that seed: `mix64(seed + (n + 1)·γ)` with
//! `γ = 0x9E3779B97F4A7C15`. Any draw can be computed without the ones before
//! it, so samples generated in parallel match the sequential stream.

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draw number `index` of the stream for `seed`.
pub fn counter_draw(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential SplitMix64.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for item `index` under `seed`.
    pub fn for_item(seed: u64, index: u64) -> Self {
        SplitMix64::new(counter_draw(seed, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, bound]`, inclusive. Multiply-shift reduction; the bias
    /// is below `bound / 2^64`.
    pub fn up_to(&mut self, bound: u64) -> u64 {
        match bound.checked_add(1) {
            Some(span) => ((u128::from(self.next_u64()) * u128::from(span)) >> 64) as u64,
            None => self.next_u64(),
        }
    }

    pub fn in_range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.up_to(hi - lo)
    }
}
