//! Benchmark protocol: sample ratios for uniformly distributed skew, run each
//! algorithm against the binary64 half-up reference, and aggregate exact
//! error and iteration statistics.

pub mod fuzz;
pub mod reference;
pub mod rng;
mod stats;
mod table;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bresenham::{bresenham_compensate, BoundsRule};
use crate::clock::{RatioDA, Tick};
use crate::direct_search::compensate;
use crate::error::{Error, Result};
use crate::float_env::{fp_nearest_tick, FloatEnv, Precision};

pub use stats::{IterStats, StatsAccumulator, StatsRow};
pub use table::{emit_table, format_mean, OutputFormat, CSV_HEADER};

/// Scale of the fixed-epsilon bracket half-width: `eps = 1e-7 · i`.
pub const EPSILON_PER_TICK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Algorithm {
    /// Round half up of the binary32 result, no correction.
    SingleFp,
    /// Line stepping across the precision-loss bracket.
    BresenhamTheoretical,
    /// Line stepping across `[t − 1e-7·i, t + 1e-7·i]`.
    BresenhamEps,
    DirectSearch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::SingleFp, Algorithm::BresenhamTheoretical, Algorithm::BresenhamEps, Algorithm::DirectSearch];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::SingleFp => "SINGLE_FP",
            Algorithm::BresenhamTheoretical => "BRESENHAM_THEORETICAL",
            Algorithm::BresenhamEps => "BRESENHAM_EPS",
            Algorithm::DirectSearch => "DIRECT_SEARCH",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::SingleFp => "Single precision",
            Algorithm::BresenhamTheoretical => "Bresenham, theoretical bounds",
            Algorithm::BresenhamEps => "Bresenham, 1e-7*i bounds",
            Algorithm::DirectSearch => "Direct search",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "fp32" | "single-fp" => Ok(Algorithm::SingleFp),
            "bres-theory" | "bresenham-theoretical" => Ok(Algorithm::BresenhamTheoretical),
            "bres-eps" | "bresenham-eps" => Ok(Algorithm::BresenhamEps),
            "ds" | "direct-search" => Ok(Algorithm::DirectSearch),
            _ => Err(format!("unknown algorithm '{s}' (expected fp32, bres-theory, bres-eps, ds)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub d: u32,
    pub ppm: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub i_values: Vec<Tick>,
    pub algorithms: Vec<Algorithm>,
    /// Platform environment for direct-search initialization and the
    /// baseline's `fp` value.
    pub init_env: FloatEnv,
    pub output_format: OutputFormat,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            d: 1_000_000,
            ppm: 100.0,
            n_samples: 1_000_000,
            seed: 42,
            i_values: [1_000_000u64, 10_000_000, 100_000_000, 1_000_000_000].map(Tick::new).to_vec(),
            algorithms: Algorithm::ALL.to_vec(),
            init_env: FloatEnv::binary32(),
            output_format: OutputFormat::Markdown,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let skew = self.ppm * 1e-6;
        if !(self.ppm >= 0.0 && skew < 1.0) {
            return Err(Error::InvalidFloat(self.ppm));
        }
        let max_a = (f64::from(self.d) * (1.0 + skew)).ceil();
        if self.d == 0 || max_a > f64::from(RatioDA::MAX_COMPONENT) {
            return Err(Error::InvalidRatio { d: u64::from(self.d), a: max_a as u64 });
        }
        Ok(())
    }
}

/// The reference tick: round half up of the binary64 `fl(fl(i·D)/A)`.
pub fn reference_tick(i: Tick, r: RatioDA) -> Tick {
    fp_nearest_tick(i, r, &FloatEnv::binary64())
}

/// Sample `s` draws `ε` uniform on `[−ppm, +ppm]·1e-6` from counter draw `s`
/// and sets `A` to `d·(1 + ε)` rounded to nearest, ties to even.
pub fn generate_samples(cfg: &BenchConfig) -> Result<Vec<RatioDA>> {
    cfg.validate()?;
    let d = f64::from(cfg.d);
    let half_width = cfg.ppm * 1e-6;
    (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|s| {
            let u = rng::unit_interval(rng::counter_draw(cfg.seed, s));
            let skew = (2.0 * u - 1.0) * half_width;
            let a = (d * (1.0 + skew)).round_ties_even();
            RatioDA::new(u64::from(cfg.d), a as u64)
        })
        .collect()
}

/// Compensated tick and, where the algorithm iterates, its iteration count.
pub fn run_one(alg: Algorithm, i: Tick, r: RatioDA, init_env: &FloatEnv) -> Result<(Tick, Option<u64>)> {
    Ok(match alg {
        Algorithm::SingleFp => {
            let env = FloatEnv::new(Precision::Binary32, init_env.order);
            (fp_nearest_tick(i, r, &env), None)
        }
        Algorithm::BresenhamTheoretical => {
            let out = bresenham_compensate(i, r, init_env, &BoundsRule::Theoretical)?;
            (out.j, Some(out.iterations))
        }
        Algorithm::BresenhamEps => {
            let eps = EPSILON_PER_TICK * i.get() as f64;
            let out = bresenham_compensate(i, r, init_env, &BoundsRule::FixedEpsilon(eps))?;
            (out.j, Some(out.iterations))
        }
        Algorithm::DirectSearch => {
            let out = compensate(i, r, init_env);
            (out.j, Some(out.iterations))
        }
    })
}

/// Signed error `reference − j`.
pub fn compensation_error(reference: Tick, j: Tick) -> i64 {
    (i128::from(reference.get()) - i128::from(j.get())) as i64
}

/// Statistics of one algorithm at one `i` over all samples.
pub fn run_row(i: Tick, alg: Algorithm, samples: &[RatioDA], cfg: &BenchConfig) -> Result<StatsRow> {
    let acc = samples
        .par_iter()
        .try_fold(StatsAccumulator::default, |mut acc, &r| {
            let (j, iterations) = run_one(alg, i, r, &cfg.init_env)?;
            acc.push(compensation_error(reference_tick(i, r), j), iterations);
            Ok::<_, Error>(acc)
        })
        .try_reduce(StatsAccumulator::default, |a, b| Ok(a.merge(b)))?;
    acc.finish(alg, i).ok_or(Error::EmptySamples)
}

/// All rows of the configured table, ordered by algorithm then `i`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<StatsRow>> {
    let samples = generate_samples(cfg)?;
    let mut rows = Vec::with_capacity(cfg.algorithms.len() * cfg.i_values.len());
    for &alg in &cfg.algorithms {
        for &i in &cfg.i_values {
            rows.push(run_row(i, alg, &samples, cfg)?);
        }
    }
    Ok(rows)
}

/// [`run_bench`] on a dedicated pool of `threads` workers.
pub fn run_bench_with_threads(cfg: &BenchConfig, threads: usize) -> Result<Vec<StatsRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction");
    pool.install(|| run_bench(cfg))
}
