//! Differential fuzzer: direct search, the line-stepping baseline and the
//! float model against the exact oracle and the big-rational reference.

use serde::{Deserialize, Serialize};

use super::reference::step_rounded_ratio;
use super::rng::SplitMix64;
use crate::bresenham::{bresenham_compensate, theoretical_bounds, BaselineOutcome, BoundsRule};
use crate::clock::{checked_exact_compensate, ArgminResult, RatioDA, Tick};
use crate::direct_search::{search, search_observed, CompensationOutcome, SearchState};
use crate::error::{Error, Result};
use crate::float_env::{fp_nearest_tick, fp_ratio_scaled, EvalOrder, FloatEnv, Precision};

/// Starts spanning at most this many ticks are drawn over the whole range
/// `[0, 2·i·D/A + 10]`; wider ones within this distance of the answer.
pub const START_WINDOW: u64 = 1 << 10;
/// Largest clock for which the binary32 and fixed-epsilon baselines are
/// stepped (at most ≈80 columns).
pub const BINARY32_STEP_LIMIT: u64 = 1 << 27;

/// The search routine under test, so mutants can be injected. With an
/// observer it must report the state at every dispatch.
pub type SearchFn =
    dyn Fn(RatioDA, SearchState, Option<&mut dyn FnMut(&SearchState)>) -> CompensationOutcome + Sync;

/// [`SearchFn`] backed by the production search.
pub fn production_search(r: RatioDA, start: SearchState, observer: Option<&mut dyn FnMut(&SearchState)>) -> CompensationOutcome {
    match observer {
        Some(obs) => search_observed(r, start, obs),
        None => search(r, start),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: u64,
    pub i_max: u64,
    pub ratio_max: u32,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 100_000, seed: 7, i_max: 1 << 40, ratio_max: 1 << 21 }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ratio_max == 0 || self.ratio_max > RatioDA::MAX_COMPONENT {
            return Err(Error::InvalidRatio { d: u64::from(self.ratio_max), a: 1 });
        }
        // Keeps i·D/A and every search step inside u64.
        if u128::from(self.i_max) * u128::from(self.ratio_max) >= 1 << 62 {
            return Err(Error::Overflow);
        }
        Ok(())
    }
}

/// Everything computed for one trial, as far as it got.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub i: u64,
    pub d: u32,
    pub a: u32,
    pub order: Option<EvalOrder>,
    pub oracle: Option<ArgminResult>,
    pub direct_binary32: Option<CompensationOutcome>,
    pub direct_binary64: Option<CompensationOutcome>,
    pub k0: Option<u64>,
    pub direct_from_k0: Option<CompensationOutcome>,
    pub float_mismatch: Option<FloatMismatch>,
    pub bounds_binary32: Option<(u64, u64)>,
    pub baseline: Vec<BaselineOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloatMismatch {
    pub precision: Precision,
    pub order: EvalOrder,
    pub got: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub invariant: String,
    pub record: TrialRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FuzzReport {
    Pass { trials: u64 },
    Fail(Box<Counterexample>),
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        matches!(self, FuzzReport::Pass { .. })
    }
}

pub fn fuzz_oracle(cfg: &FuzzConfig) -> Result<FuzzReport> {
    fuzz_oracle_with(cfg, &production_search)
}

pub fn fuzz_oracle_with(cfg: &FuzzConfig, search: &SearchFn) -> Result<FuzzReport> {
    cfg.validate()?;
    for trial in 0..cfg.trials {
        let mut record = TrialRecord { trial, ..TrialRecord::default() };
        if let Err(invariant) = run_trial(cfg, trial, search, &mut record) {
            return Ok(FuzzReport::Fail(Box::new(Counterexample { invariant, record })));
        }
    }
    Ok(FuzzReport::Pass { trials: cfg.trials })
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_trial(cfg: &FuzzConfig, trial: u64, search: &SearchFn, rec: &mut TrialRecord) -> Check {
    let mut rng = SplitMix64::for_item(cfg.seed, trial);
    let i = Tick::new(rng.up_to(cfg.i_max));
    let d = rng.in_range(1, u64::from(cfg.ratio_max));
    let a = rng.in_range(1, u64::from(cfg.ratio_max));
    let order = if rng.next_u64() & 1 == 0 { EvalOrder::MulThenDiv } else { EvalOrder::DivThenMul };
    let r = RatioDA::new(d, a).map_err(|e| e.to_string())?;
    *rec = TrialRecord { trial, i: i.get(), d: r.d(), a: r.a(), order: Some(order), ..TrialRecord::default() };

    let oracle = checked_exact_compensate(i, r).ok_or("oracle overflow")?;
    rec.oracle = Some(oracle);

    for precision in [Precision::Binary32, Precision::Binary64] {
        let env = FloatEnv::new(precision, order);
        // Walks from a binary32 start can be ~1e5 steps at i ~ 2^40, so only
        // the result is checked here; per-step checks run on the k0 walk.
        let start = SearchState::at(i, r, fp_nearest_tick(i, r, &env));
        let out = search(r, start, None);
        ensure(out.iterations >= 1, || "zero iterations".into())?;
        match precision {
            Precision::Binary32 => rec.direct_binary32 = Some(out),
            Precision::Binary64 => rec.direct_binary64 = Some(out),
        }
        check_optimal(i, r, &oracle, out.j)?;
    }

    let span = u128::from(i.get()) * 2 * u128::from(r.d()) / u128::from(r.a()) + 10;
    let k0 = if span <= u128::from(START_WINDOW) {
        rng.up_to(span as u64)
    } else {
        let centre = oracle.canonical.get();
        rng.in_range(centre.saturating_sub(START_WINDOW), centre + START_WINDOW)
    };
    rec.k0 = Some(k0);
    let out = checked_search(search, i, r, SearchState::at(i, r, Tick::new(k0)))?;
    rec.direct_from_k0 = Some(out);
    check_optimal(i, r, &oracle, out.j)?;
    ensure(out.iterations <= k0.abs_diff(out.j.get()) + 1, || "iteration bound |k0 - j| + 1 exceeded".into())?;

    for precision in [Precision::Binary32, Precision::Binary64] {
        for ord in [EvalOrder::MulThenDiv, EvalOrder::DivThenMul] {
            let env = FloatEnv::new(precision, ord);
            let got = fp_ratio_scaled(i, r, &env).value();
            let reference = step_rounded_ratio(i.get(), d, a, precision.bits(), ord);
            if got.to_bits() != reference.to_bits() {
                rec.float_mismatch = Some(FloatMismatch { precision, order: ord, got, reference });
                return Err("float model differs from step-rounding reference".into());
            }
        }
    }

    let env32 = FloatEnv::new(Precision::Binary32, order);
    let b = theoretical_bounds(fp_ratio_scaled(i, r, &env32), &env32).map_err(|e| e.to_string())?;
    rec.bounds_binary32 = Some((b.lower.get(), b.upper.get()));
    ensure(b.contains_ratio(u128::from(i.get()) * u128::from(d), u128::from(a)), || {
        "precision-loss bracket misses the exact value".into()
    })?;

    if d < 2 * a {
        let eps = BoundsRule::FixedEpsilon(1e-7 * i.get() as f64);
        let env64 = FloatEnv::new(Precision::Binary64, order);
        let mut runs = vec![(env64, BoundsRule::Theoretical)];
        // Both of these brackets grow linearly in i.
        if i.get() <= BINARY32_STEP_LIMIT {
            runs.push((env32, BoundsRule::Theoretical));
            runs.push((env64, eps));
        }
        let floor = (u128::from(i.get()) * u128::from(d) / u128::from(a)) as u64;
        for (env, rule) in runs {
            let out = bresenham_compensate(i, r, &env, &rule).map_err(|e| e.to_string())?;
            rec.baseline.push(out);
            ensure(out.j.get() == floor || (out.j.get() == floor + 1 && !exact_integer(i, r)), || {
                "baseline result outside floor/ceil".into()
            })?;
            ensure(out.iterations == out.bounds.width().max(1), || "baseline iterations differ from bracket width".into())?;
        }
    }
    Ok(())
}

fn exact_integer(i: Tick, r: RatioDA) -> bool {
    (u128::from(i.get()) * u128::from(r.d())) % u128::from(r.a()) == 0
}

/// Runs `search`, checking residual consistency and per-step progress.
fn checked_search(search: &SearchFn, i: Tick, r: RatioDA, start: SearchState) -> std::result::Result<CompensationOutcome, String> {
    let mut prev: Option<SearchState> = None;
    let mut dispatches = 0u64;
    let mut violation: Option<String> = None;
    let out = search(r, start, Some(&mut |s: &SearchState| {
        dispatches += 1;
        if violation.is_some() {
            return;
        }
        if s.delta != r.residual(i, s.k) {
            violation = Some(format!("state inconsistent at k={}: delta={}", s.k, s.delta));
        } else if let Some(p) = prev {
            if p.delta.abs() - s.delta.abs() != i128::from(r.a()) {
                violation = Some(format!("|delta| went {} -> {} across a re-dispatch", p.delta.abs(), s.delta.abs()));
            }
        }
        prev = Some(*s);
    }));
    if let Some(v) = violation {
        return Err(v);
    }
    ensure(dispatches == out.iterations && out.iterations >= 1, || "iteration count differs from dispatches".into())?;
    Ok(out)
}

fn check_optimal(i: Tick, r: RatioDA, oracle: &ArgminResult, j: Tick) -> Check {
    let cost = r.residual(i, j).abs();
    ensure(2 * cost <= i128::from(r.a()), || format!("|jA - iD| = {cost} exceeds A/2"))?;
    for k in j.get().saturating_sub(3)..=j.get() + 3 {
        ensure(cost <= r.residual(i, Tick::new(k)).abs(), || format!("k={k} beats j={j}"))?;
    }
    ensure(oracle.contains(j), || format!("j={j} not in oracle argmin set"))?;
    ensure(oracle.tie || j == oracle.canonical, || format!("j={j} differs from unique optimum {}", oracle.canonical))
}
