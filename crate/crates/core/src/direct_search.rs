//! Direct-search skew compensation.
//!
//! Starting from the platform's floating-point guess `k = ⌊fp(i·D/A) + 0.5⌋`,
//! the search walks `k` by ±1 while tracking the integer residual
//! `Δ = k·A − i·D`, and stops at the tick minimizing `|Δ|`. The walk uses
//! only integer addition, subtraction and comparison, and handles `D < A`,
//! `D = A` and `D > A` on one code path.

use std::fmt;

use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

use crate::clock::{RatioDA, Tick};
use crate::float_env::{fp_nearest_tick, FloatEnv};

/// Which stopping rule ended the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminalCase {
    /// `Δ = 0`: `j = k`.
    #[serde(rename = "C1")]
    Case1,
    /// `Δ − A = 0`: `j = k − 1`.
    #[serde(rename = "C2_1")]
    Case21,
    /// `Δ > 0 > Δ − A` and `|Δ − A| < |Δ|`: `j = k − 1`.
    #[serde(rename = "C2_3_LEFT")]
    Case23Left,
    /// `Δ > 0 > Δ − A` and `|Δ| ≤ |Δ − A|`: `j = k`.
    #[serde(rename = "C2_3_STAY")]
    Case23Stay,
    /// `Δ + A = 0`: `j = k + 1`.
    #[serde(rename = "C3_1")]
    Case31,
    /// `Δ < 0 < Δ + A` and `|Δ + A| < |Δ|`: `j = k + 1`.
    #[serde(rename = "C3_2_RIGHT")]
    Case32Right,
    /// `Δ < 0 < Δ + A` and `|Δ| ≤ |Δ + A|`: `j = k`.
    #[serde(rename = "C3_2_STAY")]
    Case32Stay,
}

impl TerminalCase {
    pub fn tag(self) -> &'static str {
        match self {
            TerminalCase::Case1 => "C1",
            TerminalCase::Case21 => "C2_1",
            TerminalCase::Case23Left => "C2_3_LEFT",
            TerminalCase::Case23Stay => "C2_3_STAY",
            TerminalCase::Case31 => "C3_1",
            TerminalCase::Case32Right => "C3_2_RIGHT",
            TerminalCase::Case32Stay => "C3_2_STAY",
        }
    }
}

impl fmt::Display for TerminalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompensationOutcome {
    pub j: Tick,
    /// Entries into the top-level `Δ = 0 / Δ > 0 / Δ < 0` dispatch, at least 1.
    pub iterations: u64,
    pub terminal_case: TerminalCase,
}

/// Current candidate and its residual; `delta == k·A − i·D` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchState {
    pub k: Tick,
    pub delta: i128,
}

impl SearchState {
    /// State at candidate `k`, with `Δ` formed as `(k − i)·A + i·(A − D)`.
    pub fn at(i: Tick, r: RatioDA, k: Tick) -> Self {
        let a = i128::from(r.a());
        let d = i128::from(r.d());
        let delta = (k.wide() - i.wide()) * a + i.wide() * (a - d);
        debug_assert_eq!(delta, r.residual(i, k));
        SearchState { k, delta }
    }
}

/// Initial state from the platform float guess.
pub fn init_state(i: Tick, r: RatioDA, env: &FloatEnv) -> SearchState {
    SearchState::at(i, r, fp_nearest_tick(i, r, env))
}

pub fn compensate(i: Tick, r: RatioDA, env: &FloatEnv) -> CompensationOutcome {
    search(r, init_state(i, r, env))
}

/// Runs the search from an arbitrary starting candidate `k0`.
pub fn compensate_from(i: Tick, r: RatioDA, k0: Tick) -> CompensationOutcome {
    search(r, SearchState::at(i, r, k0))
}

pub fn search(r: RatioDA, state: SearchState) -> CompensationOutcome {
    search_observed(r, state, |_| {})
}

/// Like [`search`], calling `observer` with the state at every dispatch.
pub fn search_observed<O>(r: RatioDA, state: SearchState, mut observer: O) -> CompensationOutcome
where
    O: FnMut(&SearchState),
{
    // |Δ| never grows during the walk, so a start that fits in i64 stays there.
    match i64::try_from(state.delta) {
        Ok(delta) => walk(i64::from(r.a()), state.k, delta, &mut observer),
        Err(_) => walk(i128::from(r.a()), state.k, state.delta, &mut observer),
    }
}

/// The case dispatch over a signed residual type `W`.
fn walk<W, O>(a: W, mut k: Tick, mut delta: W, observer: &mut O) -> CompensationOutcome
where
    W: PrimInt + Signed + Into<i128>,
    O: FnMut(&SearchState),
{
    let step_down = |k: Tick| Tick::new(k.get() - 1);
    let step_up = |k: Tick| Tick::new(k.get().checked_add(1).expect("tick overflow"));
    let zero = W::zero();
    let mut iterations = 0;
    loop {
        iterations += 1;
        observer(&SearchState { k, delta: delta.into() });
        let (j, terminal_case) = if delta == zero {
            (k, TerminalCase::Case1)
        } else if delta > zero {
            // Δ > 0 implies k ≥ 1, so k − 1 never underflows.
            let left = delta - a;
            if left == zero {
                (step_down(k), TerminalCase::Case21)
            } else if left > zero {
                k = step_down(k);
                delta = left;
                continue;
            } else if left.abs() < delta.abs() {
                (step_down(k), TerminalCase::Case23Left)
            } else {
                (k, TerminalCase::Case23Stay)
            }
        } else {
            let right = delta + a;
            if right == zero {
                (step_up(k), TerminalCase::Case31)
            } else if right > zero {
                if right.abs() < delta.abs() {
                    (step_up(k), TerminalCase::Case32Right)
                } else {
                    (k, TerminalCase::Case32Stay)
                }
            } else {
                k = step_up(k);
                delta = right;
                continue;
            }
        };
        return CompensationOutcome { j, iterations, terminal_case };
    }
}
