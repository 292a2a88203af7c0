use serde::{Deserialize, Serialize};

use super::Algorithm;
use crate::clock::Tick;

/// Iteration statistics with an exact sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterStats {
    pub min: u64,
    pub max: u64,
    pub sum: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub algorithm: Algorithm,
    pub i: Tick,
    pub n: u64,
    pub err_min: i64,
    pub err_max: i64,
    /// Exact sum of signed errors; the mean is derived from it.
    pub err_sum: i128,
    /// `None` for algorithms that do not iterate.
    pub iter: Option<IterStats>,
}

impl StatsRow {
    pub fn err_mean(&self) -> f64 {
        self.err_sum as f64 / self.n as f64
    }

    pub fn iter_mean(&self) -> Option<f64> {
        self.iter.map(|it| it.sum as f64 / self.n as f64)
    }
}

/// Order-independent partial aggregate; merging is associative and
/// commutative, so any partition of the samples gives the same row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsAccumulator {
    n: u64,
    err: Option<(i64, i64)>,
    err_sum: i128,
    iter: Option<IterStats>,
    iter_count: u64,
}

impl StatsAccumulator {
    pub fn push(&mut self, err: i64, iterations: Option<u64>) {
        self.n += 1;
        self.err = Some(match self.err {
            Some((lo, hi)) => (lo.min(err), hi.max(err)),
            None => (err, err),
        });
        self.err_sum += i128::from(err);
        if let Some(k) = iterations {
            self.iter_count += 1;
            self.iter = Some(match self.iter {
                Some(s) => IterStats { min: s.min.min(k), max: s.max.max(k), sum: s.sum + u128::from(k) },
                None => IterStats { min: k, max: k, sum: u128::from(k) },
            });
        }
    }

    pub fn merge(self, other: StatsAccumulator) -> StatsAccumulator {
        let err = match (self.err, other.err) {
            (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
            (x, None) | (None, x) => x,
        };
        let iter = match (self.iter, other.iter) {
            (Some(a), Some(b)) => Some(IterStats { min: a.min.min(b.min), max: a.max.max(b.max), sum: a.sum + b.sum }),
            (x, None) | (None, x) => x,
        };
        StatsAccumulator {
            n: self.n + other.n,
            err,
            err_sum: self.err_sum + other.err_sum,
            iter,
            iter_count: self.iter_count + other.iter_count,
        }
    }

    /// Final row, or `None` with no samples. Iteration stats are kept only
    /// if every sample reported a count.
    pub fn finish(self, algorithm: Algorithm, i: Tick) -> Option<StatsRow> {
        let (err_min, err_max) = self.err?;
        let iter = if self.iter_count == self.n { self.iter } else { None };
        Some(StatsRow { algorithm, i, n: self.n, err_min, err_max, err_sum: self.err_sum, iter })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn any_partition_aggregates_identically(
            items in prop::collection::vec((-50i64..50, prop::option::of(1u64..100)), 1..200),
            cut in 0usize..200,
        ) {
            let all = items.iter().fold(StatsAccumulator::default(), |mut a, &(e, k)| { a.push(e, k); a });
            let cut = cut.min(items.len());
            let (l, r) = items.split_at(cut);
            let fold = |xs: &[(i64, Option<u64>)]| xs.iter().fold(StatsAccumulator::default(), |mut a, &(e, k)| { a.push(e, k); a });
            prop_assert_eq!(fold(r).merge(fold(l)), all.clone());
            let row = all.finish(Algorithm::DirectSearch, Tick::new(1)).unwrap();
            prop_assert_eq!(row.err_sum, items.iter().map(|&(e, _)| i128::from(e)).sum::<i128>());
            prop_assert!(row.err_min as f64 <= row.err_mean() && row.err_mean() <= row.err_max as f64);
            if let Some(it) = row.iter {
                prop_assert!(it.min as f64 <= row.iter_mean().unwrap() && row.iter_mean().unwrap() <= it.max as f64);
            }
        }
    }
}
