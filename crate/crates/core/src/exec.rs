//! Execution strategy for the exhaustive enumerations.
//!
//! Every enumeration in this crate walks a contiguous range of policy
//! indices and folds the results with an associative, order-independent
//! reduction (sums, minima, maxima). [`fold_range`] splits the range into
//! blocks and, when the `parallel` feature is enabled and
//! [`Execution::Parallel`] is selected, hands the blocks to rayon. Results
//! never depend on the strategy or on the number of worker threads.

use std::ops::Range;

use serde::{Deserialize, Serialize};

/// Block size for range partitioning. Small enough to balance work across
/// threads, large enough that per-block overhead is negligible.
#[cfg(feature = "parallel")]
const BLOCK: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Caps and strategy shared by the exhaustive enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    /// Largest issue count the enumerator accepts.
    pub max_issues: usize,
    pub exec: Execution,
}

impl Enumeration {
    pub const fn with_cap(max_issues: usize) -> Self {
        Enumeration {
            max_issues,
            exec: Execution::Parallel,
        }
    }

    pub fn sequential(mut self) -> Self {
        self.exec = Execution::Sequential;
        self
    }

    pub fn parallel(mut self) -> Self {
        self.exec = Execution::Parallel;
        self
    }

    pub(crate) fn check(&self, t: usize) -> crate::Result<()> {
        if t > self.max_issues || t > 63 {
            Err(crate::Error::Resource {
                what: "issue count",
                value: t as u128,
                cap: self.max_issues.min(63) as u128,
            })
        } else {
            Ok(())
        }
    }
}

/// Folds `f` over every index of `range`, combining partial results with
/// `reduce`. `identity` must be neutral for `reduce`, and `reduce` must be
/// associative and commutative.
pub fn fold_range<T, F, R>(exec: Execution, range: Range<u64>, identity: T, f: F, reduce: R) -> T
where
    T: Clone + Send + Sync,
    F: Fn(T, u64) -> T + Send + Sync,
    R: Fn(T, T) -> T + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel if range.end.saturating_sub(range.start) > BLOCK => {
            use rayon::prelude::*;
            let start = range.start;
            let blocks = (range.end - range.start).div_ceil(BLOCK);
            (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let lo = start + b * BLOCK;
                    let hi = (lo + BLOCK).min(range.end);
                    (lo..hi).fold(identity.clone(), &f)
                })
                .reduce(|| identity.clone(), &reduce)
        }
        _ => {
            let _ = &reduce;
            range.fold(identity, f)
        }
    }
}

/// Applies `f` to every item of `items`, preserving order.
pub fn map_items<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
