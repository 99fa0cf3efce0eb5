//! Exhaustive search over all `2^t` policies.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::{fold_range, Enumeration};
use crate::profile::{Policy, Profile};

/// What a policy must achieve in the vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Requirement {
    /// Balance `>= 0`.
    NonLosing,
    /// Balance `> 0`.
    Winning,
    /// Every voter approves.
    Unanimous,
}

impl Requirement {
    #[inline]
    fn holds(self, profile: &Profile, index: u64) -> bool {
        match self {
            Requirement::NonLosing => profile.balance_of_index(index) >= 0,
            Requirement::Winning => profile.balance_of_index(index) > 0,
            Requirement::Unanimous => profile.unanimous_index(index),
        }
    }
}

/// Default issue cap for [`brute_force`].
pub const BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceOutcome {
    /// Smallest-encoding qualifying policy with `|p| >= min_agreements`.
    pub witness: Option<Policy>,
    /// Largest `|p|` over all qualifying policies.
    pub max_agreements: Option<usize>,
    /// Smallest-encoding qualifying policy attaining `max_agreements`.
    pub best: Option<Policy>,
}

#[derive(Clone, Copy)]
struct Acc {
    witness: u64,
    best_weight: i64,
    best: u64,
}

impl Acc {
    const EMPTY: Acc = Acc {
        witness: u64::MAX,
        best_weight: -1,
        best: u64::MAX,
    };

    fn merge(self, other: Acc) -> Acc {
        let (best_weight, best) = match self.best_weight.cmp(&other.best_weight) {
            std::cmp::Ordering::Greater => (self.best_weight, self.best),
            std::cmp::Ordering::Less => (other.best_weight, other.best),
            std::cmp::Ordering::Equal => (self.best_weight, self.best.min(other.best)),
        };
        Acc {
            witness: self.witness.min(other.witness),
            best_weight,
            best,
        }
    }
}

/// Enumerates every policy. Policies are encoded with issue `j` at bit `j`;
/// the reported witnesses are the qualifying policies with the smallest
/// encoding, which makes the result independent of how the range is split.
pub fn brute_force(
    profile: &Profile,
    requirement: Requirement,
    min_agreements: usize,
    cfg: &Enumeration,
) -> Result<BruteForceOutcome> {
    let t = profile.t();
    cfg.check(t)?;
    let acc = fold_range(
        cfg.exec,
        0..1u64 << t,
        Acc::EMPTY,
        |mut acc, idx| {
            let w = idx.count_ones() as usize;
            let wants_witness = w >= min_agreements && idx < acc.witness;
            let wants_best = w as i64 > acc.best_weight || (w as i64 == acc.best_weight && idx < acc.best);
            if (wants_witness || wants_best) && requirement.holds(profile, idx) {
                if wants_witness {
                    acc.witness = idx;
                }
                if wants_best {
                    acc.best_weight = w as i64;
                    acc.best = idx;
                }
            }
            acc
        },
        Acc::merge,
    );
    let decode = |idx: u64| (idx != u64::MAX).then(|| Policy::from_index(t, idx));
    Ok(BruteForceOutcome {
        witness: decode(acc.witness),
        max_agreements: (acc.best_weight >= 0).then_some(acc.best_weight as usize),
        best: decode(acc.best),
    })
}

/// Iterates all `t`-bit indices with exactly `k` ones in increasing order
/// (Gosper's hack). Requires `t <= 63`.
pub fn indices_of_weight(t: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(t <= 63, "indices_of_weight needs t <= 63");
    let limit = 1u64 << t;
    let first = if k > t {
        limit
    } else if k == 0 {
        0
    } else {
        (1u64 << k) - 1
    };
    let mut next = Some(first).filter(|&f| f < limit);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let n = (((r ^ cur) >> 2) / c) | r;
            (n < limit).then_some(n)
        };
        Some(cur)
    })
}

/// Smallest-encoding policy with `|p| >= min_agreements` meeting the
/// requirement, scanning only those weights.
pub fn find_with_weight_at_least(
    profile: &Profile,
    requirement: Requirement,
    min_agreements: usize,
    cfg: &Enumeration,
) -> Result<Option<Policy>> {
    let t = profile.t();
    cfg.check(t)?;
    let mut best: Option<u64> = None;
    for k in min_agreements..=t {
        if let Some(idx) = indices_of_weight(t, k).find(|&idx| requirement.holds(profile, idx)) {
            best = Some(best.map_or(idx, |b| b.min(idx)));
        }
    }
    Ok(best.map(|idx| Policy::from_index(t, idx)))
}
