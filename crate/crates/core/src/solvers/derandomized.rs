//! Deterministic walk by conditional expectations.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::counting::{choose_k, scaled_numerator, PartialPolicy};
use super::{Method, SolveReport};
use crate::error::{Error, Result};
use crate::profile::Profile;

/// Finds a non-losing policy with `|p| >= ⌊t/2⌋ + 1`, winning when the
/// profile has more ones than zeros. Requires `Δ >= 0` (true for any
/// normalized profile).
///
/// Fixes issues left to right. Each step keeps the exact expected balance
/// of a uniformly random weight-`k*` completion non-negative (positive when
/// it started positive). When both branches qualify, issue value 1 wins.
pub fn derandomized_solve(profile: &Profile) -> Result<SolveReport> {
    let delta = profile.delta();
    if delta < 0 {
        return Err(Error::contract(format!(
            "derandomized solve needs ones >= zeros (Δ = {delta}); normalize first"
        )));
    }
    let t = profile.t();
    let choice = choose_k(profile)?;
    let k = choice.k;
    let strict = delta > 0;
    let mut current = choice.expectation.numerator.clone();
    match current.cmp(&BigInt::zero()) {
        Ordering::Less => return Err(Error::contract("best weight has negative expected balance")),
        Ordering::Equal if strict => return Err(Error::contract("Δ > 0 but best weight has zero expected balance")),
        _ => {}
    }

    let mut p_star = PartialPolicy::empty(t);
    for i in 0..t {
        let needed = k - p_star.ones();
        let free_after = t - i - 1;
        let bit = if needed == 0 {
            false
        } else if needed > free_after {
            true
        } else {
            // Both branches are feasible and their numerators partition the
            // current one.
            let one = scaled_numerator(profile, &p_star.refine(i, true)?, k)?;
            let zero = &current - &one;
            let pick_one = if one.is_positive() {
                true
            } else if zero.is_positive() {
                false
            } else if !one.is_negative() {
                true
            } else if !zero.is_negative() {
                false
            } else {
                return Err(Error::contract(format!("both branches negative at issue {i}")));
            };
            current = if pick_one { one } else { zero };
            pick_one
        };
        p_star = p_star.refine(i, bit)?;
    }

    let policy = p_star
        .to_policy()
        .ok_or_else(|| Error::contract("walk left issues undecided"))?;
    let mut report = SolveReport::new(profile, policy, Method::Derandomized)?;
    report.k_star = Some(k);
    if report.tally.balance < 0 || (strict && report.tally.balance == 0) {
        return Err(Error::contract(format!(
            "derandomized output has balance {} (Δ = {delta})",
            report.tally.balance
        )));
    }
    if report.agreements != k {
        return Err(Error::contract("output weight differs from k*"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{anscombe_gadget, cyclic_profile};
    use crate::profile::Policy;

    #[test]
    fn five_voters_walk() {
        let p = Profile::from_strs(&["100", "010", "001", "111", "111"]).unwrap();
        let r = derandomized_solve(&p).unwrap();
        assert_eq!(r.policy.to_string(), "110");
        assert_eq!(r.agreements, 2);
        assert_eq!(r.tally.balance, 3);
        assert_eq!(r.k_star, Some(2));
    }

    #[test]
    fn gadget_frontier() {
        for t in 3..=11 {
            let r = derandomized_solve(&anscombe_gadget(t).unwrap()).unwrap();
            assert_eq!(r.agreements, t / 2 + 1, "t={t}");
            assert!(r.tally.balance >= 0);
        }
    }

    #[test]
    fn unanimous_electorate() {
        let p = Profile::new(vec![Policy::ones(6); 3]).unwrap();
        let r = derandomized_solve(&p).unwrap();
        assert_eq!(r.policy, Policy::ones(6));
        assert_eq!(r.tally.balance, 3);
    }

    #[test]
    fn cyclic_wins() {
        for t in [3, 5, 7, 9] {
            let r = derandomized_solve(&cyclic_profile(t).unwrap()).unwrap();
            assert!(r.tally.balance > 0);
            assert_eq!(r.agreements % 2, 1);
        }
    }

    #[test]
    fn negative_delta_rejected() {
        let p = Profile::from_strs(&["000", "000", "111"]).unwrap();
        assert!(matches!(derandomized_solve(&p), Err(Error::Contract(_))));
    }

    #[test]
    fn wide_profile_runs() {
        // t = 150 spans three words and needs big-integer expectations.
        let t = 150;
        let rows = (0..7)
            .map(|i| Policy::from_bits(&(0..t).map(|j| (i * 7 + j * 3) % 5 != 0).collect::<Vec<_>>()))
            .collect();
        let p = crate::profile::normalize(&Profile::new(rows).unwrap()).normalized;
        let r = derandomized_solve(&p).unwrap();
        assert!(r.agreements > t / 2);
        assert!(r.tally.balance > 0);
    }
}
