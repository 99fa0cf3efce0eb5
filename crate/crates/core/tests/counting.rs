//! The completion-counting kernel against direct enumeration.

mod common;

use common::*;
use maj_core::solvers::{
    binomial, choose_k, count_refinements, count_refinements_with, scaled_expectation, CountingRule, PartialPolicy,
};
use maj_core::{analysis, Profile};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

/// Completions of `partial` with exactly `k` ones.
fn completions(partial: &[Option<bool>], k: usize) -> Vec<Vec<bool>> {
    let t = partial.len();
    (0u64..1 << t)
        .map(|idx| bits(idx, t))
        .filter(|p| ones(p) == k && partial.iter().zip(p).all(|(e, &b)| e.is_none_or(|x| x == b)))
        .collect()
}

fn arb_case(max_t: usize) -> impl Strategy<Value = (Vec<bool>, Vec<Option<bool>>, usize)> {
    (1..=max_t)
        .prop_flat_map(|t| {
            (
                prop::collection::vec(any::<bool>(), t),
                prop::collection::vec(prop::option::of(any::<bool>()), t),
                0..=t,
            )
        })
        .prop_filter("feasible weight", |(_, partial, k)| {
            let fixed_ones = partial.iter().filter(|e| **e == Some(true)).count();
            let free = partial.iter().filter(|e| e.is_none()).count();
            *k >= fixed_ones && *k <= fixed_ones + free
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn kernel_matches_enumeration((v, partial, k) in arb_case(10)) {
        let got = count_refinements(&to_policy(&v), &PartialPolicy::from_entries(partial.clone()), k).unwrap();
        let all = completions(&partial, k);
        let plus = all.iter().filter(|p| opinion(&v, p) > 0).count();
        let minus = all.iter().filter(|p| opinion(&v, p) < 0).count();
        prop_assert_eq!(got.approving, BigUint::from(plus));
        prop_assert_eq!(got.disapproving, BigUint::from(minus));
        let free = partial.iter().filter(|e| e.is_none()).count();
        let fixed = partial.iter().filter(|e| **e == Some(true)).count();
        prop_assert_eq!(binomial(free, k - fixed), BigUint::from(all.len()));
    }

    #[test]
    fn scaled_expectation_matches_enumeration(rows in arb_rows(6, 1, 9), seed in any::<u64>()) {
        let t = rows[0].len();
        let mut r = rng(seed);
        let partial: Vec<Option<bool>> = random_rows(&mut r, 1, t, 0.5)[0]
            .iter()
            .zip(random_rows(&mut r, 1, t, 0.4).remove(0))
            .map(|(&b, keep)| keep.then_some(b))
            .collect();
        let fixed = partial.iter().filter(|e| **e == Some(true)).count();
        let free = partial.iter().filter(|e| e.is_none()).count();
        let prof = to_profile(&rows);
        for k in fixed..=fixed + free {
            let e = scaled_expectation(&prof, &PartialPolicy::from_entries(partial.clone()), k).unwrap();
            let all = completions(&partial, k);
            let total: i64 = all.iter().map(|p| naive_balance(&rows, p)).sum();
            prop_assert_eq!(&e.numerator, &BigInt::from(total));
            prop_assert_eq!(&e.denominator, &BigUint::from(all.len()));
        }
    }

    /// `S(k, p*) = S(k, p*∪{i↦0}) + S(k, p*∪{i↦1})`, with `S` taken as zero
    /// on unreachable weights.
    #[test]
    fn branch_decomposition(rows in arb_rows(6, 1, 10), seed in any::<u64>()) {
        let t = rows[0].len();
        let prof = to_profile(&rows);
        let mut r = rng(seed);
        let entries: Vec<Option<bool>> = random_rows(&mut r, 1, t, 0.5)[0]
            .iter()
            .zip(random_rows(&mut r, 1, t, 0.3).remove(0))
            .map(|(&b, keep)| keep.then_some(b))
            .collect();
        let p_star = PartialPolicy::from_entries(entries.clone());
        let s = |pp: &PartialPolicy, k: usize| {
            scaled_expectation(&prof, pp, k).map(|e| e.numerator).unwrap_or_default()
        };
        for i in (0..t).filter(|&i| entries[i].is_none()) {
            let p0 = p_star.refine(i, false).unwrap();
            let p1 = p_star.refine(i, true).unwrap();
            for k in 0..=t {
                prop_assert_eq!(s(&p_star, k), s(&p0, k) + s(&p1, k), "i={} k={}", i, k);
            }
        }
    }
}

/// The literal condition `m + x + α + β − y > t/2` miscounts: on a small
/// exhaustive sweep it disagrees with enumeration somewhere, while the
/// match-count rule never does.
#[test]
fn literal_rule_disagrees_with_enumeration() {
    let mut disagreements = 0;
    for t in 1..=5usize {
        for vi in 0u64..1 << t {
            let v = bits(vi, t);
            // Partial policies over {unset, 0, 1}^t.
            for code in 0..3u64.pow(t as u32) {
                let partial: Vec<Option<bool>> = (0..t)
                    .map(|j| match code / 3u64.pow(j as u32) % 3 {
                        0 => None,
                        1 => Some(false),
                        _ => Some(true),
                    })
                    .collect();
                let fixed = partial.iter().filter(|e| **e == Some(true)).count();
                let free = partial.iter().filter(|e| e.is_none()).count();
                for k in fixed..=fixed + free {
                    let pp = PartialPolicy::from_entries(partial.clone());
                    let good = count_refinements_with(CountingRule::MatchCount, &to_policy(&v), &pp, k).unwrap();
                    let lit = count_refinements_with(CountingRule::Literal, &to_policy(&v), &pp, k).unwrap();
                    assert_eq!(good, count_refinements(&to_policy(&v), &pp, k).unwrap());
                    if lit != good {
                        disagreements += 1;
                    }
                }
            }
        }
    }
    assert!(disagreements > 0);
}

#[test]
fn kernel_examples() {
    let pol = |s: &str| s.parse().unwrap();
    let c = count_refinements(&pol("100"), &PartialPolicy::empty(3), 2).unwrap();
    assert_eq!((c.approving, c.disapproving), (2u32.into(), 1u32.into()));
    let p_star = PartialPolicy::from_entries(vec![Some(true), None, None]);
    let c = count_refinements(&pol("111"), &p_star, 2).unwrap();
    assert_eq!((c.approving, c.disapproving), (2u32.into(), 0u32.into()));
    assert!(count_refinements(&pol("111"), &p_star, 0).is_err());
}

/// Averaging `b_p · E_k[b]` over weights with `C(t, k)` gives `E[Y]`,
/// which equals the closed form `Δ · C(t-1, ⌊t/2⌋) / |B_m|`.
#[test]
fn expectation_consistency() {
    let mut r = rng(17);
    for trial in 0..150 {
        let t = 1 + trial % 12;
        let n = 1 + trial % 7;
        let rows = naive_normalize(&random_rows(&mut r, n, t, 0.55));
        let prof = to_profile(&rows);
        let empty = PartialPolicy::empty(t);
        let mut sum = BigRational::from_integer(0.into());
        for k in t / 2 + 1..=t {
            let e = scaled_expectation(&prof, &empty, k).unwrap();
            let weight = BigInt::from(binomial(t, k));
            let ek = BigRational::new(e.numerator.clone(), BigInt::from(e.denominator.clone()));
            sum += ek * BigRational::from_integer(weight * BigInt::from(2 * k as i64 - t as i64));
        }
        let bm = BigRational::from_integer(BigInt::from(analysis::majority_set_size(t)));
        let y = sum / bm;
        assert_eq!(&y, analysis::expectation_x_closed(&prof).as_rational(), "rows={rows:?}");
    }
}

#[test]
fn choose_k_examples() {
    let five_voters = Profile::from_strs(&["100", "010", "001", "111", "111"]).unwrap();
    let c = choose_k(&five_voters).unwrap();
    assert_eq!(c.k, 2);
    assert_eq!(c.expectation.to_rational(), BigRational::from_integer(3.into()));
    let all = Profile::from_strs(&["1111", "1111", "1111"]).unwrap();
    assert_eq!(choose_k(&all).unwrap().k, 4);
    let cyc = maj_core::gadgets::cyclic_profile(5).unwrap();
    let c = choose_k(&cyc).unwrap();
    assert!((3..=5).contains(&c.k));
    assert!(c.expectation.numerator >= BigInt::from(0));
}
