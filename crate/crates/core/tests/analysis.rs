//! Exact checks of the probabilistic identities and the bijections.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use maj_core::analysis::{
    apply_f0, apply_f1, apply_fv, classify, cohesion_check, expectation_x_closed, expectation_xy_bruteforce,
    markov_bound_check, nonlosing_components, parity_classification, success_probabilities, BoundCheck, ExactRational,
    ProposalClass, EXPECTATION_CAP, HYPERCUBE_CAP,
};
use maj_core::gadgets::cyclic_profile;
use maj_core::{voter_balance, Enumeration, Policy};

fn cfg(cap: usize) -> Enumeration {
    Enumeration::with_cap(cap)
}

/// X and Y by direct summation with the reference tally.
fn reference_xy(rows: &Rows) -> (ExactRational, ExactRational) {
    let t = rows[0].len();
    let (mut x, mut y, mut count) = (0i64, 0i64, 0i64);
    for i in 0u64..1 << t {
        let p = bits(i, t);
        if 2 * ones(&p) <= t {
            continue;
        }
        count += 1;
        x += rows
            .iter()
            .map(|v| t as i64 - 2 * (t - matches(v, &p)) as i64)
            .sum::<i64>();
        y += (2 * ones(&p) as i64 - t as i64) * naive_balance(rows, &p);
    }
    (ExactRational::new(x, count), ExactRational::new(y, count))
}

#[test]
fn x_equals_y_equals_closed_form() {
    let mut r = rng(3);
    for trial in 0..120 {
        let t = 1 + trial % 12;
        let rows = naive_normalize(&random_rows(&mut r, 1 + trial % 6, t, 0.3 + 0.05 * (trial % 8) as f64));
        let prof = to_profile(&rows);
        let (x, y) = expectation_xy_bruteforce(&prof, &cfg(EXPECTATION_CAP)).unwrap();
        assert_eq!(x, y, "rows={rows:?}");
        assert_eq!(x, expectation_x_closed(&prof));
        assert_eq!((x, y), reference_xy(&rows));
    }
}

#[test]
fn bijections_on_b_star() {
    let mut r = rng(4);
    for trial in 0..60 {
        let t = 2 + trial % 9;
        let v = to_policy(&random_rows(&mut r, 1, t, 0.5).remove(0));
        let b_star: Vec<Policy> = (0u64..1 << t)
            .map(|i| Policy::from_index(t, i))
            .filter(|p| classify(&v, p).unwrap() != ProposalClass::Degenerate)
            .collect();
        let set: BTreeSet<String> = b_star.iter().map(|p| p.to_string()).collect();
        let mut hist_before = BTreeMap::new();
        let mut hist_after = BTreeMap::new();
        for p in &b_star {
            let class = classify(&v, p).unwrap();
            let (f0, f1, fv) = (
                apply_f0(&v, p).unwrap(),
                apply_f1(&v, p).unwrap(),
                apply_fv(&v, p).unwrap(),
            );
            let bp = p.self_balance();
            assert_eq!(voter_balance(&v, &f0).unwrap(), bp);
            assert_eq!(voter_balance(&v, &f1).unwrap(), -bp);
            let swap = |c| match c {
                ProposalClass::T01 => ProposalClass::T10,
                ProposalClass::T10 => ProposalClass::T01,
                c => c,
            };
            let cross = |c| match c {
                ProposalClass::T00 => ProposalClass::T11,
                ProposalClass::T11 => ProposalClass::T00,
                c => c,
            };
            assert_eq!(classify(&v, &f0).unwrap(), swap(class));
            // T_ij ↦ T_(1-j)(1-i): T00↔T11, T01 and T10 fixed.
            assert_eq!(classify(&v, &f1).unwrap(), cross(class));
            assert_eq!(classify(&v, &fv).unwrap(), class);
            let expected_bv = match class {
                ProposalClass::T00 | ProposalClass::T11 => bp,
                _ => -bp,
            };
            assert_eq!(voter_balance(&v, &fv).unwrap(), expected_bv);
            assert_eq!(&apply_f0(&v, &f0).unwrap(), p);
            assert_eq!(&apply_f1(&v, &f1).unwrap(), p);
            assert_eq!(&apply_fv(&v, &fv).unwrap(), p);
            for img in [&f0, &f1, &fv] {
                assert!(set.contains(&img.to_string()));
            }
            *hist_before.entry(class).or_insert(0) += 1;
            *hist_after.entry(classify(&v, &fv).unwrap()).or_insert(0) += 1;
        }
        assert_eq!(hist_before, hist_after);
        for f in [apply_f0, apply_f1, apply_fv] {
            let image: BTreeSet<String> = b_star.iter().map(|p| f(&v, p).unwrap().to_string()).collect();
            assert_eq!(image, set);
        }
    }
}

#[test]
fn cyclic_parity_and_isolation() {
    for t in [3, 5, 7, 9, 11] {
        let c = cyclic_profile(t).unwrap();
        let par = parity_classification(&c, &cfg(HYPERCUBE_CAP)).unwrap();
        assert!(par.wins_iff_odd, "t={t}");
        let comp = nonlosing_components(&c, &cfg(HYPERCUBE_CAP)).unwrap();
        assert!(comp.all_isolated);
        assert_eq!(comp.nonlosing_count, 1 << (t - 1));
    }
}

#[test]
fn success_probability_respects_bound() {
    let mut r = rng(5);
    let mut checked = 0;
    while checked < 60 {
        let t = [3, 5, 7, 9, 11][checked % 5];
        let rows = naive_normalize(&random_rows(&mut r, 1 + checked % 7, t, 0.55));
        let delta = naive_delta(&rows);
        if delta <= 0 {
            continue;
        }
        let prof = to_profile(&rows);
        let probs = success_probabilities(&prof, &cfg(EXPECTATION_CAP)).unwrap();
        // Reference for one k by enumeration.
        let (k0, p0) = &probs[0];
        let wins = (0u64..1 << t)
            .map(|i| bits(i, t))
            .filter(|p| ones(p) == *k0 && naive_balance(&rows, p) > 0)
            .count();
        let total = (0u64..1 << t).filter(|i| i.count_ones() as usize == *k0).count();
        assert_eq!(p0, &ExactRational::new(wins as i64, total as i64));
        let best = probs.into_iter().map(|(_, p)| p).max().unwrap();
        assert_eq!(markov_bound_check(&best, rows.len(), t, delta), BoundCheck::Holds);
        checked += 1;
    }
}

#[test]
fn bound_check_is_exact_near_threshold() {
    // √(2/π)·Δ/(n t^{3/2}) with n = 1, t = 1, Δ = 1 is √(2/π) ≈ 0.797884560802865.
    let below = ExactRational::new(79_788_456u64, 100_000_000u64);
    let above = ExactRational::new(79_788_457u64, 100_000_000u64);
    assert_eq!(markov_bound_check(&below, 1, 1, 1), BoundCheck::Fails);
    assert_eq!(markov_bound_check(&above, 1, 1, 1), BoundCheck::Holds);
    // Closer than the enclosure of π can resolve.
    let razor = ExactRational::new(797_884_560_802_865u64, 1_000_000_000_000_000u64);
    assert_eq!(markov_bound_check(&razor, 1, 1, 1), BoundCheck::Undecided);
}

#[test]
fn cohesion_flag_is_consistent_where_tested() {
    let mut r = rng(6);
    let mut safe_seen = 0;
    for trial in 0..400 {
        let t = 10 + trial % 30;
        // Ballots near all-ones, so some instances are cohesive.
        let rows = random_rows(&mut r, 1 + trial % 9, t, 0.9 + 0.01 * (trial % 10) as f64);
        let prof = to_profile(&rows);
        let c = cohesion_check(&prof);
        let h = (0..rows.len())
            .flat_map(|i| (0..rows.len()).map(move |j| (i, j)))
            .map(|(i, j)| t - matches(&rows[i], &rows[j]))
            .max()
            .unwrap();
        assert_eq!(c.h, h);
        assert_eq!(c.iwm_safe, ((h + t) * (h + t)) < 2 * t * t);
        if c.iwm_safe {
            safe_seen += 1;
            let iwm: Vec<bool> = maj_core::iwm(&prof).iter().collect();
            assert!(naive_balance(&rows, &iwm) >= 0);
        }
    }
    assert!(safe_seen > 0);
}
