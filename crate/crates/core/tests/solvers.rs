//! Solvers against exhaustive enumeration.

mod common;

use common::*;
use maj_core::gadgets::{anscombe_gadget, cyclic_profile};
use maj_core::solvers::{
    brute_force, default_max_rounds, derandomized_solve, randomized_solve, Method, Requirement, BRUTE_FORCE_CAP,
};
use maj_core::{normalize, Enumeration, Profile};
use proptest::prelude::*;

fn cfg() -> Enumeration {
    Enumeration::with_cap(BRUTE_FORCE_CAP)
}

/// Reference: best weight among non-losing policies, by plain iteration.
fn reference_best(rows: &Rows) -> Option<usize> {
    let t = rows[0].len();
    (0u64..1 << t)
        .map(|i| bits(i, t))
        .filter(|p| naive_balance(rows, p) >= 0)
        .map(|p| ones(&p))
        .max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn derandomized_meets_guarantee(rows in arb_rows(8, 1, 12)) {
        let rows = naive_normalize(&rows);
        let prof = to_profile(&rows);
        let t = prof.t();
        let r = derandomized_solve(&prof).unwrap();
        r.verify(&prof).unwrap();
        let p: Vec<bool> = r.policy.iter().collect();
        prop_assert!(ones(&p) > t / 2);
        prop_assert_eq!(r.agreements, ones(&p));
        prop_assert_eq!(r.k_star, Some(ones(&p)));
        prop_assert_eq!(r.method, Method::Derandomized);
        let b = naive_balance(&rows, &p);
        prop_assert_eq!(r.tally.balance, b);
        prop_assert!(b >= 0);
        if naive_delta(&rows) > 0 {
            prop_assert!(b > 0);
        }
        // The oracle agrees that such a policy exists.
        let best = reference_best(&rows).unwrap();
        prop_assert!(best > t / 2);
    }

    #[test]
    fn brute_force_matches_reference(rows in arb_rows(6, 1, 10), min in 0usize..=10) {
        let prof = to_profile(&rows);
        let t = prof.t();
        let out = brute_force(&prof, Requirement::NonLosing, min, &cfg()).unwrap();
        prop_assert_eq!(out.max_agreements, reference_best(&rows));
        let first = (0u64..1 << t)
            .find(|&i| { let p = bits(i, t); ones(&p) >= min && naive_balance(&rows, &p) >= 0 });
        prop_assert_eq!(out.witness.as_ref().and_then(|p| p.to_index()), first);
        let seq = brute_force(&prof, Requirement::NonLosing, min, &cfg().sequential()).unwrap();
        prop_assert_eq!(seq, out);
    }

    #[test]
    fn unanimous_and_winning_requirements(rows in arb_rows(5, 1, 8)) {
        let prof = to_profile(&rows);
        let t = prof.t();
        let una = brute_force(&prof, Requirement::Unanimous, 0, &cfg()).unwrap();
        let win = brute_force(&prof, Requirement::Winning, 0, &cfg()).unwrap();
        let una_ref = (0u64..1 << t).map(|i| bits(i, t)).filter(|p| rows.iter().all(|v| opinion(v, p) > 0)).map(|p| ones(&p)).max();
        let win_ref = (0u64..1 << t).map(|i| bits(i, t)).filter(|p| naive_balance(&rows, p) > 0).map(|p| ones(&p)).max();
        prop_assert_eq!(una.max_agreements, una_ref);
        prop_assert_eq!(win.max_agreements, win_ref);
    }
}

#[test]
fn gadget_families() {
    for t in 2..=12 {
        let g = anscombe_gadget(t).unwrap();
        let r = derandomized_solve(&normalize(&g).normalized).unwrap();
        assert_eq!(r.agreements, t / 2 + 1, "t={t}");
        assert!(r.tally.balance >= 0);
        let out = brute_force(&g, Requirement::NonLosing, t / 2 + 1, &cfg()).unwrap();
        assert_eq!(out.max_agreements, Some(t / 2 + 1));
    }
    for t in [3, 5, 7, 9, 11] {
        let c = cyclic_profile(t).unwrap();
        let r = derandomized_solve(&c).unwrap();
        assert!(r.tally.balance > 0);
        assert_eq!(r.agreements % 2, 1);
    }
}

#[test]
fn brute_force_examples() {
    let five_voters = Profile::from_strs(&["100", "010", "001", "111", "111"]).unwrap();
    let out = brute_force(&five_voters, Requirement::NonLosing, 2, &cfg()).unwrap();
    assert_eq!(out.max_agreements, Some(2));
    let w = out.witness.unwrap().to_string();
    assert!(["110", "101", "011"].contains(&w.as_str()));
    assert_eq!(
        brute_force(&five_voters, Requirement::NonLosing, 3, &cfg())
            .unwrap()
            .witness,
        None
    );
    let c7 = cyclic_profile(7).unwrap();
    let out = brute_force(&c7, Requirement::NonLosing, 4, &cfg()).unwrap();
    assert_eq!(out.witness.unwrap().count_ones() % 2, 1);
    assert!(maj_core::solvers::indices_of_weight(7, 4)
        .all(|i| { c7.tally(&maj_core::Policy::from_index(7, i)).unwrap().balance < 0 }));
    let wide = Profile::new(vec![maj_core::Policy::ones(25)]).unwrap();
    assert!(brute_force(&wide, Requirement::NonLosing, 0, &cfg()).is_err());
}

#[test]
fn randomized_is_replayable_and_winning() {
    let mut r = rng(99);
    let mut checked = 0;
    while checked < 40 {
        let t = [3, 5, 7, 9][checked % 4];
        let rows = naive_normalize(&random_rows(&mut r, 1 + checked % 6, t, 0.6));
        if naive_delta(&rows) <= 0 {
            continue;
        }
        let prof = to_profile(&rows);
        let rounds = default_max_rounds(&prof);
        let a = randomized_solve(&prof, checked as u64, rounds).unwrap().unwrap();
        let b = randomized_solve(&prof, checked as u64, rounds).unwrap().unwrap();
        assert_eq!(a, b);
        a.verify(&prof).unwrap();
        assert!(a.tally.balance > 0);
        assert!(a.agreements > t / 2);
        checked += 1;
    }
}
