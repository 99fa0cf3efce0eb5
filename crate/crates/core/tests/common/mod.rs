//! Independent reference implementations shared by the integration tests.
//! Everything here works on plain `Vec<bool>` and avoids the library's
//! packed representation.

#![allow(dead_code)]

use maj_core::{Policy, Profile};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rows = Vec<Vec<bool>>;

pub fn bits(idx: u64, t: usize) -> Vec<bool> {
    (0..t).map(|j| idx >> j & 1 == 1).collect()
}

pub fn to_policy(b: &[bool]) -> Policy {
    Policy::from_bits(b)
}

pub fn to_profile(rows: &Rows) -> Profile {
    Profile::new(rows.iter().map(|r| to_policy(r)).collect()).unwrap()
}

pub fn rows_of(p: &Profile) -> Rows {
    p.rows().iter().map(|r| r.iter().collect()).collect()
}

/// Matches between ballot and policy.
pub fn matches(v: &[bool], p: &[bool]) -> usize {
    v.iter().zip(p).filter(|(a, b)| a == b).count()
}

/// Sign of one voter's opinion: +1 approve, -1 disapprove, 0 abstain.
pub fn opinion(v: &[bool], p: &[bool]) -> i64 {
    let t = v.len();
    let m = 2 * matches(v, p);
    (m > t) as i64 - (m < t) as i64
}

/// (approvals, disapprovals, abstentions).
pub fn naive_tally(rows: &Rows, p: &[bool]) -> (usize, usize, usize) {
    let mut out = (0, 0, 0);
    for v in rows {
        match opinion(v, p) {
            1 => out.0 += 1,
            -1 => out.1 += 1,
            _ => out.2 += 1,
        }
    }
    out
}

pub fn naive_balance(rows: &Rows, p: &[bool]) -> i64 {
    rows.iter().map(|v| opinion(v, p)).sum()
}

pub fn ones(p: &[bool]) -> usize {
    p.iter().filter(|&&b| b).count()
}

/// Columns flipped so each has at least as many ones as zeros.
pub fn naive_normalize(rows: &Rows) -> Rows {
    let n = rows.len();
    let t = rows[0].len();
    let flip: Vec<bool> = (0..t).map(|j| 2 * rows.iter().filter(|r| r[j]).count() < n).collect();
    rows.iter()
        .map(|r| r.iter().zip(&flip).map(|(&b, &f)| b ^ f).collect())
        .collect()
}

pub fn naive_delta(rows: &Rows) -> i64 {
    rows.iter().flatten().map(|&b| if b { 1 } else { -1 }).sum()
}

pub fn random_rows(rng: &mut impl Rng, n: usize, t: usize, density: f64) -> Rows {
    (0..n)
        .map(|_| (0..t).map(|_| rng.gen_bool(density)).collect())
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn arb_rows(max_n: usize, min_t: usize, max_t: usize) -> impl Strategy<Value = Rows> {
    (1..=max_n, min_t..=max_t, 1u32..=9).prop_flat_map(|(n, t, d)| {
        prop::collection::vec(prop::collection::vec(prop::bool::weighted(d as f64 / 10.0), t), n)
    })
}
