//! Round-based sampler.
//!
//! Each round draws one uniformly random policy of every weight
//! `k ∈ {⌊t/2⌋+1, …, t}` and stops at the first winning one. The generator
//! is ChaCha8 seeded through `SeedableRng::seed_from_u64`, so a seed fully
//! determines the run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Method, SolveReport};
use crate::error::{Error, Result};
use crate::profile::{Policy, Profile};

pub type SolverRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform policy with exactly `k` ones out of `t` (Floyd's algorithm:
/// exactly `k` draws, no rejection loop).
pub fn sample_k_subset<R: Rng + ?Sized>(t: usize, k: usize, rng: &mut R) -> Result<Policy> {
    if k > t {
        return Err(Error::domain(format!("cannot choose {k} of {t} issues")));
    }
    let mut p = Policy::zeros(t);
    for j in t - k..t {
        let r = rng.gen_range(0..=j);
        if p.get(r) {
            p.set(j, true);
        } else {
            p.set(r, true);
        }
    }
    Ok(p)
}

/// `64·⌈n·t^{3/2} / max(Δ, 1)⌉`, computed exactly.
pub fn default_max_rounds(profile: &Profile) -> u64 {
    let n = profile.n() as u128;
    let t = profile.t() as u128;
    let delta = profile.delta().max(1) as u128;
    // Smallest r with (r·Δ)² >= n²·t³.
    let target = n * n * t * t * t;
    let guess = ((n as f64) * (t as f64).powf(1.5) / delta as f64).ceil() as u128;
    let mut r = guess.max(1);
    while (r * delta) * (r * delta) < target {
        r += 1;
    }
    while r > 1 && ((r - 1) * delta) * ((r - 1) * delta) >= target {
        r -= 1;
    }
    (64 * r).min(u64::MAX as u128) as u64
}

/// Runs up to `max_rounds` rounds. Returns `None` when no round produced a
/// winning policy, which can only happen outside the odd-`t`, `Δ > 0`
/// regime or by (vanishingly unlikely) bad luck inside it.
pub fn randomized_solve(profile: &Profile, seed: u64, max_rounds: u64) -> Result<Option<SolveReport>> {
    if max_rounds == 0 {
        return Err(Error::domain("max_rounds must be at least 1"));
    }
    let t = profile.t();
    let mut rng = rng_from_seed(seed);
    for round in 1..=max_rounds {
        for k in t / 2 + 1..=t {
            let p = sample_k_subset(t, k, &mut rng)?;
            if profile.tally(&p)?.balance > 0 {
                let mut report = SolveReport::new(profile, p, Method::Randomized)?;
                report.seed = Some(seed);
                report.rounds_used = Some(round);
                return Ok(Some(report));
            }
        }
    }
    Ok(None)
}
