//! Proposal finders: the exhaustive oracle, the round-based sampler and the
//! conditional-expectation walk, all sharing the exact counting kernel.

mod brute;
mod counting;
mod derandomized;
mod randomized;

pub use brute::{
    brute_force, find_with_weight_at_least, indices_of_weight, BruteForceOutcome, Requirement, BRUTE_FORCE_CAP,
};
pub use counting::{
    binomial, choose_k, count_refinements, count_refinements_with, scaled_expectation, CompletionCounts, CountingRule,
    KChoice, PartialPolicy, ScaledExpectation,
};
pub use derandomized::derandomized_solve;
pub use randomized::{default_max_rounds, randomized_solve, rng_from_seed, sample_k_subset, SolverRng};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Policy, Profile, Tally};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Randomized,
    Derandomized,
}

/// A found policy with its vote outcome and provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub policy: Policy,
    /// `|p|` in the normalized instance: agreements with issue-wise majority.
    pub agreements: usize,
    #[serde(flatten)]
    pub tally: Tally,
    pub method: Method,
    pub seed: Option<u64>,
    pub rounds_used: Option<u64>,
    pub k_star: Option<usize>,
}

impl SolveReport {
    pub(crate) fn new(profile: &Profile, policy: Policy, method: Method) -> Result<Self> {
        let tally = profile.tally(&policy)?;
        Ok(SolveReport {
            agreements: policy.count_ones(),
            policy,
            tally,
            method,
            seed: None,
            rounds_used: None,
            k_star: None,
        })
    }

    /// Re-tallies the policy and checks it against the stored tally.
    pub fn verify(&self, profile: &Profile) -> Result<()> {
        let fresh = profile.tally(&self.policy)?;
        if fresh != self.tally {
            return Err(Error::contract(format!(
                "stored tally {:?} disagrees with recomputed {:?}",
                self.tally, fresh
            )));
        }
        Ok(())
    }
}

/// Brute-force solve: the qualifying non-losing policy with the most
/// agreements (smallest encoding among ties).
pub fn brute_solve(profile: &Profile, cfg: &crate::exec::Enumeration) -> Result<Option<SolveReport>> {
    let out = brute_force(profile, Requirement::NonLosing, 0, cfg)?;
    out.best
        .map(|p| SolveReport::new(profile, p, Method::Brute))
        .transpose()
}
