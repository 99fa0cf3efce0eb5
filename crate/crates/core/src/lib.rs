//! Policies that survive a majority vote while staying close to issue-wise
//! majority.
//!
//! A profile is an `n × t` approval matrix. A voter approves a policy when
//! it agrees with their ballot on more than half of the issues, and a policy
//! survives the vote when approvals are at least disapprovals. The crate
//! finds surviving policies that agree with the (normalized, all-ones)
//! issue-wise majority on at least `⌊t/2⌋ + 1` issues, and ships the
//! generators, integer programs and exact analysis tools used to check the
//! underlying combinatorics.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod gadgets;
pub mod ilp;
pub mod profile;
pub mod solvers;

pub use error::{Error, Result};
pub use exec::{Enumeration, Execution};
pub use profile::{
    denormalize_policy, hamming, iwm, normalize, tally, voter_balance, NormalizationRecord, Policy, Profile, Tally,
    Verdict,
};
pub use solvers::{derandomized_solve, randomized_solve, Method, SolveReport};
