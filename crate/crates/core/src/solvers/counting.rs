//! Exact conditional-expectation kernel.
//!
//! For a partial policy `p*` and a target weight `k`, the completions of
//! `p*` with exactly `k` ones are all equally likely. For one voter `v`,
//! a completion is determined (up to symmetry) by how many of the free
//! issues `v` approves get a one (`x`) and how many of the free issues `v`
//! rejects get a one (`y = k - |p*| - x`). Such a completion matches `v` on
//! `m + x + (β - y)` issues, where `m` counts matches on the decided issues
//! and `α`, `β` count free issues `v` approves / rejects. There are
//! `C(α, x)·C(β, y)` of them.
//!
//! All quantities are exact integers; expectations are carried as
//! numerator over the common denominator `C(t - |D|, k - |p*|)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::profile::{Policy, Profile};

/// A policy with some issues undecided.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPolicy {
    entries: Vec<Option<bool>>,
}

impl PartialPolicy {
    /// Nothing decided.
    pub fn empty(t: usize) -> Self {
        PartialPolicy { entries: vec![None; t] }
    }

    pub fn from_entries(entries: Vec<Option<bool>>) -> Self {
        PartialPolicy { entries }
    }

    pub fn from_policy(p: &Policy) -> Self {
        PartialPolicy {
            entries: p.iter().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Option<bool>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.entries[i]
    }

    /// Size of the domain `|D|`.
    pub fn decided(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    /// Decided ones `|p*|`.
    pub fn ones(&self) -> usize {
        self.entries.iter().filter(|e| **e == Some(true)).count()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// `p* ∪ {i ↦ value}`; `i` must be undecided.
    pub fn refine(&self, i: usize, value: bool) -> Result<PartialPolicy> {
        match self.entries.get(i) {
            None => Err(Error::domain(format!("issue {i} out of range"))),
            Some(Some(_)) => Err(Error::domain(format!("issue {i} is already decided"))),
            Some(None) => {
                let mut next = self.clone();
                next.entries[i] = Some(value);
                Ok(next)
            }
        }
    }

    /// The complete policy, if every issue is decided.
    pub fn to_policy(&self) -> Option<Policy> {
        let bits: Option<Vec<bool>> = self.entries.iter().copied().collect();
        bits.map(|b| Policy::from_bits(&b))
    }

    /// `(m, α, β)` for ballot `v`.
    fn profile_of(&self, v: &Policy) -> (usize, usize, usize) {
        let (mut m, mut alpha, mut beta) = (0, 0, 0);
        for (j, e) in self.entries.iter().enumerate() {
            match (e, v.get(j)) {
                (Some(b), vj) if *b == vj => m += 1,
                (Some(_), _) => {}
                (None, true) => alpha += 1,
                (None, false) => beta += 1,
            }
        }
        (m, alpha, beta)
    }
}

/// Completions of `p*` with weight `k` that one voter approves / disapproves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompletionCounts {
    pub approving: BigUint,
    pub disapproving: BigUint,
}

impl CompletionCounts {
    /// `|B₊| - |B₋|`.
    pub fn net(&self) -> BigInt {
        BigInt::from(self.approving.clone()) - BigInt::from(self.disapproving.clone())
    }
}

/// `E_{k,p*}[b]` as an exact numerator over a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledExpectation {
    pub numerator: BigInt,
    pub denominator: BigUint,
}

impl ScaledExpectation {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::from(self.denominator.clone()))
    }

    pub fn sign(&self) -> Ordering {
        match self.numerator.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Compares the represented values by cross-multiplication.
    pub fn cmp_value(&self, other: &ScaledExpectation) -> Ordering {
        let lhs = &self.numerator * BigInt::from(other.denominator.clone());
        let rhs = &other.numerator * BigInt::from(self.denominator.clone());
        lhs.cmp(&rhs)
    }
}

/// Which match-count condition [`count_refinements_with`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountingRule {
    /// A completion with `x` ones on `v`'s free approvals and `y` on its
    /// free rejections matches `v` on `m + x + (β - y)` issues.
    #[default]
    MatchCount,
    /// The literal condition `m + x + α + β - y > t/2` with
    /// `0 <= x, y <= α + β`. Kept only to demonstrate that it disagrees
    /// with direct enumeration; never used by the solvers.
    Literal,
}

/// `C(n, k)` for machine-size arguments, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_feasible(t: usize, p_star: &PartialPolicy, k: usize) -> Result<(usize, usize)> {
    Error::check_dims(t, p_star.len())?;
    let ones = p_star.ones();
    let free = t - p_star.decided();
    if k < ones || k > ones + free {
        return Err(Error::domain(format!(
            "weight {k} is unreachable from a partial policy with {ones} ones and {free} free issues"
        )));
    }
    Ok((free, k - ones))
}

/// Counts for one voter from the summary `(m, α, β)`, placing `r` ones.
fn counts_from_summary(t: usize, m: usize, alpha: usize, beta: usize, r: usize) -> CompletionCounts {
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    let x_lo = r.saturating_sub(beta);
    let x_hi = r.min(alpha);
    if x_lo <= x_hi {
        // Walk x upward; C(α, x) grows and C(β, r - x) shrinks by exact
        // rational steps.
        let mut ca = binomial(alpha, x_lo);
        let mut cb = binomial(beta, r - x_lo);
        for x in x_lo..=x_hi {
            let y = r - x;
            let matches = m + x + (beta - y);
            match (2 * matches).cmp(&t) {
                Ordering::Greater => plus += &ca * &cb,
                Ordering::Less => minus += &ca * &cb,
                Ordering::Equal => {}
            }
            if x < x_hi {
                ca = ca * (alpha - x) / (x + 1);
                cb = cb * y / (beta - y + 1);
            }
        }
    }
    CompletionCounts {
        approving: plus,
        disapproving: minus,
    }
}

fn counts_literal(t: usize, m: usize, alpha: usize, beta: usize, r: usize) -> CompletionCounts {
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    let span = alpha + beta;
    for x in 0..=span.min(r) {
        let y = r - x;
        if y > span {
            continue;
        }
        let weight = binomial(alpha, x) * binomial(beta, y);
        let lhs = 2 * (m + x + alpha + beta) as i64 - 2 * y as i64;
        match lhs.cmp(&(t as i64)) {
            Ordering::Greater => plus += weight,
            Ordering::Less => minus += weight,
            Ordering::Equal => {}
        }
    }
    CompletionCounts {
        approving: plus,
        disapproving: minus,
    }
}

/// Completions `p` of `p_star` with `|p| = k` that `v` approves and
/// disapproves.
pub fn count_refinements(v: &Policy, p_star: &PartialPolicy, k: usize) -> Result<CompletionCounts> {
    count_refinements_with(CountingRule::MatchCount, v, p_star, k)
}

pub fn count_refinements_with(
    rule: CountingRule,
    v: &Policy,
    p_star: &PartialPolicy,
    k: usize,
) -> Result<CompletionCounts> {
    let t = v.len();
    let (_, r) = check_feasible(t, p_star, k)?;
    let (m, alpha, beta) = p_star.profile_of(v);
    Ok(match rule {
        CountingRule::MatchCount => counts_from_summary(t, m, alpha, beta, r),
        CountingRule::Literal => counts_literal(t, m, alpha, beta, r),
    })
}

/// `Σ_i (|B₊^i| - |B₋^i|)`: the expectation numerator over `C(free, r)`.
pub(crate) fn scaled_numerator(profile: &Profile, p_star: &PartialPolicy, k: usize) -> Result<BigInt> {
    let t = profile.t();
    let (free, r) = check_feasible(t, p_star, k)?;
    // Voters sharing (m, α) share their counts.
    let mut by_summary: HashMap<(usize, usize), usize> = HashMap::new();
    for v in profile.rows() {
        let (m, alpha, _) = p_star.profile_of(v);
        *by_summary.entry((m, alpha)).or_default() += 1;
    }
    let mut total = BigInt::zero();
    for ((m, alpha), mult) in by_summary {
        let c = counts_from_summary(t, m, alpha, free - alpha, r);
        total += c.net() * BigInt::from(mult);
    }
    Ok(total)
}

/// Exact `E_{k,p*}[b_{p,P}]` over uniformly random completions of weight `k`.
pub fn scaled_expectation(profile: &Profile, p_star: &PartialPolicy, k: usize) -> Result<ScaledExpectation> {
    let (free, r) = check_feasible(profile.t(), p_star, k)?;
    Ok(ScaledExpectation {
        numerator: scaled_numerator(profile, p_star, k)?,
        denominator: binomial(free, r),
    })
}

/// Target weight chosen for the derandomized walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KChoice {
    pub k: usize,
    pub expectation: ScaledExpectation,
}

/// The weight `k ∈ {⌊t/2⌋+1, …, t}` maximizing `E_k[b]`; ties go to the
/// larger `k`.
pub fn choose_k(profile: &Profile) -> Result<KChoice> {
    let t = profile.t();
    let empty = PartialPolicy::empty(t);
    let mut best: Option<KChoice> = None;
    for k in t / 2 + 1..=t {
        let e = scaled_expectation(profile, &empty, k)?;
        let better = match &best {
            None => true,
            Some(b) => e.cmp_value(&b.expectation) != Ordering::Less,
        };
        if better {
            best = Some(KChoice { k, expectation: e });
        }
    }
    best.ok_or_else(|| Error::contract("no candidate weight"))
}
