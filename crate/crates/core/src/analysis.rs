//! Exact instruments for the probabilistic identities, the class-swapping
//! bijections and the geometry of the non-losing set.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{fold_range, map_items, Enumeration};
use crate::profile::{voter_balance, Policy, Profile};
use crate::solvers::binomial;

/// Default issue cap for the `B_m` enumerations.
pub const EXPECTATION_CAP: usize = 20;
/// Default issue cap for the hypercube scans.
pub const HYPERCUBE_CAP: usize = 24;

/// Reduced fraction with a positive denominator. Serializes as
/// `{"num": "...", "den": "..."}` with decimal strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Panics on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl Serialize for ExactRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRepr {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RationalRepr::deserialize(d)?;
        let num: BigInt = r.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = r.den.parse().map_err(D::Error::custom)?;
        if !den.is_positive() {
            return Err(D::Error::custom("denominator must be positive"));
        }
        Ok(ExactRational::new(num, den))
    }
}

/// Class of a policy relative to one ballot: the first digit is the sign of
/// `b_p`, the second the sign of `b_{v,p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProposalClass {
    T00,
    T01,
    T10,
    T11,
    Degenerate,
}

impl ProposalClass {
    fn from_signs(bp: i64, bvp: i64) -> Self {
        match (bp.signum(), bvp.signum()) {
            (0, _) | (_, 0) => ProposalClass::Degenerate,
            (-1, -1) => ProposalClass::T00,
            (-1, 1) => ProposalClass::T01,
            (1, -1) => ProposalClass::T10,
            _ => ProposalClass::T11,
        }
    }
}

pub fn classify(v: &Policy, p: &Policy) -> Result<ProposalClass> {
    let bvp = voter_balance(v, p)?;
    Ok(ProposalClass::from_signs(p.self_balance(), bvp))
}

fn require_nondegenerate(v: &Policy, p: &Policy) -> Result<ProposalClass> {
    match classify(v, p)? {
        ProposalClass::Degenerate => Err(Error::domain(format!(
            "policy {p} is degenerate relative to ballot {v}"
        ))),
        c => Ok(c),
    }
}

/// Flips `p` on the issues `v` rejects.
pub fn apply_f0(v: &Policy, p: &Policy) -> Result<Policy> {
    require_nondegenerate(v, p)?;
    p.xor(&v.opposite())
}

/// Flips `p` on the issues `v` approves.
pub fn apply_f1(v: &Policy, p: &Policy) -> Result<Policy> {
    require_nondegenerate(v, p)?;
    p.xor(v)
}

/// Class-preserving involution: `f0` on `T00`/`T11`, `f1` on `T01`/`T10`.
pub fn apply_fv(v: &Policy, p: &Policy) -> Result<Policy> {
    match require_nondegenerate(v, p)? {
        ProposalClass::T00 | ProposalClass::T11 => p.xor(&v.opposite()),
        _ => p.xor(v),
    }
}

/// `|B_m|`: policies with strictly more than `t/2` ones.
pub fn majority_set_size(t: usize) -> BigUint {
    let all = BigUint::one() << (t - 1);
    if t % 2 == 1 {
        all
    } else {
        all - binomial(t, t / 2) / 2u32
    }
}

/// Closed form `Δ · C(t-1, ⌊t/2⌋) / |B_m|`.
pub fn expectation_x_closed(profile: &Profile) -> ExactRational {
    let t = profile.t();
    let num = BigInt::from(profile.delta()) * BigInt::from(binomial(t - 1, t / 2));
    ExactRational::new(num, BigInt::from(majority_set_size(t)))
}

/// Averages over `B_m` of `X(p) = Σ_i b_{v_i,p}` and `Y(p) = b_p · b_{p,P}`.
pub fn expectation_xy_bruteforce(profile: &Profile, cfg: &Enumeration) -> Result<(ExactRational, ExactRational)> {
    let t = profile.t();
    cfg.check(t)?;
    let rows: Vec<u64> = profile.rows().iter().map(|r| r.words()[0]).collect();
    let (xs, ys, count) = fold_range(
        cfg.exec,
        0..1u64 << t,
        (0i128, 0i128, 0u64),
        |(xs, ys, count), idx| {
            let w = idx.count_ones() as i64;
            if 2 * w as usize <= t {
                return (xs, ys, count);
            }
            let mut x = 0i64;
            let mut b = 0i64;
            for &r in &rows {
                let bv = t as i64 - 2 * (r ^ idx).count_ones() as i64;
                x += bv;
                b += bv.signum();
            }
            let bp = 2 * w - t as i64;
            (xs + x as i128, ys + (bp * b) as i128, count + 1)
        },
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    );
    Ok((ExactRational::new(xs, count), ExactRational::new(ys, count)))
}

/// `P_k(b > 0)` for a uniformly random policy with exactly `k` ones.
pub fn exact_success_probability(profile: &Profile, k: usize, cfg: &Enumeration) -> Result<ExactRational> {
    let t = profile.t();
    if k <= t / 2 || k > t {
        return Err(Error::domain(format!("k must lie in ({}, {t}], got {k}", t / 2)));
    }
    cfg.check(t)?;
    let wins = fold_range(
        cfg.exec,
        0..1u64 << t,
        0u64,
        |acc, idx| acc + (idx.count_ones() as usize == k && profile.balance_of_index(idx) > 0) as u64,
        |a, b| a + b,
    );
    Ok(ExactRational::new(wins, BigInt::from(binomial(t, k))))
}

/// `(k, P_k(b > 0))` for every `k ∈ {⌊t/2⌋+1, …, t}`.
pub fn success_probabilities(profile: &Profile, cfg: &Enumeration) -> Result<Vec<(usize, ExactRational)>> {
    let t = profile.t();
    (t / 2 + 1..=t)
        .map(|k| Ok((k, exact_success_probability(profile, k, cfg)?)))
        .collect()
}

/// Rational enclosure of π: consecutive continued-fraction convergents.
const PI_LOWER: (u64, u64) = (833_719, 265_381);
const PI_UPPER: (u64, u64) = (1_146_408, 364_913);

/// Outcome of comparing a probability with `√(2/π) · Δ / (n · t^{3/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundCheck {
    Holds,
    Fails,
    /// Too close to the bound for the rational enclosure of π to decide.
    Undecided,
}

/// Decides `P ≥ √(2/π) · Δ / (n · t^{3/2})` exactly by squaring:
/// `P² · n² · t³ · π ≥ 2Δ²`.
pub fn markov_bound_check(p: &ExactRational, n: usize, t: usize, delta: i64) -> BoundCheck {
    if delta <= 0 {
        return BoundCheck::Holds;
    }
    if p.as_rational().is_negative() {
        return BoundCheck::Fails;
    }
    let scale = BigInt::from(n).pow(2) * BigInt::from(t).pow(3);
    let lhs = p.as_rational() * p.as_rational() * BigRational::from_integer(scale);
    let rhs = BigRational::from_integer(BigInt::from(2) * BigInt::from(delta).pow(2));
    let with = |(a, b): (u64, u64)| &lhs * BigRational::new(a.into(), b.into());
    if with(PI_LOWER) >= rhs {
        BoundCheck::Holds
    } else if with(PI_UPPER) < rhs {
        BoundCheck::Fails
    } else {
        BoundCheck::Undecided
    }
}

/// Components of the non-losing policies under single-bit flips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub nonlosing_count: u64,
    pub component_count: u64,
    pub largest_component: u64,
    pub all_isolated: bool,
    /// Smallest-encoding member of the largest component (ties go to the
    /// component with the smaller representative).
    pub largest_representative: Option<Policy>,
}

fn nonlosing_bitmap(profile: &Profile, cfg: &Enumeration) -> Vec<u64> {
    let t = profile.t();
    let total = 1u64 << t;
    let words: Vec<u64> = (0..total.div_ceil(64)).collect();
    map_items(cfg.exec, &words, |&w| {
        let lo = w * 64;
        let hi = (lo + 64).min(total);
        (lo..hi).fold(0u64, |acc, idx| {
            acc | ((profile.balance_of_index(idx) >= 0) as u64) << (idx - lo)
        })
    })
}

pub fn nonlosing_components(profile: &Profile, cfg: &Enumeration) -> Result<ComponentReport> {
    let t = profile.t();
    cfg.check(t)?;
    let member = nonlosing_bitmap(profile, cfg);
    let test = |bits: &[u64], i: u64| bits[(i / 64) as usize] >> (i % 64) & 1 == 1;
    let mut seen = vec![0u64; member.len()];
    let mut stack = Vec::new();
    let mut report = ComponentReport {
        nonlosing_count: 0,
        component_count: 0,
        largest_component: 0,
        all_isolated: true,
        largest_representative: None,
    };
    for start in 0..1u64 << t {
        if !test(&member, start) || test(&seen, start) {
            continue;
        }
        seen[(start / 64) as usize] |= 1 << (start % 64);
        stack.push(start);
        let mut size = 0u64;
        while let Some(cur) = stack.pop() {
            size += 1;
            for j in 0..t {
                let nb = cur ^ (1 << j);
                if test(&member, nb) && !test(&seen, nb) {
                    seen[(nb / 64) as usize] |= 1 << (nb % 64);
                    stack.push(nb);
                }
            }
        }
        report.nonlosing_count += size;
        report.component_count += 1;
        if size > report.largest_component {
            report.largest_component = size;
            report.largest_representative = Some(Policy::from_index(t, start));
        }
    }
    report.all_isolated = report.largest_component <= 1;
    Ok(report)
}

/// Diameter of the ballot set and the integer test `(h + t)² < 2t²`,
/// i.e. `h < (√2 - 1) t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cohesion {
    pub h: usize,
    pub iwm_safe: bool,
}

pub fn cohesion_check(profile: &Profile) -> Cohesion {
    let rows = profile.rows();
    let mut h = 0;
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            h = h.max(crate::profile::hamming_words(a.words(), b.words()));
        }
    }
    let t = profile.t();
    Cohesion {
        h,
        iwm_safe: (h + t) * (h + t) < 2 * t * t,
    }
}

/// Cross-tabulation of policy weight parity against winning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub odd_winning: u64,
    pub odd_not_winning: u64,
    pub even_winning: u64,
    pub even_not_winning: u64,
    /// True iff a policy wins exactly when its weight is odd.
    pub wins_iff_odd: bool,
}

pub fn parity_classification(profile: &Profile, cfg: &Enumeration) -> Result<ParityReport> {
    let t = profile.t();
    cfg.check(t)?;
    let c = fold_range(
        cfg.exec,
        0..1u64 << t,
        [0u64; 4],
        |mut c, idx| {
            let odd = idx.count_ones() % 2 == 1;
            let wins = profile.balance_of_index(idx) > 0;
            c[(odd as usize) * 2 + (!wins as usize)] += 1;
            c
        },
        |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
    );
    Ok(ParityReport {
        odd_winning: c[2],
        odd_not_winning: c[3],
        even_winning: c[0],
        even_not_winning: c[1],
        wins_iff_odd: c[3] == 0 && c[0] == 0,
    })
}
