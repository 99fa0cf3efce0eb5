//! Approval profiles, policies, tallies and normalization.
//!
//! A profile is an `n × t` binary matrix: row `i` is voter `i`'s ballot and
//! bit `j` is set iff the voter approves issue `j`. Ballots and policies are
//! both stored as packed little-endian bit vectors (issue `j` lives in bit
//! `j % 64` of word `j / 64`), so distances reduce to XOR plus popcount.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn word_count(t: usize) -> usize {
    t.div_ceil(WORD)
}

/// A `t`-bit yes/no vector: a ballot or a policy proposal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Policy {
    len: usize,
    words: Vec<u64>,
}

impl Policy {
    pub fn zeros(t: usize) -> Self {
        Policy {
            len: t,
            words: vec![0; word_count(t)],
        }
    }

    pub fn ones(t: usize) -> Self {
        let mut p = Policy::zeros(t);
        for w in &mut p.words {
            *w = u64::MAX;
        }
        p.clear_tail();
        p
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Policy::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            p.set(j, b);
        }
        p
    }

    /// Policy whose issue `j` is bit `j` of `index`. Requires `t <= 64`.
    pub fn from_index(t: usize, index: u64) -> Self {
        assert!(t <= WORD, "from_index needs t <= 64");
        let mut p = Policy::zeros(t);
        if t > 0 {
            p.words[0] = index;
            p.clear_tail();
        }
        p
    }

    /// Inverse of [`Policy::from_index`]; `None` when `t > 64`.
    pub fn to_index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Issue count `t`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len, "issue {j} out of range for t = {}", self.len);
        self.words[j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "issue {j} out of range for t = {}", self.len);
        let mask = 1u64 << (j % WORD);
        if value {
            self.words[j / WORD] |= mask;
        } else {
            self.words[j / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, j: usize) {
        let v = self.get(j);
        self.set(j, !v);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    /// Number of approved issues, `|p|`.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Approved minus disapproved issues, `2|p| - t`.
    pub fn self_balance(&self) -> i64 {
        2 * self.count_ones() as i64 - self.len as i64
    }

    pub fn opposite(&self) -> Policy {
        let mut p = Policy {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        p.clear_tail();
        p
    }

    pub fn xor(&self, other: &Policy) -> Result<Policy> {
        Error::check_dims(self.len, other.len)?;
        Ok(Policy {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Concatenates `other`'s issues after this policy's issues.
    pub fn concat(&self, other: &Policy) -> Policy {
        let mut bits: Vec<bool> = self.iter().collect();
        bits.extend(other.iter());
        Policy::from_bits(&bits)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Policy({self})")
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(Error::parse(1, i + 1, format!("expected '0' or '1', found {other:?}"))),
            }
        }
        Ok(Policy::from_bits(&bits))
    }
}

impl Serialize for Policy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Policy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of positions where `x` and `y` differ.
pub fn hamming(x: &Policy, y: &Policy) -> Result<usize> {
    Error::check_dims(x.len, y.len)?;
    Ok(hamming_words(&x.words, &y.words))
}

#[inline]
pub(crate) fn hamming_words(x: &[u64], y: &[u64]) -> usize {
    x.iter().zip(y).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
}

/// Matches minus mismatches between ballot `v` and policy `p`: `t - 2 d_H(v, p)`.
/// Positive iff the voter approves, negative iff they disapprove, zero iff
/// they abstain.
pub fn voter_balance(v: &Policy, p: &Policy) -> Result<i64> {
    Ok(v.len as i64 - 2 * hamming(v, p)? as i64)
}

/// Outcome of putting one policy to a vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tally {
    pub approvals: usize,
    pub disapprovals: usize,
    pub abstentions: usize,
    /// `approvals - disapprovals`.
    pub balance: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Winning,
    Tying,
    Losing,
}

impl Tally {
    pub fn verdict(&self) -> Verdict {
        match self.balance.signum() {
            1 => Verdict::Winning,
            0 => Verdict::Tying,
            _ => Verdict::Losing,
        }
    }

    pub fn is_nonlosing(&self) -> bool {
        self.balance >= 0
    }
}

/// Voter approval matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    t: usize,
    rows: Vec<Policy>,
}

impl Profile {
    /// Builds a profile from ballots. Rejects `n = 0`, `t = 0` and ragged rows.
    pub fn new(rows: Vec<Policy>) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::domain("profile needs at least one voter"))?;
        let t = first.len();
        if t == 0 {
            return Err(Error::domain("profile needs at least one issue"));
        }
        for r in &rows {
            Error::check_dims(t, r.len())?;
        }
        Ok(Profile { t, rows })
    }

    /// Convenience constructor from `0`/`1` strings.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().parse())
            .collect::<Result<Vec<Policy>>>()?;
        Profile::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn rows(&self) -> &[Policy] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Policy {
        &self.rows[i]
    }

    pub fn get(&self, voter: usize, issue: usize) -> bool {
        self.rows[voter].get(issue)
    }

    /// Number of voters approving issue `j`.
    pub fn column_ones(&self, j: usize) -> usize {
        self.rows.iter().filter(|r| r.get(j)).count()
    }

    /// Column `j` as an `n`-bit vector (voter `i` at bit `i`).
    pub fn column(&self, j: usize) -> Policy {
        Policy::from_bits(&self.rows.iter().map(|r| r.get(j)).collect::<Vec<_>>())
    }

    /// Per-issue margin: approvals minus disapprovals in the column.
    pub fn column_margins(&self) -> Vec<i64> {
        (0..self.t)
            .map(|j| 2 * self.column_ones(j) as i64 - self.n() as i64)
            .collect()
    }

    /// Total ones minus total zeros in the matrix.
    pub fn delta(&self) -> i64 {
        let ones: usize = self.rows.iter().map(Policy::count_ones).sum();
        2 * ones as i64 - (self.n() * self.t) as i64
    }

    pub fn tally(&self, p: &Policy) -> Result<Tally> {
        Error::check_dims(self.t, p.len())?;
        Ok(self.tally_words(p.words()))
    }

    /// Tally against a packed policy; the caller guarantees the word count.
    #[inline]
    pub(crate) fn tally_words(&self, p: &[u64]) -> Tally {
        let t = self.t;
        let (mut a, mut d) = (0usize, 0usize);
        for r in &self.rows {
            let twice = 2 * hamming_words(&r.words, p);
            if twice < t {
                a += 1;
            } else if twice > t {
                d += 1;
            }
        }
        Tally {
            approvals: a,
            disapprovals: d,
            abstentions: self.rows.len() - a - d,
            balance: a as i64 - d as i64,
        }
    }

    /// Balance only, for policies with `t <= 64` encoded as an index.
    #[inline]
    pub(crate) fn balance_of_index(&self, index: u64) -> i64 {
        let t = self.t;
        let mut b = 0i64;
        for r in &self.rows {
            let twice = 2 * (r.words[0] ^ index).count_ones() as usize;
            b += (twice < t) as i64 - (twice > t) as i64;
        }
        b
    }

    /// True iff every voter approves the policy at `index` (`t <= 64`).
    #[inline]
    pub(crate) fn unanimous_index(&self, index: u64) -> bool {
        let t = self.t;
        self.rows
            .iter()
            .all(|r| 2 * ((r.words[0] ^ index).count_ones() as usize) < t)
    }

    /// Voters of `self` followed by voters of `other`.
    pub fn vstack(&self, other: &Profile) -> Result<Profile> {
        Error::check_dims(self.t, other.t)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Profile::new(rows)
    }

    /// Negates every column where `mask` is set.
    pub fn flip_columns(&self, mask: &Policy) -> Result<Profile> {
        Error::check_dims(self.t, mask.len())?;
        let rows = self.rows.iter().map(|r| r.xor(mask)).collect::<Result<Vec<_>>>()?;
        Ok(Profile { t: self.t, rows })
    }

    /// Parses the line-oriented text format: a header `"n t"`, then exactly
    /// `n` rows of `t` characters from `{0,1}`. Lines starting with `#` are
    /// comments. Trailing whitespace and carriage returns are rejected.
    pub fn parse_text(text: &str) -> Result<Profile> {
        let mut header: Option<(usize, usize)> = None;
        let mut rows: Vec<Policy> = Vec::new();
        let lines: Vec<&str> = text.split('\n').collect();
        let mut last_line = 0;
        for (idx, &line) in lines.iter().enumerate() {
            let lineno = idx + 1;
            last_line = lineno;
            if line.is_empty() && lineno == lines.len() {
                // final LF terminator
                break;
            }
            if line.starts_with('#') {
                continue;
            }
            if let Some(pos) = line.find(|c: char| c.is_whitespace() && c != ' ') {
                return Err(Error::parse(lineno, pos + 1, "unexpected whitespace character"));
            }
            if line.ends_with(' ') {
                return Err(Error::parse(lineno, line.len(), "trailing whitespace"));
            }
            if line.is_empty() {
                return Err(Error::parse(lineno, 1, "empty line"));
            }
            match header {
                None => header = Some(parse_header(line, lineno)?),
                Some((n, t)) => {
                    if rows.len() == n {
                        return Err(Error::parse(lineno, 1, format!("expected {n} rows, found more")));
                    }
                    let mut bits = Vec::with_capacity(t);
                    for (col, c) in line.chars().enumerate() {
                        match c {
                            '0' => bits.push(false),
                            '1' => bits.push(true),
                            other => {
                                return Err(Error::parse(
                                    lineno,
                                    col + 1,
                                    format!("expected '0' or '1', found {other:?}"),
                                ))
                            }
                        }
                    }
                    if bits.len() != t {
                        return Err(Error::parse(
                            lineno,
                            bits.len().min(t) + 1,
                            format!("expected {t} columns, found {}", bits.len()),
                        ));
                    }
                    rows.push(Policy::from_bits(&bits));
                }
            }
        }
        let (n, _) = header.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing \"n t\" header"))?;
        if rows.len() != n {
            return Err(Error::parse(
                last_line.max(1),
                1,
                format!("expected {n} rows, found {}", rows.len()),
            ));
        }
        Profile::new(rows)
    }

    /// Canonical text form: header plus one LF-terminated row per voter.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.t);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut parts = line.split(' ');
    let mut field = |name: &str, offset: usize| -> Result<(usize, usize)> {
        let tok = parts
            .next()
            .ok_or_else(|| Error::parse(lineno, offset + 1, format!("missing {name}")))?;
        if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(
                lineno,
                offset + 1,
                format!("{name} must be a decimal count"),
            ));
        }
        let v = tok
            .parse::<usize>()
            .map_err(|e| Error::parse(lineno, offset + 1, format!("{name}: {e}")))?;
        Ok((v, offset + tok.len() + 1))
    };
    let (n, off) = field("n", 0)?;
    let (t, off) = field("t", off)?;
    if parts.next().is_some() {
        return Err(Error::parse(lineno, off + 1, "header must be exactly \"n t\""));
    }
    if n == 0 || t == 0 {
        return Err(Error::parse(lineno, 1, "n and t must be at least 1"));
    }
    Ok((n, t))
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| r.to_string())).finish()
    }
}

/// Free-function form of [`Profile::tally`].
pub fn tally(profile: &Profile, p: &Policy) -> Result<Tally> {
    profile.tally(p)
}

/// Issue-wise majority. Exact ties resolve to 1.
pub fn iwm(profile: &Profile) -> Policy {
    let n = profile.n();
    let bits: Vec<bool> = (0..profile.t()).map(|j| 2 * profile.column_ones(j) >= n).collect();
    Policy::from_bits(&bits)
}

/// A profile rewritten so that its issue-wise majority is all-ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationRecord {
    /// Columns that were negated.
    pub flipped: Policy,
    pub normalized: Profile,
    /// Ones minus zeros of the normalized profile; never negative.
    pub delta: i64,
}

pub fn normalize(profile: &Profile) -> NormalizationRecord {
    let flipped = iwm(profile).opposite();
    let normalized = profile.flip_columns(&flipped).expect("mask has the profile's width");
    let delta = normalized.delta();
    NormalizationRecord {
        flipped,
        normalized,
        delta,
    }
}

/// Maps a policy of the normalized instance back to the original polarity.
pub fn denormalize_policy(p: &Policy, record: &NormalizationRecord) -> Result<Policy> {
    p.xor(&record.flipped)
}
