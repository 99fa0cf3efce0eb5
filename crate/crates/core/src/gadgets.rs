//! Generators for named profile families and the two hardness reductions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Policy, Profile};

/// The `(2t - 1) × t` profile where voter `i < t` approves only issue `i`
/// and the remaining `t - 1` voters approve everything. Every policy with
/// `|p| >= ⌊t/2⌋ + 2` has balance exactly `-1` on it.
pub fn anscombe_gadget(t: usize) -> Result<Profile> {
    if t < 2 {
        return Err(Error::domain(format!("anscombe gadget needs t >= 2, got {t}")));
    }
    let mut rows = Vec::with_capacity(2 * t - 1);
    for i in 0..t {
        let mut r = Policy::zeros(t);
        r.set(i, true);
        rows.push(r);
    }
    rows.extend(std::iter::repeat_n(Policy::ones(t), t - 1));
    Profile::new(rows)
}

/// The `t × t` profile where voter `i` approves the cyclic interval
/// `i, i+1, …, i+⌊t/2⌋ (mod t)`. A policy wins on it iff `|p|` is odd.
pub fn cyclic_profile(t: usize) -> Result<Profile> {
    if t < 3 || t.is_multiple_of(2) {
        return Err(Error::domain(format!("cyclic profile needs odd t >= 3, got {t}")));
    }
    let rows = (0..t)
        .map(|i| {
            let mut r = Policy::zeros(t);
            for d in 0..=t / 2 {
                r.set((i + d) % t, true);
            }
            r
        })
        .collect();
    Profile::new(rows)
}

/// Appends `copies` copies of the anscombe gadget below `profile`
/// (`copies` defaults to `n`). With `n` copies, a policy `p` with
/// `|p| >= ⌊t/2⌋ + 2` is unanimously winning in the input iff it is
/// non-losing in the output. Use `n - 1` copies to flip the voter parity.
pub fn lift_una_to_wot(profile: &Profile, copies: Option<usize>) -> Result<Profile> {
    if !crate::profile::iwm(profile).iter().all(|b| b) {
        return Err(Error::domain(
            "lifting expects a normalized profile (all-ones majority)",
        ));
    }
    let gadget = anscombe_gadget(profile.t())?;
    let copies = copies.unwrap_or(profile.n());
    let mut rows = profile.rows().to_vec();
    for _ in 0..copies {
        rows.extend(gadget.rows().iter().cloned());
    }
    Profile::new(rows)
}

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are stored with the smaller endpoint first, in input order.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) has an endpoint >= {vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if out.contains(&e) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
            out.push(e);
        }
        Ok(Graph {
            vertex_count,
            edges: out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parses `"n m"` followed by `m` lines `"u v"` (0-based vertices).
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .split('\n')
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let pair = |lineno: usize, line: &str| -> Result<(usize, usize)> {
            let parts: Vec<&str> = line.split(' ').collect();
            if parts.len() != 2 {
                return Err(Error::parse(lineno, 1, "expected two space-separated integers"));
            }
            let num = |s: &str, col: usize| {
                s.parse::<usize>()
                    .map_err(|e| Error::parse(lineno, col, format!("{s:?}: {e}")))
            };
            Ok((num(parts[0], 1)?, num(parts[1], parts[0].len() + 2)?))
        };
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing \"n m\" header"))?;
        let (n, m) = pair(lineno, header)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(lineno + edges.len() + 1, 1, format!("expected {m} edges")))?;
            edges.push(pair(lineno, line)?);
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, 1, format!("expected {m} edges, found more")));
        }
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.vertex_count, self.edges.len());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Size of a maximum independent set, by exhaustive search (`n <= 25`).
    pub fn max_independent_set_brute(&self) -> usize {
        assert!(
            self.vertex_count <= 25,
            "brute-force independent set is for tiny graphs"
        );
        let masks: Vec<(u32, u32)> = self.edges.iter().map(|&(u, v)| (1u32 << u, 1u32 << v)).collect();
        (0u32..1 << self.vertex_count)
            .filter(|s| masks.iter().all(|(a, b)| s & a == 0 || s & b == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// Label of a column in a reduced profile. Indices follow the 1-based
/// naming `x_1, x_1', …, a_0, a_1, a_1', …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnRole {
    Vertex(usize),
    VertexCopy(usize),
    Anchor,
    Pad(usize),
    PadCopy(usize),
}

impl fmt::Display for ColumnRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRole::Vertex(i) => write!(f, "x_{i}"),
            ColumnRole::VertexCopy(i) => write!(f, "x_{i}'"),
            ColumnRole::Anchor => write!(f, "a_0"),
            ColumnRole::Pad(j) => write!(f, "a_{j}"),
            ColumnRole::PadCopy(j) => write!(f, "a_{j}'"),
        }
    }
}

impl Serialize for ColumnRole {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Result of [`reduce_independent_set`].
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub profile: Profile,
    /// `⌊t/2⌋ + 2` for the produced `t`.
    pub agreement_threshold: usize,
    pub column_roles: Vec<ColumnRole>,
    pub ell: usize,
}

/// JSON sidecar written next to a reduced profile.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionSidecar<'a> {
    pub vertex_count: usize,
    pub k: usize,
    pub ell: usize,
    pub voters: usize,
    pub issues: usize,
    pub agreement_threshold: usize,
    pub column_roles: &'a [ColumnRole],
}

impl ReductionOutput {
    pub fn sidecar(&self, vertex_count: usize, k: usize) -> ReductionSidecar<'_> {
        ReductionSidecar {
            vertex_count,
            k,
            ell: self.ell,
            voters: self.profile.n(),
            issues: self.profile.t(),
            agreement_threshold: self.agreement_threshold,
            column_roles: &self.column_roles,
        }
    }
}

/// Column layout of the reduction: `x_i ↦ 2i`, `x_i' ↦ 2i + 1` for
/// `i < n`, then `a_0 ↦ 2n`, `a_j ↦ 2n + 2j - 1`, `a_j' ↦ 2n + 2j`.
struct Layout {
    n: usize,
    ell: usize,
}

impl Layout {
    fn t(&self) -> usize {
        2 * self.n + 2 * self.ell + 1
    }
    fn x(&self, i: usize) -> usize {
        2 * i
    }
    fn xp(&self, i: usize) -> usize {
        2 * i + 1
    }
    fn a0(&self) -> usize {
        2 * self.n
    }
    fn a(&self, j: usize) -> usize {
        2 * self.n + 2 * j - 1
    }
    fn ap(&self, j: usize) -> usize {
        2 * self.n + 2 * j
    }
    fn anchor_columns(&self) -> std::ops::Range<usize> {
        self.a0()..self.t()
    }
    fn roles(&self) -> Vec<ColumnRole> {
        let mut roles = Vec::with_capacity(self.t());
        for i in 1..=self.n {
            roles.push(ColumnRole::Vertex(i));
            roles.push(ColumnRole::VertexCopy(i));
        }
        roles.push(ColumnRole::Anchor);
        for j in 1..=self.ell {
            roles.push(ColumnRole::Pad(j));
            roles.push(ColumnRole::PadCopy(j));
        }
        roles
    }
}

fn tally_columns(balance: &mut [i64], row: &Policy) {
    for (j, b) in balance.iter_mut().enumerate() {
        *b += if row.get(j) { 1 } else { -1 };
    }
}

/// A ±1 coefficient vector; the voter approves exactly the `+1` issues.
struct Inequality(Vec<i8>);

impl Inequality {
    fn new(t: usize) -> Self {
        Inequality(vec![0; t])
    }
    fn put(&mut self, col: usize, sign: i8) {
        debug_assert_eq!(self.0[col], 0, "column {col} used twice");
        self.0[col] = sign;
    }
    /// `sign·Σ_{j≠skip}(x_j - x_j')`.
    fn vertex_pairs(&mut self, l: &Layout, sign: i8, skip: &[usize]) {
        for j in (0..l.n).filter(|j| !skip.contains(j)) {
            self.put(l.x(j), sign);
            self.put(l.xp(j), -sign);
        }
    }
    /// `sign·Σ_j(a_j - a_j')`.
    fn pad_pairs(&mut self, l: &Layout, sign: i8) {
        for j in 1..=l.ell {
            self.put(l.a(j), sign);
            self.put(l.ap(j), -sign);
        }
    }
    fn into_ballot(self) -> Policy {
        debug_assert!(self.0.iter().all(|&c| c == 1 || c == -1));
        Policy::from_bits(&self.0.iter().map(|&c| c > 0).collect::<Vec<_>>())
    }
}

/// The two Set-1 rows forcing anchor column `alpha` to 1. The remaining
/// anchor columns, in column order, split into `A_0` (first `ℓ`) and `A_1`.
fn anchor_rows(l: &Layout, alpha: usize) -> [Policy; 2] {
    let rest: Vec<usize> = l.anchor_columns().filter(|&c| c != alpha).collect();
    let (a0, a1) = rest.split_at(l.ell);
    let build = |sign: i8| {
        let mut q = Inequality::new(l.t());
        q.put(alpha, 1);
        a0.iter().for_each(|&c| q.put(c, sign));
        a1.iter().for_each(|&c| q.put(c, -sign));
        q.vertex_pairs(l, sign, &[]);
        q.into_ballot()
    };
    [build(1), build(-1)]
}

/// The four Set-2 rows forcing `x_i = x_i'`.
fn copy_rows(l: &Layout, i: usize) -> [Policy; 4] {
    let build = |own: i8, rest: i8| {
        let mut q = Inequality::new(l.t());
        q.put(l.x(i), own);
        q.put(l.xp(i), -own);
        q.vertex_pairs(l, rest, &[i]);
        q.put(l.a0(), 1);
        q.pad_pairs(l, rest);
        q.into_ballot()
    };
    [build(1, 1), build(1, -1), build(-1, 1), build(-1, -1)]
}

/// Set-3 row for edge `(u, v)`: not both endpoints selected.
fn edge_row(l: &Layout, u: usize, v: usize) -> Policy {
    let mut q = Inequality::new(l.t());
    for c in [l.x(u), l.x(v), l.xp(u), l.xp(v)] {
        q.put(c, -1);
    }
    q.put(l.a0(), 1);
    q.vertex_pairs(l, 1, &[u, v]);
    q.pad_pairs(l, 1);
    q.into_ballot()
}

/// Set-4 row: `Σ(x_i + x_i') + a_0 + 2(n - 2k) > 0`, with the constant
/// written over the pad columns. The first `|n - 2k|` pad pairs both carry
/// `sign(n - 2k)`; the remaining pairs cancel as `+a_j - a_j'`.
fn size_row(l: &Layout, k: usize) -> Policy {
    let surplus = l.n as i64 - 2 * k as i64;
    let mut q = Inequality::new(l.t());
    for i in 0..l.n {
        q.put(l.x(i), 1);
        q.put(l.xp(i), 1);
    }
    q.put(l.a0(), 1);
    let sign: i8 = if surplus >= 0 { 1 } else { -1 };
    let uniform = surplus.unsigned_abs() as usize;
    for j in 1..=l.ell {
        if j <= uniform {
            q.put(l.a(j), sign);
            q.put(l.ap(j), sign);
        } else {
            q.put(l.a(j), 1);
            q.put(l.ap(j), -1);
        }
    }
    q.into_ballot()
}

/// Builds a profile over `t = 2n + 2ℓ + 1` issues (`ℓ = n`) that admits a
/// unanimously winning policy with `|p| >= ⌊t/2⌋ + 2` iff `g` has an
/// independent set of size at least `k`. Every column of the result has
/// strictly more ones than zeros. `voter_parity` optionally fixes the
/// parity of the voter count.
pub fn reduce_independent_set(g: &Graph, k: usize, voter_parity: Option<Parity>) -> Result<ReductionOutput> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= {n}, got k = {k}")));
    }
    let layout = Layout { n, ell: n };
    let t = layout.t();

    let mut rows: Vec<Policy> = Vec::new();
    for alpha in layout.anchor_columns() {
        rows.extend(anchor_rows(&layout, alpha));
    }
    for i in 0..n {
        rows.extend(copy_rows(&layout, i));
    }
    for &(u, v) in g.edges() {
        rows.push(edge_row(&layout, u, v));
    }
    let size = size_row(&layout, k);
    rows.push(size.clone());

    let mut balance: Vec<i64> = vec![0; t];
    for r in &rows {
        tally_columns(&mut balance, r);
    }
    let push = |rows: &mut Vec<Policy>, balance: &mut Vec<i64>, row: Policy| {
        tally_columns(balance, &row);
        rows.push(row);
    };

    // Each pass strictly raises a deficient column, so (voters · issues)
    // passes bound both loops; exceeding that means the construction is wrong.
    let budget = rows.len() * t;
    let mut passes = 0usize;
    let mut next_pass = || -> Result<()> {
        passes += 1;
        if passes > budget {
            Err(Error::contract("column post-processing did not converge"))
        } else {
            Ok(())
        }
    };

    while (0..2 * n).any(|j| balance[j] <= 0) {
        next_pass()?;
        push(&mut rows, &mut balance, size.clone());
    }
    if let Some(parity) = voter_parity {
        // Set-1 copies come in pairs, so the parity is settled here.
        if (rows.len() % 2 == 1) != (parity == Parity::Odd) {
            push(&mut rows, &mut balance, size.clone());
        }
    }
    while let Some(alpha) = layout.anchor_columns().find(|&j| balance[j] <= 0) {
        next_pass()?;
        for r in anchor_rows(&layout, alpha) {
            push(&mut rows, &mut balance, r);
        }
    }

    Ok(ReductionOutput {
        profile: Profile::new(rows)?,
        agreement_threshold: t / 2 + 2,
        column_roles: layout.roles(),
        ell: layout.ell,
    })
}
