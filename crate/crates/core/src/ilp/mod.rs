//! Integer programs over column types.
//!
//! Identical columns of a profile are interchangeable, so a policy is
//! described up to equivalence by how many columns of each type it sets to
//! one. The models below have one integer variable `x_c ∈ [0, t_c]` per
//! column type `c` present in the profile (absent types would be fixed at 0
//! and are omitted). With `S_i = Σ_{c_i = 1} x_c − Σ_{c_i = 0} x_c`, voter
//! `i` matches the policy on `S_i + t − |v_i|` issues.

mod enumerate;
mod lp;

pub use enumerate::{enumerate_feasible, for_each_feasible, DEFAULT_CELL_CAP};
pub use lp::{export_lp, parse_lp};

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Policy, Profile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
    pub binary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub var: String,
    pub coef: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<Term>,
    pub relation: Relation,
    pub rhs: i64,
}

/// A distinct column pattern: bit `i` is voter `i`'s answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnType {
    pub column: Policy,
    pub multiplicity: usize,
    /// Issues carrying this column, ascending.
    pub issues: Vec<usize>,
}

impl ColumnType {
    /// `x_<hex>`: the column read as a number with voter `i` at bit `i`,
    /// zero-padded to `⌈n/4⌉` hex digits.
    pub fn var_name(&self) -> String {
        let n = self.column.len();
        let digits = n.div_ceil(4);
        let mut s = String::with_capacity(digits + 2);
        s.push_str("x_");
        for d in (0..digits).rev() {
            let nibble = (0..4)
                .filter(|&b| 4 * d + b < n && self.column.get(4 * d + b))
                .fold(0u32, |acc, b| acc | 1 << b);
            s.push(char::from_digit(nibble, 16).expect("nibble < 16"));
        }
        s
    }
}

/// Objective-free feasibility model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Column-type table of the source profile; empty for parsed models.
    pub column_types: Vec<ColumnType>,
}

impl IlpModel {
    /// Validates names, bounds and references.
    pub fn new(variables: Vec<Variable>, constraints: Vec<Constraint>, column_types: Vec<ColumnType>) -> Result<Self> {
        let mut names = HashSet::new();
        for v in &variables {
            if !valid_name(&v.name) {
                return Err(Error::domain(format!("invalid variable name {:?}", v.name)));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::domain(format!("duplicate variable {}", v.name)));
            }
            if v.lower > v.upper || (v.binary && (v.lower < 0 || v.upper > 1)) {
                return Err(Error::domain(format!("bad bounds on {}", v.name)));
            }
        }
        let mut cnames = HashSet::new();
        for c in &constraints {
            if !valid_name(&c.name) || !cnames.insert(c.name.as_str()) {
                return Err(Error::domain(format!(
                    "invalid or duplicate constraint name {:?}",
                    c.name
                )));
            }
            let mut seen = HashSet::new();
            for term in &c.terms {
                if !names.contains(term.var.as_str()) {
                    return Err(Error::domain(format!(
                        "constraint {} uses undeclared {}",
                        c.name, term.var
                    )));
                }
                if !seen.insert(term.var.as_str()) {
                    return Err(Error::domain(format!("constraint {} repeats {}", c.name, term.var)));
                }
            }
        }
        Ok(IlpModel {
            variables,
            constraints,
            column_types,
        })
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Checks an assignment (in variable order) against bounds and every
    /// constraint.
    pub fn is_feasible(&self, values: &[i64]) -> Result<bool> {
        Error::check_dims(self.variables.len(), values.len())?;
        let index: HashMap<&str, usize> = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        if self
            .variables
            .iter()
            .zip(values)
            .any(|(v, &x)| x < v.lower || x > v.upper)
        {
            return Ok(false);
        }
        Ok(self.constraints.iter().all(|c| {
            let lhs: i64 = c
                .terms
                .iter()
                .map(|term| term.coef * values[index[term.var.as_str()]])
                .sum();
            c.relation.holds(lhs, c.rhs)
        }))
    }

    /// Turns the weight constraint `Σ x_c ≥ k` into `Σ x_c = k`, so the
    /// model asks for exactly `k` ones.
    pub fn exact_weight(mut self) -> Self {
        for c in self.constraints.iter_mut().filter(|c| c.name == WEIGHT) {
            c.relation = Relation::Eq;
        }
        self
    }

    /// Rebuilds a policy from the `x_c` values: within each column type the
    /// lowest-index issues get the ones.
    pub fn policy_from_assignment(&self, values: &[i64]) -> Result<Policy> {
        Error::check_dims(self.variables.len(), values.len())?;
        if self.column_types.is_empty() {
            return Err(Error::domain("model carries no column-type table"));
        }
        let t: usize = self.column_types.iter().map(|c| c.multiplicity).sum();
        let mut p = Policy::zeros(t);
        for ct in &self.column_types {
            let idx = self
                .variable_index(&ct.var_name())
                .ok_or_else(|| Error::domain(format!("missing variable {}", ct.var_name())))?;
            let x = values[idx];
            if x < 0 || x as usize > ct.multiplicity {
                return Err(Error::domain(format!("{} = {x} is out of range", ct.var_name())));
            }
            for &j in &ct.issues[..x as usize] {
                p.set(j, true);
            }
        }
        Ok(p)
    }
}

const WEIGHT: &str = "weight";

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for IlpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&export_lp(self))
    }
}

/// Groups identical columns, in order of first appearance.
pub fn column_types(profile: &Profile) -> Vec<ColumnType> {
    let mut out: Vec<ColumnType> = Vec::new();
    let mut index: HashMap<Policy, usize> = HashMap::new();
    for j in 0..profile.t() {
        let col = profile.column(j);
        match index.get(&col) {
            Some(&i) => {
                out[i].multiplicity += 1;
                out[i].issues.push(j);
            }
            None => {
                index.insert(col.clone(), out.len());
                out.push(ColumnType {
                    column: col,
                    multiplicity: 1,
                    issues: vec![j],
                });
            }
        }
    }
    out
}

/// Knobs for [`build_wot_ilp`]. The defaults give a model whose
/// feasibility matches the existence of a non-losing policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WotOptions {
    /// Use the bounds `S ≤ |v| − ⌊(t−1)/2⌋ − 2` (disapproval) and
    /// `S ≥ |v| − ⌊(t−1)/2⌋ − 1` (abstention). They coincide with the exact
    /// bounds for even `t` and are off by one for odd `t`.
    pub printed_indicator_bounds: bool,
    /// Add `Σ a_i − Σ d_i ≥ 0`. Without it the indicators are consistent
    /// but nothing forbids a losing policy.
    pub balance_constraint: bool,
}

impl Default for WotOptions {
    fn default() -> Self {
        WotOptions {
            printed_indicator_bounds: false,
            balance_constraint: true,
        }
    }
}

struct Builder {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl Builder {
    fn var(&mut self, name: String, upper: i64, binary: bool) {
        self.variables.push(Variable {
            name,
            lower: 0,
            upper,
            binary,
        });
    }

    fn cons(&mut self, name: String, terms: Vec<(String, i64)>, relation: Relation, rhs: i64) {
        self.constraints.push(Constraint {
            name,
            terms: terms
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(var, coef)| Term { var, coef })
                .collect(),
            relation,
            rhs,
        });
    }
}

/// Per-voter `(variable, coefficient)` terms of `S_i`.
type VoterTerms = Vec<Vec<(String, i64)>>;

/// Shared part: `x_c ∈ [0, t_c]` and `Σ x_c ≥ k`.
fn base(profile: &Profile, k: usize) -> (Builder, Vec<ColumnType>, VoterTerms) {
    let types = column_types(profile);
    let mut b = Builder {
        variables: Vec::new(),
        constraints: Vec::new(),
    };
    for ct in &types {
        b.var(ct.var_name(), ct.multiplicity as i64, false);
    }
    b.cons(
        WEIGHT.into(),
        types.iter().map(|ct| (ct.var_name(), 1)).collect(),
        Relation::Ge,
        k as i64,
    );
    let s_terms = (0..profile.n())
        .map(|i| {
            types
                .iter()
                .map(|ct| (ct.var_name(), if ct.column.get(i) { 1 } else { -1 }))
                .collect()
        })
        .collect();
    (b, types, s_terms)
}

/// Feasible iff some policy with at least `k` ones is approved by every
/// voter: `S_i ≥ |v_i| − ⌊(t−1)/2⌋` for all `i`.
pub fn build_una_ilp(profile: &Profile, k: usize) -> IlpModel {
    let t = profile.t() as i64;
    let (mut b, types, s_terms) = base(profile, k);
    for (i, terms) in s_terms.into_iter().enumerate() {
        let ones = profile.row(i).count_ones() as i64;
        b.cons(format!("approve_{i}"), terms, Relation::Ge, ones - (t - 1) / 2);
    }
    IlpModel::new(b.variables, b.constraints, types).expect("builder emits a valid model")
}

/// Feasible iff some policy with at least `k` ones is non-losing. Binary
/// `a_i`, `d_i`, `f_i` mark approval, disapproval and abstention and are
/// tied to `S_i` by big-M constraints with `M = 10t + 10`.
pub fn build_wot_ilp(profile: &Profile, k: usize) -> IlpModel {
    build_wot_ilp_with(profile, k, WotOptions::default())
}

pub fn build_wot_ilp_with(profile: &Profile, k: usize, opts: WotOptions) -> IlpModel {
    let t = profile.t() as i64;
    let big = 10 * t + 10;
    let (mut b, types, s_terms) = base(profile, k);
    let n = profile.n();
    for i in 0..n {
        for tag in ["a", "d", "f"] {
            b.var(format!("{tag}_{i}"), 1, true);
        }
    }
    let floor_half = t / 2;
    let ceil_half = (t + 1) / 2;
    let floor_pred_half = (t - 1) / 2;
    for (i, terms) in s_terms.into_iter().enumerate() {
        let v = profile.row(i).count_ones() as i64;
        let (a, d, f) = (format!("a_{i}"), format!("d_{i}"), format!("f_{i}"));
        b.cons(
            format!("one_of_{i}"),
            vec![(a.clone(), 1), (d.clone(), 1), (f.clone(), 1)],
            Relation::Eq,
            1,
        );
        let with = |extra: (String, i64)| {
            let mut t = terms.clone();
            t.push(extra);
            t
        };
        // a_i = 1 ⇒ S_i ≥ |v| − ⌊(t−1)/2⌋.
        b.cons(
            format!("approve_{i}"),
            with((a, -big)),
            Relation::Ge,
            v - floor_pred_half - big,
        );
        let (dis, abst_lo, abst_hi) = if opts.printed_indicator_bounds {
            (
                v - floor_pred_half - 2,
                v - floor_pred_half - 1,
                v - floor_pred_half - 1,
            )
        } else {
            (v - floor_half - 1, v - floor_half, v - ceil_half)
        };
        // d_i = 1 ⇒ S_i ≤ dis.
        b.cons(format!("disapprove_{i}"), with((d, big)), Relation::Le, dis + big);
        // f_i = 1 ⇒ abst_lo ≤ S_i ≤ abst_hi.
        b.cons(
            format!("abstain_hi_{i}"),
            with((f.clone(), big)),
            Relation::Le,
            abst_hi + big,
        );
        b.cons(format!("abstain_lo_{i}"), with((f, -big)), Relation::Ge, abst_lo - big);
    }
    if opts.balance_constraint {
        let terms = (0..n)
            .flat_map(|i| [(format!("a_{i}"), 1), (format!("d_{i}"), -1)])
            .collect();
        b.cons("balance".into(), terms, Relation::Ge, 0);
    }
    IlpModel::new(b.variables, b.constraints, types).expect("builder emits a valid model")
}
