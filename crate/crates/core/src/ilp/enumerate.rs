//! Exhaustive feasibility search over the integer box of a model.
//!
//! Variables are fixed in declaration order. After each assignment every
//! constraint touching the variable is checked against the interval its
//! left-hand side can still reach, which prunes most of the box on the
//! models built here. Pruning never discards a feasible point.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::{IlpModel, Relation};
use crate::error::{Error, Result};

/// Default bound on the number of cells in the search box.
pub const DEFAULT_CELL_CAP: u128 = 10_000_000;

struct Search<'a> {
    lower: Vec<i64>,
    upper: Vec<i64>,
    /// Per variable: (constraint, coefficient).
    touches: Vec<Vec<(usize, i64)>>,
    relation: Vec<Relation>,
    rhs: Vec<i64>,
    /// `suffix_min[c][d]`: least contribution of variables `d..` to `c`.
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
    partial: Vec<i64>,
    values: Vec<i64>,
    visit: &'a mut dyn FnMut(&[i64]) -> ControlFlow<()>,
}

impl Search<'_> {
    fn viable(&self, c: usize, depth: usize) -> bool {
        let lo = self.partial[c] + self.suffix_min[c][depth];
        let hi = self.partial[c] + self.suffix_max[c][depth];
        match self.relation[c] {
            Relation::Le => lo <= self.rhs[c],
            Relation::Ge => hi >= self.rhs[c],
            Relation::Eq => lo <= self.rhs[c] && self.rhs[c] <= hi,
        }
    }

    fn run(&mut self, depth: usize) -> ControlFlow<()> {
        if depth == self.values.len() {
            return (self.visit)(&self.values);
        }
        for v in self.lower[depth]..=self.upper[depth] {
            self.values[depth] = v;
            for &(c, coef) in &self.touches[depth] {
                self.partial[c] += coef * v;
            }
            let ok = self.touches[depth].iter().all(|&(c, _)| self.viable(c, depth + 1));
            let flow = if ok {
                self.run(depth + 1)
            } else {
                ControlFlow::Continue(())
            };
            for &(c, coef) in &self.touches[depth] {
                self.partial[c] -= coef * v;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn cell_count(model: &IlpModel) -> u128 {
    model
        .variables
        .iter()
        .fold(1u128, |acc, v| acc.saturating_mul((v.upper - v.lower + 1) as u128))
}

/// Calls `visit` on every feasible assignment, in lexicographic order of
/// the declared variables, until it breaks.
pub fn for_each_feasible(
    model: &IlpModel,
    cell_cap: u128,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<()>,
) -> Result<()> {
    let cells = cell_count(model);
    if cells > cell_cap {
        return Err(Error::Resource {
            what: "search cells",
            value: cells,
            cap: cell_cap,
        });
    }
    let nv = model.variables.len();
    let index: HashMap<&str, usize> = model
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();
    let lower: Vec<i64> = model.variables.iter().map(|v| v.lower).collect();
    let upper: Vec<i64> = model.variables.iter().map(|v| v.upper).collect();
    let mut touches = vec![Vec::new(); nv];
    let mut suffix_min = Vec::with_capacity(model.constraints.len());
    let mut suffix_max = Vec::with_capacity(model.constraints.len());
    for (c, cons) in model.constraints.iter().enumerate() {
        let mut lo = vec![0i64; nv + 1];
        let mut hi = vec![0i64; nv + 1];
        let mut coef_of = vec![0i64; nv];
        for term in &cons.terms {
            let i = index[term.var.as_str()];
            coef_of[i] += term.coef;
        }
        for d in (0..nv).rev() {
            let a = coef_of[d] * lower[d];
            let b = coef_of[d] * upper[d];
            lo[d] = lo[d + 1] + a.min(b);
            hi[d] = hi[d + 1] + a.max(b);
            if coef_of[d] != 0 {
                touches[d].push((c, coef_of[d]));
            }
        }
        suffix_min.push(lo);
        suffix_max.push(hi);
    }
    let mut search = Search {
        lower,
        upper,
        touches,
        relation: model.constraints.iter().map(|c| c.relation).collect(),
        rhs: model.constraints.iter().map(|c| c.rhs).collect(),
        suffix_min,
        suffix_max,
        partial: vec![0; model.constraints.len()],
        values: vec![0; nv],
        visit: &mut visit,
    };
    if (0..model.constraints.len()).all(|c| search.viable(c, 0)) {
        let _ = search.run(0);
    }
    Ok(())
}

/// The lexicographically first feasible assignment, if any.
pub fn enumerate_feasible(model: &IlpModel, cell_cap: u128) -> Result<Option<Vec<i64>>> {
    let mut found = None;
    for_each_feasible(model, cell_cap, |vals| {
        found = Some(vals.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}
