//! CPLEX LP text format: writer and a reader for the subset it writes.

use std::fmt::Write as _;

use super::{Constraint, IlpModel, Relation, Term, Variable};
use crate::error::{Error, Result};

/// Terms per output line inside a constraint.
const TERMS_PER_LINE: usize = 8;

fn signed(v: i64) -> String {
    if v < 0 {
        format!("-{}", v.unsigned_abs())
    } else {
        format!("+{v}")
    }
}

/// Byte-deterministic LP export with LF line endings.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n obj: 0\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        if c.terms.is_empty() {
            out.push_str(" 0");
        }
        for (i, term) in c.terms.iter().enumerate() {
            if i > 0 && i % TERMS_PER_LINE == 0 {
                out.push_str("\n  ");
            }
            let _ = write!(out, " {} {}", signed(term.coef), term.var);
        }
        let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
    }
    out.push_str("Bounds\n");
    for v in model.variables.iter().filter(|v| !v.binary) {
        let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
    }
    out.push_str("General\n");
    for v in model.variables.iter().filter(|v| !v.binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("Binary\n");
    for v in model.variables.iter().filter(|v| v.binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    General,
    Binary,
    End,
}

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| Error::parse(line, 1, format!("expected an integer, found {tok:?}")))
}

fn parse_constraint(text: &str, line: usize) -> Result<Constraint> {
    let (name, body) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(line, 1, "constraint without a name"))?;
    let toks: Vec<&str> = body.split_whitespace().collect();
    if toks.len() < 2 {
        return Err(Error::parse(line, 1, "truncated constraint"));
    }
    let relation = match toks[toks.len() - 2] {
        "<=" => Relation::Le,
        ">=" => Relation::Ge,
        "=" => Relation::Eq,
        other => return Err(Error::parse(line, 1, format!("unknown relation {other:?}"))),
    };
    let rhs = parse_int(toks[toks.len() - 1], line)?;
    let body = match &toks[..toks.len() - 2] {
        ["0"] => &[][..],
        b => b,
    };
    if body.len() % 2 != 0 {
        return Err(Error::parse(line, 1, "terms must be coefficient/variable pairs"));
    }
    let mut terms = Vec::new();
    for pair in body.chunks(2) {
        let coef = parse_int(pair[0], line)?;
        if coef != 0 {
            terms.push(Term {
                var: pair[1].to_string(),
                coef,
            });
        }
    }
    Ok(Constraint {
        name: name.trim().to_string(),
        terms,
        relation,
        rhs,
    })
}

/// Reads the output of [`export_lp`] back into a model (without the
/// column-type table).
pub fn parse_lp(text: &str) -> Result<IlpModel> {
    let mut section = Section::Preamble;
    let mut pending: Option<(String, usize)> = None;
    let mut constraints = Vec::new();
    let mut bounds: Vec<(String, i64, i64)> = Vec::new();
    let mut general = Vec::new();
    let mut binary = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('\\') {
            continue;
        }
        let next = match trimmed.to_ascii_lowercase().as_str() {
            "minimize" => Some(Section::Objective),
            "subject to" => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "general" => Some(Section::General),
            "binary" => Some(Section::Binary),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            if let Some((c, l)) = pending.take() {
                constraints.push(parse_constraint(&c, l)?);
            }
            section = s;
            continue;
        }
        match section {
            Section::Preamble | Section::End => {
                return Err(Error::parse(line, 1, "content outside a section"));
            }
            Section::Objective => {}
            Section::Constraints => {
                if !trimmed.contains(':') {
                    match pending.as_mut() {
                        Some((c, _)) => {
                            c.push(' ');
                            c.push_str(trimmed);
                        }
                        None => return Err(Error::parse(line, 1, "continuation without a constraint")),
                    }
                } else {
                    if let Some((c, l)) = pending.take() {
                        constraints.push(parse_constraint(&c, l)?);
                    }
                    pending = Some((trimmed.to_string(), line));
                }
            }
            Section::Bounds => {
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                match toks.as_slice() {
                    [lo, "<=", name, "<=", hi] => {
                        bounds.push((name.to_string(), parse_int(lo, line)?, parse_int(hi, line)?))
                    }
                    _ => return Err(Error::parse(line, 1, "expected `lo <= name <= hi`")),
                }
            }
            Section::General => general.extend(trimmed.split_whitespace().map(str::to_string)),
            Section::Binary => binary.extend(trimmed.split_whitespace().map(str::to_string)),
        }
    }
    if section != Section::End {
        return Err(Error::parse(text.lines().count().max(1), 1, "missing End"));
    }
    let mut variables = Vec::new();
    for name in general {
        let (lower, upper) = bounds
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|&(_, lo, hi)| (lo, hi))
            .ok_or_else(|| Error::domain(format!("general variable {name} has no bounds")))?;
        variables.push(Variable {
            name,
            lower,
            upper,
            binary: false,
        });
    }
    for name in binary {
        variables.push(Variable {
            name,
            lower: 0,
            upper: 1,
            binary: true,
        });
    }
    // Generals come back before binaries whatever the declared order was.
    IlpModel::new(variables, constraints, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{build_una_ilp, build_wot_ilp};
    use crate::profile::Profile;

    fn five_voters() -> Profile {
        Profile::from_strs(&["100", "010", "001", "111", "111"]).unwrap()
    }

    fn strip(mut m: IlpModel) -> IlpModel {
        m.column_types.clear();
        m
    }

    #[test]
    fn empty_model_round_trip() {
        let m = IlpModel::new(Vec::new(), Vec::new(), Vec::new()).unwrap();
        let text = export_lp(&m);
        assert_eq!(text, "Minimize\n obj: 0\nSubject To\nBounds\nGeneral\nBinary\nEnd\n");
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn una_contains_weight_line() {
        let text = export_lp(&build_una_ilp(&five_voters(), 2));
        assert!(text.contains(" weight: +1 x_19 +1 x_1a +1 x_1c >= 2\n"), "{text}");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn round_trips() {
        let m = strip(build_una_ilp(&five_voters(), 2));
        assert_eq!(parse_lp(&export_lp(&m)).unwrap(), m);
        // Generals precede binaries in the built model, so order survives.
        let m = strip(build_wot_ilp(&five_voters(), 2));
        assert_eq!(parse_lp(&export_lp(&m)).unwrap(), m);
    }

    #[test]
    fn long_constraints_wrap() {
        let p = Profile::from_strs(&["1100110011", "1010101010", "0110011001", "1111000011"]).unwrap();
        let m = strip(build_una_ilp(&p, 3));
        let text = export_lp(&m);
        assert!(text.lines().all(|l| l.len() < 200));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn empty_constraint() {
        let v = Variable {
            name: "y".into(),
            lower: 0,
            upper: 2,
            binary: false,
        };
        let c = Constraint {
            name: "trivial".into(),
            terms: Vec::new(),
            relation: Relation::Le,
            rhs: 0,
        };
        let m = IlpModel::new(vec![v], vec![c], Vec::new()).unwrap();
        let text = export_lp(&m);
        assert!(text.contains(" trivial: 0 <= 0\n"));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            export_lp(&build_wot_ilp(&five_voters(), 2)),
            export_lp(&build_wot_ilp(&five_voters(), 2))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_lp("Minimize\n obj: 0\nSubject To\n c: +1 >= 0\nEnd\n").is_err());
        assert!(parse_lp("Subject To\n c: +1 x ~ 0\nEnd\n").is_err());
        assert!(parse_lp("Minimize\n obj: 0\n").is_err());
    }
}
