//! Text format for role-annotated networks.
//!
//! ```text
//! network <name>
//! var <name> role=<target|observation|auxiliary> states=<s1,s2,...> [normal=<state>]
//! cpt <child> parents=<p1,p2,...>
//! <one line per parent configuration, last parent fastest>
//! ```
//!
//! `#` starts a comment. `parents=` may be omitted or left empty for roots.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::network::{Cpt, Network, Role, VarId, Variable};
use crate::real::Real;

struct RawCpt {
    line: usize,
    child: (String, usize),
    parents: Vec<(String, usize)>,
    rows: Vec<(usize, Vec<f64>)>,
}

/// Column (1-based) of `token` inside `line`; `token` must be a subslice.
fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

pub fn parse_network<T: Real>(text: &str) -> Result<Network<T>> {
    let mut name: Option<String> = None;
    let mut variables: Vec<Variable> = Vec::new();
    let mut raw: Vec<RawCpt> = Vec::new();

    for (idx, full_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = match full_line.find('#') {
            Some(i) => &full_line[..i],
            None => full_line,
        };
        let mut tokens = content.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        let col = |t: &str| column_of(full_line, t);
        match head {
            "network" => {
                if name.is_some() {
                    return Err(Error::syntax(lineno, col(head), "duplicate `network` header"));
                }
                let n = tokens
                    .next()
                    .ok_or_else(|| Error::syntax(lineno, col(head), "`network` needs a name"))?;
                if let Some(extra) = tokens.next() {
                    return Err(Error::syntax(lineno, col(extra), "unexpected token after network name"));
                }
                name = Some(n.to_string());
            }
            "var" => {
                if name.is_none() {
                    return Err(Error::syntax(lineno, col(head), "expected `network <name>` header first"));
                }
                let vname = tokens
                    .next()
                    .ok_or_else(|| Error::syntax(lineno, col(head), "`var` needs a name"))?;
                check_identifier(vname, lineno, col(vname))?;
                let mut role = None;
                let mut states: Option<Vec<String>> = None;
                let mut normal: Option<(&str, usize)> = None;
                for attr in tokens {
                    let (key, value) = attr
                        .split_once('=')
                        .ok_or_else(|| Error::syntax(lineno, col(attr), format!("expected key=value, found `{attr}`")))?;
                    match key {
                        "role" => {
                            role = Some(value.parse::<Role>().map_err(|m| Error::syntax(lineno, col(attr), m))?);
                        }
                        "states" => {
                            let list: Vec<String> = value.split(',').map(str::to_string).collect();
                            for s in &list {
                                check_identifier(s, lineno, col(attr))?;
                            }
                            states = Some(list);
                        }
                        "normal" => normal = Some((value, col(attr))),
                        other => {
                            return Err(Error::syntax(lineno, col(attr), format!("unknown attribute `{other}`")));
                        }
                    }
                }
                let role = role.ok_or_else(|| Error::syntax(lineno, col(vname), "missing role="))?;
                let states = states.ok_or_else(|| Error::syntax(lineno, col(vname), "missing states="))?;
                let normal = match normal {
                    Some((n, c)) => Some(states.iter().position(|s| s == n).ok_or_else(|| {
                        Error::syntax(lineno, c, format!("normal state `{n}` is not one of the states"))
                    })?),
                    None => None,
                };
                if role == Role::Target && normal.is_none() {
                    return Err(Error::MissingNormalState(vname.to_string()));
                }
                if variables.iter().any(|v| v.name == vname) {
                    return Err(Error::syntax(lineno, col(vname), format!("variable `{vname}` declared twice")));
                }
                variables.push(Variable {
                    name: vname.to_string(),
                    states,
                    role,
                    normal,
                });
            }
            "cpt" => {
                if name.is_none() {
                    return Err(Error::syntax(lineno, col(head), "expected `network <name>` header first"));
                }
                let child = tokens
                    .next()
                    .ok_or_else(|| Error::syntax(lineno, col(head), "`cpt` needs a child variable"))?;
                let mut parents = Vec::new();
                for attr in tokens {
                    match attr.split_once('=') {
                        Some(("parents", list)) => {
                            if !list.is_empty() {
                                parents = list.split(',').map(|p| (p.to_string(), col(attr))).collect();
                            }
                        }
                        _ => return Err(Error::syntax(lineno, col(attr), format!("unexpected `{attr}`"))),
                    }
                }
                raw.push(RawCpt {
                    line: lineno,
                    child: (child.to_string(), col(child)),
                    parents,
                    rows: Vec::new(),
                });
            }
            _ => {
                let cpt = raw
                    .last_mut()
                    .ok_or_else(|| Error::syntax(lineno, col(head), format!("unexpected `{head}`")))?;
                let row = content
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| Error::syntax(lineno, col(t), format!("expected a probability, found `{t}`")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                cpt.rows.push((lineno, row));
            }
        }
    }

    let name = name.ok_or_else(|| Error::syntax(1, 1, "missing `network <name>` header"))?;
    let lookup = |n: &str, line: usize, column: usize| -> Result<VarId> {
        variables
            .iter()
            .position(|v| v.name == n)
            .map(VarId)
            .ok_or_else(|| Error::syntax(line, column, format!("unknown variable `{n}`")))
    };

    let mut cpts = Vec::with_capacity(raw.len());
    for r in &raw {
        let child = lookup(&r.child.0, r.line, r.child.1)?;
        let parents = r
            .parents
            .iter()
            .map(|(p, c)| lookup(p, r.line, *c))
            .collect::<Result<Vec<_>>>()?;
        let child_card = variables[child.0].cardinality();
        let expected_rows: usize = parents.iter().map(|p| variables[p.0].cardinality()).product();
        if r.rows.len() != expected_rows {
            return Err(Error::syntax(
                r.line,
                1,
                format!("cpt `{}` has {} rows, expected {expected_rows}", r.child.0, r.rows.len()),
            ));
        }
        let mut table = Vec::with_capacity(expected_rows * child_card);
        for (row_idx, (line, row)) in r.rows.iter().enumerate() {
            if row.len() != child_card {
                return Err(Error::syntax(
                    *line,
                    1,
                    format!("row has {} entries, `{}` has {child_card} states", row.len(), r.child.0),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::RowNotNormalized {
                    child: r.child.0.clone(),
                    row: row_idx,
                    sum,
                });
            }
            table.extend(row.iter().map(|&p| T::from_f64_lossy(p)));
        }
        cpts.push(Cpt::new(child, parents, table));
    }
    Network::new(name, variables, cpts)
}

fn check_identifier(s: &str, line: usize, column: usize) -> Result<()> {
    let ok = !s.is_empty() && s.chars().all(|c| !c.is_whitespace() && !matches!(c, ',' | '=' | '#'));
    if ok {
        Ok(())
    } else {
        Err(Error::syntax(line, column, format!("invalid name `{s}`")))
    }
}

/// Renders `net` in the text format; `parse_network` reads it back unchanged.
pub fn write_network<T: Real>(net: &Network<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network {}", net.name());
    for v in net.variables() {
        let _ = write!(out, "var {} role={} states={}", v.name, v.role.as_str(), v.states.join(","));
        if let Some(n) = v.normal {
            let _ = write!(out, " normal={}", v.states[n]);
        }
        out.push('\n');
    }
    for id in net.var_ids() {
        let cpt = net.cpt(id);
        let parents: Vec<&str> = cpt.parents.iter().map(|p| net.variable(*p).name.as_str()).collect();
        let _ = writeln!(out, "cpt {} parents={}", net.variable(id).name, parents.join(","));
        for row in cpt.table.chunks(net.cardinality(id)) {
            let cells: Vec<String> = row.iter().map(|p| format!("{:?}", p.to_f64_lossy())).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    out
}
