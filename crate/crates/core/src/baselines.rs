//! Comparison explanations: per-target marginals, MAP over a variable set
//! (full-target F-MAP or MRE-restricted P-MAP) and MPE.
//!
//! MAP and MPE are found by scanning the joint posterior table, so they are
//! bounded by the table budget.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{evidence_probability, joint_table, target_tables, TargetTables};
use crate::network::{Assignment, Network, Probability, VarId};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Marginal,
    PMap,
    FMap,
    Mpe,
    Mre,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Marginal, Method::PMap, Method::FMap, Method::Mre, Method::Mpe];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Marginal => "marginal",
            Method::PMap => "p_map",
            Method::FMap => "f_map",
            Method::Mpe => "mpe",
            Method::Mre => "mre",
        }
    }

    /// Whether the method can produce more than one ranked solution.
    pub fn supports_top_k(self) -> bool {
        !matches!(self, Method::Marginal)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s || (s == "pmap" && *m == Method::PMap) || (s == "fmap" && *m == Method::FMap))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult<T = f64> {
    pub method: Method,
    pub assignment: Assignment,
    /// Posterior probability of `assignment` given the evidence.
    pub score: Probability<T>,
}

/// Indices of the `k` largest entries, largest first; equal values keep index order.
pub(crate) fn top_k_indices<T: Real>(values: &[T], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(k);
    idx
}

fn argmax<T: Real>(values: &[T]) -> usize {
    top_k_indices(values, 1)[0]
}

/// Each target independently set to its most probable posterior state.
pub fn marginal_explanation<T: Real>(
    net: &Network<T>,
    targets: &[VarId],
    evidence: &Assignment,
    budget: usize,
) -> Result<BaselineResult<T>> {
    let tables = target_tables(net, targets, evidence, budget)?;
    Ok(marginal_from_tables(&tables))
}

pub fn marginal_from_tables<T: Real>(tables: &TargetTables<T>) -> BaselineResult<T> {
    let assignment: Assignment = tables
        .targets
        .iter()
        .map(|&t| (t, argmax(&tables.posterior_marginal(t))))
        .collect();
    let score = Probability::new(tables.posterior_of(&assignment)).unwrap_or_default();
    BaselineResult {
        method: Method::Marginal,
        assignment,
        score,
    }
}

/// The `k` most probable joint instantiations of the table's variables.
pub fn top_k_in_table<T: Real>(tables: &TargetTables<T>, k: usize, method: Method) -> Vec<BaselineResult<T>> {
    top_k_indices(&tables.posterior, k)
        .into_iter()
        .map(|i| BaselineResult {
            method,
            assignment: tables.assignment_at(i),
            score: Probability::new(tables.posterior[i]).unwrap_or_default(),
        })
        .collect()
}

/// Posterior table restricted to `vars`, reusing a larger table when it covers them.
pub fn project_tables<T: Real>(tables: &TargetTables<T>, vars: &[VarId]) -> TargetTables<T> {
    let mut keep: Vec<VarId> = vars.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let f = crate::factor::Factor::from_table(&tables.targets, &tables.cards, tables.posterior.clone()).marginal(&keep);
    let p = crate::factor::Factor::from_table(&tables.targets, &tables.cards, tables.prior.clone()).marginal(&keep);
    TargetTables {
        targets: keep,
        cards: f.cards().to_vec(),
        prior: p.into_values(),
        posterior: f.into_values(),
        evidence_probability: tables.evidence_probability,
    }
}

/// Most probable full instantiation of `vars` given the evidence.
pub fn map_explanation<T: Real>(
    net: &Network<T>,
    vars: &[VarId],
    evidence: &Assignment,
    budget: usize,
) -> Result<BaselineResult<T>> {
    Ok(top_k_map(net, vars, evidence, 1, budget)?.remove(0))
}

pub fn top_k_map<T: Real>(
    net: &Network<T>,
    vars: &[VarId],
    evidence: &Assignment,
    k: usize,
    budget: usize,
) -> Result<Vec<BaselineResult<T>>> {
    if vars.is_empty() {
        return Err(Error::EmptyAssignment("MAP variable set"));
    }
    let tables = target_tables(net, vars, evidence, budget)?;
    Ok(top_k_in_table(&tables, k.max(1), Method::FMap))
}

/// Most probable instantiation of every non-evidence variable.
pub fn mpe_explanation<T: Real>(net: &Network<T>, evidence: &Assignment, budget: usize) -> Result<BaselineResult<T>> {
    Ok(top_k_mpe(net, evidence, 1, budget)?.remove(0))
}

pub fn top_k_mpe<T: Real>(
    net: &Network<T>,
    evidence: &Assignment,
    k: usize,
    budget: usize,
) -> Result<Vec<BaselineResult<T>>> {
    let free: Vec<VarId> = net.var_ids().filter(|&v| !evidence.contains(v)).collect();
    if free.is_empty() {
        return Err(Error::InvalidArgument("every variable is observed".into()));
    }
    let pe = evidence_probability(net, evidence)?;
    let table = joint_table(net, &free, evidence, budget)?;
    let values: Vec<T> = table.values().iter().map(|&v| v / pe).collect();
    let tables = TargetTables {
        targets: table.vars().to_vec(),
        cards: table.cards().to_vec(),
        prior: Vec::new(),
        posterior: values,
        evidence_probability: pe,
    };
    Ok(top_k_in_table(&tables, k.max(1), Method::Mpe))
}
