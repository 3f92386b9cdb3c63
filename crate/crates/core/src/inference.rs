//! Exact inference by variable elimination with a min-degree ordering.
//!
//! Queries only touch the ancestral closure of the query and evidence
//! variables; everything else sums to one and is dropped up front.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::network::{Assignment, Network, Probability, VarId};
use crate::real::Real;

/// Default cap on the number of entries in any table built during inference.
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 24;

/// Unnormalized joint `P(keep, evidence)` as a factor over `keep`.
///
/// `keep` and the evidence variables must be disjoint. With `keep` empty the
/// result is the scalar `P(evidence)`.
pub fn joint_table<T: Real>(
    net: &Network<T>,
    keep: &[VarId],
    evidence: &Assignment,
    budget: usize,
) -> Result<Factor<T>> {
    net.check_assignment(evidence)?;
    if let Some(&v) = keep.iter().find(|&&v| evidence.contains(v)) {
        return Err(Error::Overlap(net.variable(v).name.clone()));
    }
    let keep_size = table_size(net, keep.iter().copied());
    if keep_size > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "joint table",
            needed: keep_size,
            budget: budget as u128,
        });
    }

    let relevant = net.ancestral_closure(keep.iter().copied().chain(evidence.vars()));
    let mut factors: Vec<Factor<T>> = net
        .var_ids()
        .filter(|v| relevant[v.0])
        .map(|v| {
            let cpt = net.cpt(v);
            let mut scope = cpt.parents.clone();
            scope.push(v);
            let cards: Vec<usize> = scope.iter().map(|&x| net.cardinality(x)).collect();
            Factor::from_table(&scope, &cards, cpt.table.clone()).reduce(evidence)
        })
        .collect();

    let mut pending: BTreeSet<VarId> = net
        .var_ids()
        .filter(|&v| relevant[v.0] && !evidence.contains(v) && !keep.contains(&v))
        .collect();
    while let Some(var) = pick_min_degree(&factors, &pending) {
        pending.remove(&var);
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars().contains(&var));
        factors = rest;
        let product = multiply_all(touching, budget)?;
        factors.push(product.sum_out(var));
    }

    let mut result = multiply_all(factors, budget)?;
    // keep variables absent from every factor cannot occur: each kept
    // variable contributes its own CPT.
    debug_assert!(keep.iter().all(|v| result.vars().contains(v)));
    if result.vars().len() != keep.len() {
        result = result.marginal(keep);
    }
    Ok(result)
}

fn table_size<T: Real>(net: &Network<T>, vars: impl Iterator<Item = VarId>) -> u128 {
    vars.map(|v| net.cardinality(v) as u128).product()
}

fn pick_min_degree<T: Real>(factors: &[Factor<T>], pending: &BTreeSet<VarId>) -> Option<VarId> {
    pending
        .iter()
        .map(|&v| {
            let neighbours: BTreeSet<VarId> = factors
                .iter()
                .filter(|f| f.vars().contains(&v))
                .flat_map(|f| f.vars().iter().copied())
                .filter(|&u| u != v)
                .collect();
            (neighbours.len(), v)
        })
        .min()
        .map(|(_, v)| v)
}

fn multiply_all<T: Real>(factors: Vec<Factor<T>>, budget: usize) -> Result<Factor<T>> {
    let mut iter = factors.into_iter();
    let Some(mut acc) = iter.next() else {
        return Ok(Factor::scalar(T::one()));
    };
    for f in iter {
        let (_, cards) = acc.product_scope(&f);
        let size: u128 = cards.iter().map(|&c| c as u128).product();
        if size > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "intermediate factor",
                needed: size,
                budget: budget as u128,
            });
        }
        acc = acc.product(&f);
    }
    Ok(acc)
}

/// `P(a)` for any (possibly empty) assignment, unclamped.
pub fn probability_of<T: Real>(net: &Network<T>, a: &Assignment) -> Result<T> {
    Ok(joint_table(net, &[], a, DEFAULT_TABLE_BUDGET)?.values()[0])
}

/// Chain-rule product for a full assignment.
pub fn joint_probability<T: Real>(net: &Network<T>, full: &Assignment) -> Result<Probability<T>> {
    net.check_assignment(full)?;
    let p = net
        .var_ids()
        .try_fold(T::one(), |acc, v| Ok::<_, Error>(acc * net.local_probability(v, full)?))?;
    Probability::new(p)
}

pub fn prior_probability<T: Real>(net: &Network<T>, partial: &Assignment) -> Result<Probability<T>> {
    if partial.is_empty() {
        return Err(Error::EmptyAssignment("partial assignment"));
    }
    Probability::new(probability_of(net, partial)?)
}

/// `P(evidence)`, failing when it is zero.
pub fn evidence_probability<T: Real>(net: &Network<T>, evidence: &Assignment) -> Result<T> {
    let pe = probability_of(net, evidence)?;
    if pe <= T::zero() {
        return Err(Error::ZeroProbabilityEvidence);
    }
    Ok(pe)
}

pub(crate) fn check_disjoint<T: Real>(net: &Network<T>, a: &Assignment, b: &Assignment) -> Result<()> {
    let shared: Vec<&str> = a
        .vars()
        .filter(|&v| b.contains(v))
        .map(|v| net.variable(v).name.as_str())
        .collect();
    if shared.is_empty() {
        Ok(())
    } else {
        Err(Error::Overlap(shared.join(",")))
    }
}

pub fn posterior_probability<T: Real>(
    net: &Network<T>,
    partial: &Assignment,
    evidence: &Assignment,
) -> Result<Probability<T>> {
    if partial.is_empty() {
        return Err(Error::EmptyAssignment("partial assignment"));
    }
    if evidence.is_empty() {
        return Err(Error::EmptyAssignment("evidence"));
    }
    check_disjoint(net, partial, evidence)?;
    let pe = evidence_probability(net, evidence)?;
    let both = probability_of(net, &partial.union(evidence)?)?;
    Probability::new(both / pe)
}

/// Joint prior and evidence-conditioned posterior over a set of targets.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTables<T = f64> {
    /// Targets sorted by id; both tables are laid out over them, last fastest.
    pub targets: Vec<VarId>,
    pub cards: Vec<usize>,
    pub prior: Vec<T>,
    pub posterior: Vec<T>,
    pub evidence_probability: T,
}

pub fn target_tables<T: Real>(
    net: &Network<T>,
    targets: &[VarId],
    evidence: &Assignment,
    budget: usize,
) -> Result<TargetTables<T>> {
    if targets.is_empty() {
        return Err(Error::EmptyAssignment("target set"));
    }
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let prior = joint_table(net, &sorted, &Assignment::new(), budget)?;
    let mut posterior = joint_table(net, &sorted, evidence, budget)?;
    let pe = posterior.total();
    if pe <= T::zero() {
        return Err(Error::ZeroProbabilityEvidence);
    }
    posterior.scale(T::one() / pe);
    Ok(TargetTables {
        cards: prior.cards().to_vec(),
        targets: sorted,
        prior: prior.into_values(),
        posterior: posterior.into_values(),
        evidence_probability: pe,
    })
}

impl<T: Real> TargetTables<T> {
    fn sum_consistent(&self, table: &[T], partial: &Assignment) -> T {
        let mut digits = vec![0usize; self.cards.len()];
        let mut total = T::zero();
        for &p in table {
            let matches = partial.iter().all(|(v, s)| {
                self.targets
                    .iter()
                    .position(|&t| t == v)
                    .is_some_and(|k| digits[k] == s)
            });
            if matches {
                total = total + p;
            }
            crate::factor::increment(&mut digits, &self.cards);
        }
        total
    }

    /// `P(partial)` read off the prior table. `partial` must bind targets only.
    pub fn prior_of(&self, partial: &Assignment) -> T {
        self.sum_consistent(&self.prior, partial)
    }

    pub fn posterior_of(&self, partial: &Assignment) -> T {
        self.sum_consistent(&self.posterior, partial)
    }

    /// Posterior marginal of one target.
    pub fn posterior_marginal(&self, var: VarId) -> Vec<T> {
        let k = self.targets.iter().position(|&t| t == var).expect("variable is a target");
        let mut out = vec![T::zero(); self.cards[k]];
        let mut digits = vec![0usize; self.cards.len()];
        for &p in &self.posterior {
            out[digits[k]] = out[digits[k]] + p;
            crate::factor::increment(&mut digits, &self.cards);
        }
        out
    }

    pub fn assignment_at(&self, index: usize) -> Assignment {
        let digits = crate::factor::decode(index, &self.cards);
        self.targets.iter().copied().zip(digits).collect()
    }
}
