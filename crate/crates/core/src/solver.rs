//! Exhaustive MRE and K-MRE search over the lattice of partial target
//! instantiations.
//!
//! Every non-empty partial instantiation of the targets is a candidate. The
//! posterior and prior of all of them come from a single pair of joint
//! tables: each target axis is widened by one "unbound" slot holding the sum
//! over its states, so a lattice entry is exactly `P(candidate)`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::decode;
use crate::inference::{target_tables, TargetTables, DEFAULT_TABLE_BUDGET};
use crate::network::{Assignment, Network, VarId};
use crate::real::Real;
use crate::scoring::ScoreBundle;

pub const DEFAULT_CANDIDATE_BUDGET: usize = 10_000_000;

/// How the K-MRE pool decides that a newcomer is dominated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoolRule {
    /// Dominance is checked against every scored candidate in the lattice,
    /// so only minimal explanations ever reach the pool.
    #[default]
    Lattice,
    /// Dominance is checked against current pool members only.
    MembersOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub candidate_budget: usize,
    pub table_budget: usize,
    /// Worker threads for K-MRE; `1` runs on the calling thread.
    pub jobs: usize,
    pub rule: PoolRule,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
            table_budget: DEFAULT_TABLE_BUDGET,
            jobs: 1,
            rule: PoolRule::Lattice,
        }
    }
}

/// A scored, non-empty partial instantiation of the targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation<T = f64> {
    pub assignment: Assignment,
    pub scores: ScoreBundle<T>,
    /// `(variable-name rank, state-name rank)` pairs, sorted; orders
    /// explanations lexicographically by name.
    name_key: Vec<(u32, u32)>,
}

impl<T: Real> Explanation<T> {
    pub fn new(net: &Network<T>, assignment: Assignment, scores: ScoreBundle<T>) -> Self {
        let name_key = NameOrder::new(net).key(&assignment);
        Explanation {
            assignment,
            scores,
            name_key,
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Ranking order: higher GBF first, then fewer variables, then names.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .scores
            .gbf
            .cmp(&self.scores.gbf)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.name_key.cmp(&other.name_key))
    }
}

/// Name ranks of every variable and state of a network.
#[derive(Debug, Clone)]
struct NameOrder {
    var_rank: Vec<u32>,
    state_rank: Vec<Vec<u32>>,
}

fn ranks<S: AsRef<str>>(names: &[S]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].as_ref().cmp(names[b].as_ref()));
    let mut out = vec![0; names.len()];
    for (rank, i) in order.into_iter().enumerate() {
        out[i] = rank as u32;
    }
    out
}

impl NameOrder {
    fn new<T: Real>(net: &Network<T>) -> Self {
        let names: Vec<&str> = net.variables().iter().map(|v| v.name.as_str()).collect();
        NameOrder {
            var_rank: ranks(&names),
            state_rank: net.variables().iter().map(|v| ranks(&v.states)).collect(),
        }
    }

    fn key(&self, a: &Assignment) -> Vec<(u32, u32)> {
        let mut key: Vec<(u32, u32)> = a
            .iter()
            .map(|(v, s)| (self.var_rank[v.0], self.state_rank[v.0][s]))
            .collect();
        key.sort_unstable();
        key
    }
}

/// `a` is a strict subset of `b` and scores at least as high.
pub fn strongly_dominates<T: Real>(a: &Explanation<T>, b: &Explanation<T>) -> bool {
    a.assignment.is_strict_subset_of(&b.assignment) && a.scores.gbf >= b.scores.gbf
}

/// `a` is a strict superset of `b` and scores strictly higher.
pub fn weakly_dominates<T: Real>(a: &Explanation<T>, b: &Explanation<T>) -> bool {
    b.assignment.is_strict_subset_of(&a.assignment) && a.scores.gbf > b.scores.gbf
}

pub fn dominates<T: Real>(a: &Explanation<T>, b: &Explanation<T>) -> bool {
    strongly_dominates(a, b) || weakly_dominates(a, b)
}

/// Neither strongly nor weakly dominated by any member of `all`.
pub fn is_minimal<T: Real>(x: &Explanation<T>, all: &[Explanation<T>]) -> bool {
    !all.iter().any(|y| dominates(y, x))
}

/// Streams every non-empty partial instantiation of `targets`, ordered by
/// size, then by variable subset (lexicographic on target position), then
/// by state tuple.
#[derive(Debug, Clone)]
pub struct ExplanationIter {
    targets: Vec<VarId>,
    cards: Vec<usize>,
    combo: Vec<usize>,
    states: Vec<usize>,
    done: bool,
}

impl ExplanationIter {
    fn new(targets: Vec<VarId>, cards: Vec<usize>) -> Self {
        let done = targets.is_empty();
        ExplanationIter {
            targets,
            cards,
            combo: vec![0],
            states: vec![0],
            done,
        }
    }

    fn advance(&mut self) {
        // next state tuple
        for k in (0..self.states.len()).rev() {
            self.states[k] += 1;
            if self.states[k] < self.cards[self.combo[k]] {
                return;
            }
            self.states[k] = 0;
        }
        // next subset of the same size
        let n = self.targets.len();
        let m = self.combo.len();
        for k in (0..m).rev() {
            if self.combo[k] < n - m + k {
                self.combo[k] += 1;
                for j in k + 1..m {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
        // next size
        if m == n {
            self.done = true;
        } else {
            self.combo = (0..m + 1).collect();
            self.states = vec![0; m + 1];
        }
    }
}

impl Iterator for ExplanationIter {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = self
            .combo
            .iter()
            .zip(&self.states)
            .map(|(&k, &s)| (self.targets[k], s))
            .collect();
        self.advance();
        Some(out)
    }
}

/// `Π(|states| + 1) − 1`, saturating.
pub fn candidate_count(cards: &[usize]) -> u128 {
    cards
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128 + 1))
        - 1
}

fn sorted_targets<T: Real>(net: &Network<T>, targets: &[VarId]) -> Result<Vec<VarId>> {
    if targets.is_empty() {
        return Err(Error::EmptyAssignment("target set"));
    }
    let mut t = targets.to_vec();
    t.sort_unstable();
    t.dedup();
    if let Some(v) = t.iter().find(|v| v.0 >= net.len()) {
        return Err(Error::UnknownVariable(format!("#{}", v.0)));
    }
    Ok(t)
}

pub fn enumerate_explanations<T: Real>(net: &Network<T>, targets: &[VarId], budget: usize) -> Result<ExplanationIter> {
    let targets = sorted_targets(net, targets)?;
    let cards: Vec<usize> = targets.iter().map(|&t| net.cardinality(t)).collect();
    let count = candidate_count(&cards);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "candidate enumeration",
            needed: count,
            budget: budget as u128,
        });
    }
    Ok(ExplanationIter::new(targets, cards))
}

/// Widens each axis of a row-major table from `c` to `c + 1` entries, the
/// extra entry holding the sum over the axis.
fn widen<T: Real>(table: &[T], cards: &[usize]) -> Vec<T> {
    let mut data = table.to_vec();
    let mut dims = cards.to_vec();
    for k in 0..dims.len() {
        let outer: usize = dims[..k].iter().product();
        let inner: usize = dims[k + 1..].iter().product();
        let c = dims[k];
        let mut next = vec![T::zero(); outer * (c + 1) * inner];
        for o in 0..outer {
            for s in 0..c {
                let src = (o * c + s) * inner;
                let dst = (o * (c + 1) + s) * inner;
                let sum_at = (o * (c + 1) + c) * inner;
                for i in 0..inner {
                    let v = data[src + i];
                    next[dst + i] = v;
                    next[sum_at + i] = next[sum_at + i] + v;
                }
            }
        }
        data = next;
        dims[k] = c + 1;
    }
    data
}

/// All candidates for one `(targets, evidence)` query with their scores.
#[derive(Debug, Clone)]
pub struct CandidateSpace<'n, T = f64> {
    net: &'n Network<T>,
    targets: Vec<VarId>,
    cards: Vec<usize>,
    strides: Vec<usize>,
    prior: Vec<T>,
    posterior: Vec<T>,
    scores: Vec<Option<ScoreBundle<T>>>,
    names: NameOrder,
}

impl<'n, T: Real> CandidateSpace<'n, T> {
    pub fn new(net: &'n Network<T>, targets: &[VarId], evidence: &Assignment, options: &SolverOptions) -> Result<Self> {
        let targets = sorted_targets(net, targets)?;
        if let Some(&v) = targets.iter().find(|&&v| evidence.contains(v)) {
            return Err(Error::Overlap(net.variable(v).name.clone()));
        }
        let cards: Vec<usize> = targets.iter().map(|&t| net.cardinality(t)).collect();
        let count = candidate_count(&cards);
        if count > options.candidate_budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "candidate enumeration",
                needed: count,
                budget: options.candidate_budget as u128,
            });
        }
        let tables = target_tables(net, &targets, evidence, options.table_budget)?;
        Self::from_tables(net, &tables, options)
    }

    /// Builds the space from precomputed joint tables over the targets.
    pub fn from_tables(net: &'n Network<T>, tables: &TargetTables<T>, options: &SolverOptions) -> Result<Self> {
        let targets = tables.targets.clone();
        let cards = tables.cards.clone();
        let count = candidate_count(&cards);
        if count > options.candidate_budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "candidate enumeration",
                needed: count,
                budget: options.candidate_budget as u128,
            });
        }
        let prior = widen(&tables.prior, &cards);
        let posterior = widen(&tables.posterior, &cards);
        let radix: Vec<usize> = cards.iter().map(|c| c + 1).collect();
        let mut strides = vec![1; radix.len()];
        for k in (0..radix.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * radix[k + 1];
        }
        let empty = prior.len() - 1;
        let scores = prior
            .iter()
            .zip(&posterior)
            .enumerate()
            .map(|(i, (&p, &q))| {
                if i == empty {
                    return None;
                }
                ScoreBundle::from_probabilities(p, q)
                    .ok()
                    .filter(|b| !b.posterior.is_zero())
            })
            .collect();
        Ok(CandidateSpace {
            net,
            targets,
            cards,
            strides,
            prior,
            posterior,
            scores,
            names: NameOrder::new(net),
        })
    }

    pub fn network(&self) -> &'n Network<T> {
        self.net
    }

    pub fn targets(&self) -> &[VarId] {
        &self.targets
    }

    /// Number of non-empty partial instantiations.
    pub fn candidate_count(&self) -> usize {
        self.prior.len() - 1
    }

    /// Lattice slot of `a`, or `None` when it binds a non-target or is empty.
    pub fn index_of(&self, a: &Assignment) -> Option<usize> {
        if a.is_empty() || a.vars().any(|v| !self.targets.contains(&v)) {
            return None;
        }
        Some(
            self.targets
                .iter()
                .enumerate()
                .map(|(k, &t)| a.get(t).unwrap_or(self.cards[k]) * self.strides[k])
                .sum(),
        )
    }

    pub fn assignment_at(&self, index: usize) -> Assignment {
        let radix: Vec<usize> = self.cards.iter().map(|c| c + 1).collect();
        decode(index, &radix)
            .into_iter()
            .enumerate()
            .filter(|&(k, d)| d < self.cards[k])
            .map(|(k, d)| (self.targets[k], d))
            .collect()
    }

    pub fn prior_at(&self, index: usize) -> T {
        self.prior[index]
    }

    pub fn posterior_at(&self, index: usize) -> T {
        self.posterior[index]
    }

    /// Scores of an admissible candidate: prior strictly inside `(0, 1)` and
    /// positive posterior. Others return `None`.
    pub fn scores_at(&self, index: usize) -> Option<ScoreBundle<T>> {
        self.scores[index]
    }

    pub fn explanation_at(&self, index: usize) -> Option<Explanation<T>> {
        let scores = self.scores[index]?;
        let assignment = self.assignment_at(index);
        let name_key = self.names.key(&assignment);
        Some(Explanation {
            assignment,
            scores,
            name_key,
        })
    }

    /// Lattice slots in enumeration order.
    pub fn enumeration_order(&self) -> Vec<usize> {
        ExplanationIter::new(self.targets.clone(), self.cards.clone())
            .map(|a| self.index_of(&a).expect("enumerated assignments bind targets"))
            .collect()
    }

    /// Admissible candidates, scored, in enumeration order.
    pub fn explanations(&self) -> Vec<Explanation<T>> {
        self.enumeration_order()
            .into_iter()
            .filter_map(|i| self.explanation_at(i))
            .collect()
    }

    fn digit(&self, index: usize, k: usize) -> usize {
        (index / self.strides[k]) % (self.cards[k] + 1)
    }

    /// For every slot, whether it is an admissible candidate that no other
    /// admissible candidate strongly or weakly dominates.
    ///
    /// Runs in `O(slots × targets)`: a best-superset and a best-subset table
    /// are built one axis at a time.
    pub fn minimal_flags(&self) -> Vec<bool> {
        let gbf: Vec<T> = self
            .scores
            .iter()
            .map(|s| s.map_or(T::neg_infinity(), |b| b.gbf.value()))
            .collect();
        let n = gbf.len();
        let mut up = gbf.clone();
        let mut down = gbf.clone();
        for k in 0..self.targets.len() {
            let c = self.cards[k];
            let st = self.strides[k];
            for i in 0..n {
                let d = self.digit(i, k);
                if d == c {
                    let base = i - c * st;
                    for s in 0..c {
                        up[i] = up[i].max(up[base + s * st]);
                    }
                } else {
                    let unbound = i + (c - d) * st;
                    down[i] = down[i].max(down[unbound]);
                }
            }
        }
        (0..n)
            .map(|i| {
                if self.scores[i].is_none() {
                    return false;
                }
                let g = gbf[i];
                for k in 0..self.targets.len() {
                    let c = self.cards[k];
                    let st = self.strides[k];
                    let d = self.digit(i, k);
                    if d == c {
                        let base = i - c * st;
                        if (0..c).any(|s| up[base + s * st] > g) {
                            return false;
                        }
                    } else if down[i + (c - d) * st] >= g {
                        return false;
                    }
                }
                true
            })
            .collect()
    }

    /// Best admissible candidate under the ranking order.
    pub fn best(&self) -> Result<Explanation<T>> {
        let mut best: Option<Explanation<T>> = None;
        for i in 0..self.scores.len() {
            if let Some(e) = self.explanation_at(i) {
                if best.as_ref().is_none_or(|b| e.rank_cmp(b) == Ordering::Less) {
                    best = Some(e);
                }
            }
        }
        best.ok_or(Error::NoCandidates)
    }

    /// Streams the slots in `order` through a pool of capacity `k`.
    pub fn pool_from(&self, k: usize, rule: PoolRule, order: &[usize], jobs: usize) -> Result<SolutionPool<T>> {
        let flags = match rule {
            PoolRule::Lattice => Some(self.minimal_flags()),
            PoolRule::MembersOnly => None,
        };
        let admit = |i: usize| flags.as_ref().is_none_or(|f| f[i]);
        let fill = |slots: &[usize]| -> Result<SolutionPool<T>> {
            let mut pool = SolutionPool::new(k)?;
            for &i in slots {
                if !admit(i) {
                    continue;
                }
                if let Some(e) = self.explanation_at(i) {
                    pool.offer(e);
                }
            }
            Ok(pool)
        };
        let pool = if jobs <= 1 || order.len() < 2 {
            fill(order)?
        } else {
            let chunk = order.len().div_ceil(jobs);
            let threads = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            let parts: Vec<SolutionPool<T>> =
                threads.install(|| order.par_chunks(chunk).map(fill).collect::<Result<Vec<_>>>())?;
            let mut merged = SolutionPool::new(k)?;
            for part in parts {
                merged.merge(part);
            }
            merged
        };
        if pool.is_empty() && self.scores.iter().all(Option::is_none) {
            return Err(Error::NoCandidates);
        }
        Ok(pool)
    }
}

/// Top-K pool of mutually non-dominating explanations.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPool<T = f64> {
    capacity: usize,
    members: Vec<Explanation<T>>,
}

impl<T: Real> SolutionPool<T> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidArgument("pool capacity must be at least 1".into()));
        }
        Ok(SolutionPool {
            capacity,
            members: Vec::with_capacity(capacity + 1),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() >= self.capacity
    }

    pub fn members(&self) -> &[Explanation<T>] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Explanation<T>> {
        self.members
    }

    /// Offers a newcomer to the pool; returns whether it was admitted.
    ///
    /// A full pool rejects anything not ranked above its worst member. A
    /// newcomer dominated by a member is rejected; otherwise it is inserted,
    /// members it dominates are evicted, and the worst member is dropped if
    /// the pool overflows.
    pub fn offer(&mut self, candidate: Explanation<T>) -> bool {
        if self.is_full() {
            let worst = self.members.last().expect("full pool is nonempty");
            if candidate.rank_cmp(worst) != Ordering::Less {
                return false;
            }
        }
        if self.members.iter().any(|m| dominates(m, &candidate)) {
            return false;
        }
        self.members.retain(|m| !dominates(&candidate, m));
        let at = self
            .members
            .partition_point(|m| m.rank_cmp(&candidate) == Ordering::Less);
        self.members.insert(at, candidate);
        self.members.truncate(self.capacity);
        true
    }

    /// Re-offers every member of `other`.
    pub fn merge(&mut self, other: SolutionPool<T>) {
        for m in other.members {
            self.offer(m);
        }
    }
}

/// Highest-scoring explanation; ties go to fewer variables, then lexicographic names.
pub fn solve_mre<T: Real>(
    net: &Network<T>,
    targets: &[VarId],
    evidence: &Assignment,
    options: &SolverOptions,
) -> Result<Explanation<T>> {
    CandidateSpace::new(net, targets, evidence, options)?.best()
}

/// Top-`k` minimal explanations.
pub fn solve_kmre<T: Real>(
    net: &Network<T>,
    targets: &[VarId],
    evidence: &Assignment,
    k: usize,
    options: &SolverOptions,
) -> Result<SolutionPool<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let space = CandidateSpace::new(net, targets, evidence, options)?;
    let order = space.enumeration_order();
    space.pool_from(k, options.rule, &order, options.jobs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Cpt, Role, Variable};

    fn binary_targets(n: usize) -> Network {
        let vars = (0..n)
            .map(|i| Variable::new(format!("T{i}"), &["ok", "bad"], Role::Target, Some("ok")))
            .collect();
        let cpts = (0..n).map(|i| Cpt::new(VarId(i), vec![], vec![0.5, 0.5])).collect();
        Network::new("flat", vars, cpts).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let net = binary_targets(4);
        let all: Vec<VarId> = net.var_ids().collect();
        assert_eq!(enumerate_explanations(&net, &all[..3], 100).unwrap().count(), 26);
        assert_eq!(enumerate_explanations(&net, &all, 100).unwrap().count(), 80);

        let mixed = Network::new(
            "mixed",
            vec![
                Variable::new("A", &["ok", "bad"], Role::Target, Some("ok")),
                Variable::new("B", &["ok", "x", "y"], Role::Target, Some("ok")),
            ],
            vec![
                Cpt::new(VarId(0), vec![], vec![0.5, 0.5]),
                Cpt::new(VarId(1), vec![], vec![0.2, 0.3, 0.5]),
            ],
        )
        .unwrap();
        let items: Vec<Assignment> = enumerate_explanations(&mixed, &[VarId(0), VarId(1)], 100).unwrap().collect();
        assert_eq!(items.len(), 11);
        let distinct: std::collections::BTreeSet<_> = items.iter().cloned().collect();
        assert_eq!(distinct.len(), 11);
        // sizes never decrease
        assert!(items.windows(2).all(|w| w[0].len() <= w[1].len()));
        assert_eq!(items[0], Assignment::new().with(VarId(0), 0));
        assert_eq!(items[2], Assignment::new().with(VarId(1), 0));
    }

    #[test]
    fn enumeration_budget() {
        let net = binary_targets(4);
        let all: Vec<VarId> = net.var_ids().collect();
        let err = enumerate_explanations(&net, &all, 79).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 80, .. }));
        assert!(enumerate_explanations(&net, &[], 79).is_err());
    }

    #[test]
    fn widen_adds_marginal_slots() {
        let w = widen(&[0.1f64, 0.2, 0.3, 0.4], &[2, 2]);
        let expect = [0.1, 0.2, 0.3, 0.3, 0.4, 0.7, 0.4, 0.6, 1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    fn expl(net: &Network, pairs: &[(usize, usize)], gbf: f64) -> Explanation {
        let a: Assignment = pairs.iter().map(|&(v, s)| (VarId(v), s)).collect();
        let mut scores = ScoreBundle::from_probabilities(0.5, 0.5).unwrap();
        scores.gbf = crate::scoring::Score::new(gbf).unwrap();
        Explanation::new(net, a, scores)
    }

    #[test]
    fn dominance_relations() {
        let net = binary_targets(4);
        let bc = expl(&net, &[(1, 1), (2, 1)], 42.62);
        let abc = expl(&net, &[(0, 0), (1, 1), (2, 1)], 42.15);
        let a_b = expl(&net, &[(0, 1), (1, 0)], 36.98);
        assert!(strongly_dominates(&bc, &abc));
        assert!(!weakly_dominates(&bc, &abc));
        assert!(!strongly_dominates(&bc, &bc));
        assert!(!weakly_dominates(&bc, &bc));
        assert!(!strongly_dominates(&bc, &a_b));
        assert!(!weakly_dominates(&bc, &a_b));

        let b = expl(&net, &[(1, 1)], 16.6);
        assert!(weakly_dominates(&bc, &b));
        let b_equal = expl(&net, &[(1, 1)], 42.62);
        assert!(!weakly_dominates(&bc, &b_equal));
        assert!(strongly_dominates(&b_equal, &bc));
    }

    #[test]
    fn pool_keeps_capacity_and_order() {
        let net = binary_targets(4);
        let mut pool = SolutionPool::new(2).unwrap();
        assert!(pool.offer(expl(&net, &[(0, 1)], 3.0)));
        assert!(pool.offer(expl(&net, &[(1, 1)], 5.0)));
        // dominated by (T0=bad) at 3.0
        assert!(!pool.offer(expl(&net, &[(0, 1), (3, 0)], 2.5)));
        // below the worst member of a full pool
        assert!(!pool.offer(expl(&net, &[(2, 1)], 1.0)));
        // evicts the subset it weakly dominates
        assert!(pool.offer(expl(&net, &[(0, 1), (2, 0)], 4.0)));
        let scores: Vec<f64> = pool.members().iter().map(|m| m.scores.gbf.value()).collect();
        assert_eq!(scores, vec![5.0, 4.0]);
        assert!(SolutionPool::<f64>::new(0).is_err());
    }

    #[test]
    fn ties_prefer_fewer_variables_then_names() {
        let net = binary_targets(3);
        let a = expl(&net, &[(1, 1)], 2.0);
        let b = expl(&net, &[(0, 1), (2, 1)], 2.0);
        let c = expl(&net, &[(0, 1)], 2.0);
        assert_eq!(a.rank_cmp(&b), Ordering::Less);
        assert_eq!(c.rank_cmp(&a), Ordering::Less);
        let inf1 = expl(&net, &[(2, 1)], f64::INFINITY);
        let inf2 = expl(&net, &[(1, 0)], f64::INFINITY);
        assert_eq!(inf2.rank_cmp(&inf1), Ordering::Less);
    }
}
