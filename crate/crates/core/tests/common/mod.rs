//! Shared test oracles: random networks and full-joint enumeration.
#![allow(dead_code)]

use std::cmp::Ordering;

use mre_core::{Assignment, Cpt, Explanation, Network, Role, VarId, Variable};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub vars: usize,
    pub max_card: usize,
    pub max_parents: usize,
    pub targets: usize,
    /// Chance that a CPT entry is forced to zero before normalization.
    pub zero_rate: f64,
}

impl Shape {
    pub fn binary(vars: usize, targets: usize) -> Self {
        Shape {
            vars,
            max_card: 2,
            max_parents: 3,
            targets,
            zero_rate: 0.0,
        }
    }
}

fn random_row<R: Rng>(rng: &mut R, card: usize, zero_rate: f64) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..card)
            .map(|_| {
                if rng.gen_bool(zero_rate) {
                    0.0
                } else {
                    rng.gen_range(0.05..1.0)
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 {
            let mut row: Vec<f64> = raw.iter().map(|v| v / total).collect();
            // make the row sum to one in floating point
            let head: f64 = row[..card - 1].iter().sum();
            row[card - 1] = (1.0 - head).max(0.0);
            return row;
        }
    }
}

/// Random DAG in index order. The first `shape.targets` variables chosen at
/// random become targets with normal state `s0`; the rest are observations or
/// auxiliaries.
pub fn random_network<R: Rng>(rng: &mut R, shape: Shape) -> Network {
    let cards: Vec<usize> = (0..shape.vars).map(|_| rng.gen_range(2..=shape.max_card)).collect();
    let mut order: Vec<usize> = (0..shape.vars).collect();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let targets: Vec<usize> = order[..shape.targets.min(shape.vars)].to_vec();
    let mut vars = Vec::new();
    let mut cpts = Vec::new();
    for i in 0..shape.vars {
        let states: Vec<String> = (0..cards[i]).map(|s| format!("s{s}")).collect();
        let states: Vec<&str> = states.iter().map(String::as_str).collect();
        let (role, normal) = if targets.contains(&i) {
            (Role::Target, Some("s0"))
        } else if rng.gen_bool(0.5) {
            (Role::Observation, Some("s0"))
        } else {
            (Role::Auxiliary, None)
        };
        vars.push(Variable::new(format!("V{i}"), &states, role, normal));
        let mut parents: Vec<VarId> = (0..i).filter(|_| rng.gen_bool(0.5)).map(VarId).collect();
        while parents.len() > shape.max_parents {
            let drop = rng.gen_range(0..parents.len());
            parents.remove(drop);
        }
        let rows: usize = parents.iter().map(|p| cards[p.0]).product();
        let table = (0..rows).flat_map(|_| random_row(rng, cards[i], shape.zero_rate)).collect();
        cpts.push(Cpt::new(VarId(i), parents, table));
    }
    Network::new("random", vars, cpts).expect("generated network is valid")
}

/// Every full assignment with its chain-rule probability.
pub struct Joint {
    pub rows: Vec<(Vec<usize>, f64)>,
}

impl Joint {
    pub fn of(net: &Network) -> Self {
        let cards = net.cards();
        let mut rows = Vec::new();
        let mut states = vec![0usize; cards.len()];
        loop {
            let mut p = 1.0;
            for v in net.var_ids() {
                let cpt = net.cpt(v);
                let mut row = 0;
                for parent in &cpt.parents {
                    row = row * cards[parent.0] + states[parent.0];
                }
                p *= cpt.table[row * cards[v.0] + states[v.0]];
            }
            rows.push((states.clone(), p));
            let mut k = cards.len();
            loop {
                if k == 0 {
                    return Joint { rows };
                }
                k -= 1;
                states[k] += 1;
                if states[k] < cards[k] {
                    break;
                }
                states[k] = 0;
            }
        }
    }

    pub fn prob(&self, a: &Assignment) -> f64 {
        self.rows
            .iter()
            .filter(|(s, _)| a.iter().all(|(v, x)| s[v.0] == x))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn posterior(&self, x: &Assignment, e: &Assignment) -> f64 {
        self.prob(&x.union(e).unwrap()) / self.prob(e)
    }

    /// `P(e|x) / P(e|x̄)`, where `x̄` is every full world disagreeing with `x`.
    pub fn gbf_by_complement(&self, x: &Assignment, e: &Assignment) -> f64 {
        let (mut px, mut pxe, mut pnx, mut pnxe) = (0.0, 0.0, 0.0, 0.0);
        for (s, p) in &self.rows {
            let in_x = x.iter().all(|(v, st)| s[v.0] == st);
            let in_e = e.iter().all(|(v, st)| s[v.0] == st);
            if in_x {
                px += p;
                if in_e {
                    pxe += p;
                }
            } else {
                pnx += p;
                if in_e {
                    pnxe += p;
                }
            }
        }
        let num = pxe / px;
        let den = pnxe / pnx;
        if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    }

    /// `P(e|x,y) / P(e|x,ȳ)`, the Bayes factor of `y` conditioned on `x`.
    pub fn cbf_by_complement(&self, y: &Assignment, x: &Assignment, e: &Assignment) -> f64 {
        let (mut pxy, mut pxye, mut pxny, mut pxnye) = (0.0, 0.0, 0.0, 0.0);
        for (s, p) in &self.rows {
            if !x.iter().all(|(v, st)| s[v.0] == st) {
                continue;
            }
            let in_y = y.iter().all(|(v, st)| s[v.0] == st);
            let in_e = e.iter().all(|(v, st)| s[v.0] == st);
            if in_y {
                pxy += p;
                if in_e {
                    pxye += p;
                }
            } else {
                pxny += p;
                if in_e {
                    pxnye += p;
                }
            }
        }
        let den = pxnye / pxny;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (pxye / pxy) / den
        }
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * 1f64.max(b.abs())
}

/// Random non-empty assignment over `pool`, each variable kept with probability one half.
pub fn random_subassignment<R: Rng>(rng: &mut R, net: &Network, pool: &[VarId]) -> Assignment {
    loop {
        let mut a = Assignment::new();
        for &v in pool {
            if rng.gen_bool(0.5) {
                a.insert(v, rng.gen_range(0..net.cardinality(v)));
            }
        }
        if !a.is_empty() || pool.is_empty() {
            return a;
        }
    }
}

fn name_pairs(net: &Network, a: &Assignment) -> Vec<(String, String)> {
    let mut pairs: Vec<(String, String)> = a
        .iter()
        .map(|(v, s)| {
            let var = net.variable(v);
            (var.name.clone(), var.states[s].clone())
        })
        .collect();
    pairs.sort();
    pairs
}

fn dominated_by(y: &Explanation, x: &Explanation) -> bool {
    let (gy, gx) = (y.scores.gbf.value(), x.scores.gbf.value());
    let strong = y.assignment.is_strict_subset_of(&x.assignment) && gy >= gx;
    let weak = x.assignment.is_strict_subset_of(&y.assignment) && gy > gx;
    strong || weak
}

/// Top `k` of the minimal set, found by checking every pair.
pub fn minimal_top_k(net: &Network, all: &[Explanation], k: usize) -> Vec<Assignment> {
    let mut minimal: Vec<&Explanation> = all
        .iter()
        .filter(|x| !all.iter().any(|y| dominated_by(y, x)))
        .collect();
    minimal.sort_by(|a, b| {
        b.scores
            .gbf
            .value()
            .partial_cmp(&a.scores.gbf.value())
            .unwrap_or(Ordering::Equal)
            .then(a.len().cmp(&b.len()))
            .then_with(|| name_pairs(net, &a.assignment).cmp(&name_pairs(net, &b.assignment)))
    });
    minimal.into_iter().take(k).map(|e| e.assignment.clone()).collect()
}

/// A scoring query: explanation `x`, addition `y`, evidence `e`, all disjoint.
#[derive(Debug, Clone)]
pub struct Triple {
    pub net: Network,
    pub x: Assignment,
    pub y: Assignment,
    pub e: Assignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    /// Unconstrained random DAG.
    Random,
    /// Random DAG plus one isolated variable `Y` that `y` binds.
    Disconnected,
    /// `Y → X… → E…`: binding every `X` separates `Y` from the evidence.
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    /// `CBF(y; e | x) ≤ 1 / r(x̄; e)` implies `GBF(x ∪ y) ≤ GBF(x)`.
    BoundaryRule,
    /// `r(x; e) ≥ 1` and `Y` independent of `X` and `E`.
    IndependentAddition,
    /// `r(x; e) ≥ 1` and `Y` independent of `E` given `x`.
    SeparatedAddition,
    /// `r(x; e) ≥ 1` and `P(y | x, e) ≤ P(y | x)`.
    DisfavouredAddition,
}

fn positive_evidence<R: Rng>(rng: &mut R, net: &Network, pool: &[VarId]) -> Option<Assignment> {
    for _ in 0..20 {
        let e = random_subassignment(rng, net, pool);
        if mre_core::prior_probability(net, &e).is_ok_and(|p| p.value() > 0.0) {
            return Some(e);
        }
    }
    None
}

fn split3<R: Rng>(rng: &mut R, vars: &[VarId]) -> [Vec<VarId>; 3] {
    let mut out: [Vec<VarId>; 3] = Default::default();
    for &v in vars {
        out[rng.gen_range(0..3)].push(v);
    }
    out
}

fn chain_network<R: Rng>(rng: &mut R) -> (Network, VarId, Vec<VarId>, Vec<VarId>) {
    let xs = rng.gen_range(1..=3);
    let es = rng.gen_range(1..=2);
    let mut vars = Vec::new();
    let mut cpts = Vec::new();
    let mut cards = Vec::new();
    let mut add = |vars: &mut Vec<Variable>, cpts: &mut Vec<Cpt>, rng: &mut R, name: String, parents: Vec<VarId>| {
        let card = rng.gen_range(2..=3);
        let states: Vec<String> = (0..card).map(|s| format!("s{s}")).collect();
        let states: Vec<&str> = states.iter().map(String::as_str).collect();
        vars.push(Variable::new(name, &states, Role::Auxiliary, None));
        let rows: usize = parents.iter().map(|p: &VarId| cards[p.0]).product();
        let table = (0..rows).flat_map(|_| random_row(rng, card, 0.0)).collect();
        cpts.push(Cpt::new(VarId(cards.len()), parents, table));
        cards.push(card);
        VarId(cards.len() - 1)
    };
    let y = add(&mut vars, &mut cpts, rng, "Y".into(), vec![]);
    let mut x_ids = Vec::new();
    for i in 0..xs {
        let mut parents: Vec<VarId> = x_ids.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if i == 0 || rng.gen_bool(0.5) {
            parents.insert(0, y);
        }
        let id = add(&mut vars, &mut cpts, rng, format!("X{i}"), parents);
        x_ids.push(id);
    }
    let mut e_ids = Vec::new();
    for i in 0..es {
        let mut parents: Vec<VarId> = x_ids.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        if parents.is_empty() {
            parents.push(x_ids[rng.gen_range(0..x_ids.len())]);
        }
        let id = add(&mut vars, &mut cpts, rng, format!("E{i}"), parents);
        e_ids.push(id);
    }
    let net = Network::new("chain", vars, cpts).expect("chain network is valid");
    (net, y, x_ids, e_ids)
}

/// Draws a query of the given structure class; `None` when the draw is degenerate.
pub fn sample_triple<R: Rng>(rng: &mut R, class: Class) -> Option<Triple> {
    match class {
        Class::Random => {
            let vars = rng.gen_range(3..=7);
            let net = random_network(
                rng,
                Shape {
                    vars,
                    max_card: 3,
                    max_parents: 2,
                    targets: 0,
                    zero_rate: 0.0,
                },
            );
            let vars: Vec<VarId> = net.var_ids().collect();
            let [xp, yp, ep] = split3(rng, &vars);
            if xp.is_empty() || yp.is_empty() || ep.is_empty() {
                return None;
            }
            let e = positive_evidence(rng, &net, &ep)?;
            let x = random_subassignment(rng, &net, &xp);
            let y = random_subassignment(rng, &net, &yp);
            Some(Triple { net, x, y, e })
        }
        Class::Disconnected => {
            let vars = rng.gen_range(2..=6);
            let base = random_network(
                rng,
                Shape {
                    vars,
                    max_card: 3,
                    max_parents: 2,
                    targets: 0,
                    zero_rate: 0.0,
                },
            );
            let mut vars = base.variables().to_vec();
            let mut cpts = base.cpts().to_vec();
            let y_card = rng.gen_range(2..=3);
            let states: Vec<String> = (0..y_card).map(|s| format!("s{s}")).collect();
            let states: Vec<&str> = states.iter().map(String::as_str).collect();
            let y_id = VarId(vars.len());
            vars.push(Variable::new("Y", &states, Role::Auxiliary, None));
            cpts.push(Cpt::new(y_id, vec![], random_row(rng, y_card, 0.0)));
            let net = Network::new("disconnected", vars, cpts).expect("valid");
            let others: Vec<VarId> = base.var_ids().collect();
            let [xp, ep, _] = split3(rng, &others);
            if xp.is_empty() || ep.is_empty() {
                return None;
            }
            let e = positive_evidence(rng, &net, &ep)?;
            let x = random_subassignment(rng, &net, &xp);
            let y = Assignment::new().with(y_id, rng.gen_range(0..y_card));
            Some(Triple { net, x, y, e })
        }
        Class::Chain => {
            let (net, y_id, xs, es) = chain_network(rng);
            let e = positive_evidence(rng, &net, &es)?;
            let x: Assignment = xs.iter().map(|&v| (v, rng.gen_range(0..net.cardinality(v)))).collect();
            let y = Assignment::new().with(y_id, rng.gen_range(0..net.cardinality(y_id)));
            Some(Triple { net, x, y, e })
        }
    }
}

pub const CONCLUSION_TOLERANCE: f64 = 1e-9;

/// `Some(holds)` when the statement's preconditions hold for `t`, `None` otherwise.
pub fn check(statement: Statement, t: &Triple) -> Option<bool> {
    use mre_core::{belief_update_ratio, cbf, gbf, inclusion_boundary};
    let xy = t.x.union(&t.y).ok()?;
    let g_x = gbf(&t.net, &t.x, &t.e).ok()?.value();
    let g_xy = gbf(&t.net, &xy, &t.e).ok()?.value();
    let pre = match statement {
        Statement::BoundaryRule => {
            let c = cbf(&t.net, &t.y, &t.x, &t.e).ok()?.value();
            let boundary = inclusion_boundary(&t.net, &t.x, &t.e).ok()?;
            c <= boundary
        }
        Statement::IndependentAddition | Statement::SeparatedAddition => belief_update_ratio(&t.net, &t.x, &t.e).ok()? >= 1.0,
        Statement::DisfavouredAddition => {
            let r = belief_update_ratio(&t.net, &t.x, &t.e).ok()?;
            let given_x = mre_core::posterior_probability(&t.net, &t.y, &t.x).ok()?.value();
            let given_xe = mre_core::posterior_probability(&t.net, &t.y, &t.x.union(&t.e).ok()?).ok()?.value();
            r >= 1.0 && given_xe <= given_x
        }
    };
    if !pre {
        return None;
    }
    Some(g_xy <= g_x || close(g_xy, g_x, CONCLUSION_TOLERANCE))
}

pub fn classes_for(statement: Statement) -> &'static [Class] {
    match statement {
        Statement::BoundaryRule | Statement::DisfavouredAddition => &[Class::Random, Class::Disconnected, Class::Chain],
        Statement::IndependentAddition => &[Class::Disconnected],
        Statement::SeparatedAddition => &[Class::Chain, Class::Disconnected],
    }
}

/// Checks `wanted` qualifying triples; returns `(checked, violations, draws)`.
pub fn run_statement<R: Rng>(rng: &mut R, statement: Statement, class: Class, wanted: usize) -> (usize, usize, usize) {
    let (mut checked, mut violations, mut draws) = (0, 0, 0);
    while checked < wanted && draws < wanted * 200 {
        draws += 1;
        let Some(t) = sample_triple(rng, class) else { continue };
        if let Some(holds) = check(statement, &t) {
            checked += 1;
            if !holds {
                violations += 1;
            }
        }
    }
    (checked, violations, draws)
}
