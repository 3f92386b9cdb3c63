//! Discrete Bayesian network: variables with diagnostic roles, CPTs, and
//! partial assignments over them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Index of a variable inside its [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Target,
    Observation,
    Auxiliary,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Target => "target",
            Role::Observation => "observation",
            Role::Auxiliary => "auxiliary",
        }
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "target" => Ok(Role::Target),
            "observation" => Ok(Role::Observation),
            "auxiliary" => Ok(Role::Auxiliary),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
    pub role: Role,
    /// Index of the "ok" state. Every other state counts as faulty.
    pub normal: Option<usize>,
}

impl Variable {
    pub fn new(name: impl Into<String>, states: &[&str], role: Role, normal: Option<&str>) -> Self {
        let states: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let normal = normal.and_then(|n| states.iter().position(|s| s == n));
        Variable {
            name: name.into(),
            states,
            role,
            normal,
        }
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    /// A state is faulty when the variable has a normal state and `state` is a different one.
    pub fn is_faulty(&self, state: usize) -> bool {
        matches!(self.normal, Some(n) if n != state)
    }
}

/// Conditional probability table `P(child | parents)`.
///
/// Rows enumerate parent configurations in row-major order with the last
/// parent varying fastest; each row lists the child-state probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt<T = f64> {
    pub child: VarId,
    pub parents: Vec<VarId>,
    pub table: Vec<T>,
}

impl<T: Real> Cpt<T> {
    pub fn new(child: VarId, parents: Vec<VarId>, table: Vec<T>) -> Self {
        Cpt {
            child,
            parents,
            table,
        }
    }

    /// Row index of the parent configuration read from a full assignment lookup.
    pub fn row_of(&self, cards: &[usize], state_of: impl Fn(VarId) -> usize) -> usize {
        self.parents
            .iter()
            .fold(0, |row, &p| row * cards[p.0] + state_of(p))
    }

    pub fn row(&self, row: usize, child_card: usize) -> &[T] {
        &self.table[row * child_card..(row + 1) * child_card]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network<T = f64> {
    name: String,
    variables: Vec<Variable>,
    cpts: Vec<Cpt<T>>,
    cards: Vec<usize>,
    topo: Vec<VarId>,
    children: Vec<Vec<VarId>>,
    by_name: HashMap<String, VarId>,
}

impl<T: Real> Network<T> {
    /// Validates and assembles a network. `cpts` may come in any order but
    /// must contain exactly one table per variable.
    pub fn new(name: impl Into<String>, variables: Vec<Variable>, cpts: Vec<Cpt<T>>) -> Result<Self> {
        let name = name.into();
        let mut by_name = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            validate_variable(v)?;
            if by_name.insert(v.name.clone(), VarId(i)).is_some() {
                return Err(Error::InvalidNetwork(format!("variable `{}` declared twice", v.name)));
            }
        }
        let cards: Vec<usize> = variables.iter().map(Variable::cardinality).collect();

        let mut slots: Vec<Option<Cpt<T>>> = vec![None; variables.len()];
        for mut cpt in cpts {
            let child = cpt.child.0;
            if child >= variables.len() {
                return Err(Error::InvalidNetwork(format!("cpt for unknown variable index {child}")));
            }
            let child_name = &variables[child].name;
            if slots[child].is_some() {
                return Err(Error::InvalidNetwork(format!("variable `{child_name}` has two cpts")));
            }
            let mut seen = BTreeSet::new();
            for p in &cpt.parents {
                if p.0 >= variables.len() {
                    return Err(Error::InvalidNetwork(format!(
                        "cpt `{child_name}` references unknown parent index {}",
                        p.0
                    )));
                }
                if *p == cpt.child || !seen.insert(*p) {
                    return Err(Error::InvalidNetwork(format!(
                        "cpt `{child_name}` lists parent `{}` twice or as itself",
                        variables[p.0].name
                    )));
                }
            }
            normalize_table(child_name, &mut cpt, &cards)?;
            slots[child] = Some(cpt);
        }
        let cpts = slots
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::InvalidNetwork(format!("variable `{}` has no cpt", variables[i].name))))
            .collect::<Result<Vec<_>>>()?;

        let mut children = vec![Vec::new(); variables.len()];
        for cpt in &cpts {
            for p in &cpt.parents {
                children[p.0].push(cpt.child);
            }
        }
        let topo = topological_order(&variables, &cpts)?;
        Ok(Network {
            name,
            variables,
            cpts,
            cards,
            topo,
            children,
            by_name,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.variables.len()).map(VarId)
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn cpt(&self, id: VarId) -> &Cpt<T> {
        &self.cpts[id.0]
    }

    pub fn cpts(&self) -> &[Cpt<T>] {
        &self.cpts
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn cardinality(&self, id: VarId) -> usize {
        self.cards[id.0]
    }

    pub fn parents(&self, id: VarId) -> &[VarId] {
        &self.cpts[id.0].parents
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id.0]
    }

    /// Variables in a parents-first order; ties resolved by declaration order.
    pub fn topological_order(&self) -> &[VarId] {
        &self.topo
    }

    pub fn with_role(&self, role: Role) -> Vec<VarId> {
        self.var_ids().filter(|&v| self.variable(v).role == role).collect()
    }

    pub fn targets(&self) -> Vec<VarId> {
        self.with_role(Role::Target)
    }

    /// `seeds` together with every ancestor of a seed, as a membership mask.
    pub fn ancestral_closure(&self, seeds: impl IntoIterator<Item = VarId>) -> Vec<bool> {
        let mut keep = vec![false; self.len()];
        let mut stack: Vec<VarId> = seeds.into_iter().collect();
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut keep[v.0], true) {
                continue;
            }
            stack.extend(self.parents(v).iter().copied());
        }
        keep
    }

    /// `CPT(child-state | parent-states)` under a full assignment.
    pub fn local_probability(&self, id: VarId, full: &Assignment) -> Result<T> {
        let cpt = self.cpt(id);
        let mut row = 0;
        for &p in &cpt.parents {
            let s = full.get(p).ok_or_else(|| Error::UnboundVariable(self.variable(p).name.clone()))?;
            row = row * self.cards[p.0] + s;
        }
        let s = full.get(id).ok_or_else(|| Error::UnboundVariable(self.variable(id).name.clone()))?;
        Ok(cpt.table[row * self.cards[id.0] + s])
    }

    /// Resolves `name`/`state` to a binding.
    pub fn binding(&self, name: &str, state: &str) -> Result<(VarId, usize)> {
        let id = self.var_id(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let s = self.variable(id).state_index(state).ok_or_else(|| Error::UnknownState {
            variable: name.to_string(),
            state: state.to_string(),
        })?;
        Ok((id, s))
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        for (v, s) in a.iter() {
            if v.0 >= self.len() {
                return Err(Error::UnknownVariable(format!("#{}", v.0)));
            }
            if s >= self.cards[v.0] {
                return Err(Error::UnknownState {
                    variable: self.variable(v).name.clone(),
                    state: format!("#{s}"),
                });
            }
        }
        Ok(())
    }

    /// Parses `Var=state,Var=state` (whitespace around tokens is ignored).
    /// Errors carry the 1-based column of the offending token.
    pub fn parse_assignment(&self, text: &str) -> Result<Assignment> {
        let mut out = Assignment::new();
        let mut offset = 0;
        for token in text.split(',') {
            let column = offset + 1 + (token.len() - token.trim_start().len());
            offset += token.len() + 1;
            let token = token.trim();
            if token.is_empty() {
                if text.trim().is_empty() {
                    break;
                }
                return Err(Error::syntax(1, column, "empty binding"));
            }
            let (name, state) = token
                .split_once('=')
                .ok_or_else(|| Error::syntax(1, column, format!("expected `Var=state`, found `{token}`")))?;
            let (name, state) = (name.trim(), state.trim());
            let (id, s) = self.binding(name, state).map_err(|e| Error::syntax(1, column, e.to_string()))?;
            if out.insert(id, s).is_some() {
                return Err(Error::syntax(1, column, format!("variable `{name}` is bound twice")));
            }
        }
        Ok(out)
    }

    pub fn format_assignment(&self, a: &Assignment) -> String {
        a.iter()
            .map(|(v, s)| {
                let var = self.variable(v);
                format!("{}={}", var.name, var.states[s])
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Name-keyed view used by serialized records.
    pub fn named_bindings(&self, a: &Assignment) -> BTreeMap<String, String> {
        a.iter()
            .map(|(v, s)| {
                let var = self.variable(v);
                (var.name.clone(), var.states[s].clone())
            })
            .collect()
    }

    pub fn assignment_from_names<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Assignment> {
        let mut out = Assignment::new();
        for (name, state) in pairs {
            let (id, s) = self.binding(name, state)?;
            if out.insert(id, s).is_some() {
                return Err(Error::DuplicateBinding(name.to_string()));
            }
        }
        Ok(out)
    }

    /// Sort key ordering assignments lexicographically by `(variable name, state name)`.
    pub fn name_key(&self, a: &Assignment) -> Vec<(&str, &str)> {
        let mut key: Vec<(&str, &str)> = a
            .iter()
            .map(|(v, s)| {
                let var = self.variable(v);
                (var.name.as_str(), var.states[s].as_str())
            })
            .collect();
        key.sort_unstable();
        key
    }

    /// Converts every table to another scalar type.
    pub fn cast<U: Real>(&self) -> Network<U> {
        Network {
            name: self.name.clone(),
            variables: self.variables.clone(),
            cpts: self
                .cpts
                .iter()
                .map(|c| Cpt {
                    child: c.child,
                    parents: c.parents.clone(),
                    table: c.table.iter().map(|&p| U::from_f64_lossy(p.to_f64_lossy())).collect(),
                })
                .collect(),
            cards: self.cards.clone(),
            topo: self.topo.clone(),
            children: self.children.clone(),
            by_name: self.by_name.clone(),
        }
    }
}

fn validate_variable(v: &Variable) -> Result<()> {
    if v.states.len() < 2 {
        return Err(Error::InvalidNetwork(format!("variable `{}` needs at least two states", v.name)));
    }
    let unique: BTreeSet<&String> = v.states.iter().collect();
    if unique.len() != v.states.len() {
        return Err(Error::InvalidNetwork(format!("variable `{}` repeats a state name", v.name)));
    }
    if let Some(n) = v.normal {
        if n >= v.states.len() {
            return Err(Error::InvalidNetwork(format!("normal state of `{}` is out of range", v.name)));
        }
    } else if v.role == Role::Target {
        return Err(Error::MissingNormalState(v.name.clone()));
    }
    Ok(())
}

fn normalize_table<T: Real>(child: &str, cpt: &mut Cpt<T>, cards: &[usize]) -> Result<()> {
    let child_card = cards[cpt.child.0];
    let rows: usize = cpt.parents.iter().map(|p| cards[p.0]).product();
    let expected = rows * child_card;
    if cpt.table.len() != expected {
        return Err(Error::TableShape {
            child: child.to_string(),
            expected,
            found: cpt.table.len(),
        });
    }
    for entry in cpt.table.iter_mut() {
        *entry = Probability::new(*entry)
            .map_err(|_| Error::EntryOutOfRange {
                child: child.to_string(),
                value: entry.to_f64_lossy(),
            })?
            .value();
    }
    for (row, chunk) in cpt.table.chunks(child_card).enumerate() {
        let sum: T = chunk.iter().copied().sum();
        if (sum - T::one()).abs() > T::row_tolerance() {
            return Err(Error::RowNotNormalized {
                child: child.to_string(),
                row,
                sum: sum.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

fn topological_order<T>(variables: &[Variable], cpts: &[Cpt<T>]) -> Result<Vec<VarId>> {
    let n = variables.len();
    let mut indegree: Vec<usize> = cpts.iter().map(|c| c.parents.len()).collect();
    let mut children = vec![Vec::new(); n];
    for c in cpts {
        for p in &c.parents {
            children[p.0].push(c.child.0);
        }
    }
    // Smallest ready index first, so the order only depends on declaration order.
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(VarId(v));
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() != n {
        let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
        return Err(Error::Cycle(variables[stuck].name.clone()));
    }
    Ok(order)
}

/// Partial or full mapping from variables to state indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bindings: BTreeMap<VarId, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, usize)>) -> Self {
        Assignment {
            bindings: pairs.into_iter().collect(),
        }
    }

    /// Builder-style insertion.
    pub fn with(mut self, var: VarId, state: usize) -> Self {
        self.bindings.insert(var, state);
        self
    }

    /// Binds `var`, returning the state it previously held.
    pub fn insert(&mut self, var: VarId, state: usize) -> Option<usize> {
        self.bindings.insert(var, state)
    }

    pub fn remove(&mut self, var: VarId) -> Option<usize> {
        self.bindings.remove(&var)
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.bindings.get(&var).copied()
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.bindings.contains_key(&var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.bindings.iter().map(|(&v, &s)| (v, s))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.bindings.keys().copied()
    }

    pub fn is_disjoint(&self, other: &Assignment) -> bool {
        self.vars().all(|v| !other.contains(v))
    }

    /// Union of two assignments over disjoint variables.
    pub fn union(&self, other: &Assignment) -> Result<Assignment> {
        let mut out = self.clone();
        for (v, s) in other.iter() {
            if out.insert(v, s).is_some() {
                return Err(Error::Overlap(format!("#{}", v.0)));
            }
        }
        Ok(out)
    }

    /// Every binding of `self` appears, with the same state, in `other`.
    pub fn is_subset_of(&self, other: &Assignment) -> bool {
        self.iter().all(|(v, s)| other.get(v) == Some(s))
    }

    pub fn is_strict_subset_of(&self, other: &Assignment) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    /// `full` agrees with every binding of `self`.
    pub fn consistent_with(&self, full: &Assignment) -> bool {
        self.is_subset_of(full)
    }

    pub fn restrict(&self, vars: &[VarId]) -> Assignment {
        Assignment::from_pairs(self.iter().filter(|(v, _)| vars.contains(v)))
    }
}

impl FromIterator<(VarId, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (VarId, usize)>>(iter: I) -> Self {
        Assignment::from_pairs(iter)
    }
}

/// A probability in `[0, 1]`. Values within the scalar's clamp tolerance of
/// the range are clamped; anything further out is rejected.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability<T = f64>(T);

impl<T: Real> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        let tol = T::clamp_tolerance();
        if value.is_nan() || value < -tol || value > T::one() + tol {
            return Err(Error::InvalidProbability(value.to_f64_lossy()));
        }
        Ok(Probability(value.max(T::zero()).min(T::one())))
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::zero()
    }

    pub fn is_one(self) -> bool {
        self.0 == T::one()
    }
}

impl<T: Real> fmt::Display for Probability<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
