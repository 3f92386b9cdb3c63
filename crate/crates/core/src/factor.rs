//! Dense table factors over discrete variables.

use crate::network::{Assignment, VarId};
use crate::real::Real;

/// A nonnegative function over the joint states of `vars`.
///
/// `vars` is kept sorted by id; `values` is row-major with the last variable
/// varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor<T> {
    vars: Vec<VarId>,
    cards: Vec<usize>,
    values: Vec<T>,
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

impl<T: Real> Factor<T> {
    pub fn scalar(value: T) -> Self {
        Factor {
            vars: Vec::new(),
            cards: Vec::new(),
            values: vec![value],
        }
    }

    /// Builds a factor from a table laid out over `vars` in the given order,
    /// permuting it into canonical (sorted) order.
    pub fn from_table(vars: &[VarId], cards: &[usize], values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), cards.iter().product::<usize>());
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by_key(|&i| vars[i]);
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return Factor {
                vars: vars.to_vec(),
                cards: cards.to_vec(),
                values,
            };
        }
        let sorted_vars: Vec<VarId> = order.iter().map(|&i| vars[i]).collect();
        let sorted_cards: Vec<usize> = order.iter().map(|&i| cards[i]).collect();
        let src_strides = strides(cards);
        let mut out = vec![T::zero(); values.len()];
        let mut digits = vec![0usize; vars.len()];
        for slot in out.iter_mut() {
            let src: usize = order.iter().zip(&digits).map(|(&o, &d)| d * src_strides[o]).sum();
            *slot = values[src];
            increment(&mut digits, &sorted_cards);
        }
        Factor {
            vars: sorted_vars,
            cards: sorted_cards,
            values: out,
        }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Fixes the variables bound in `evidence`, dropping them from the scope.
    pub fn reduce(&self, evidence: &Assignment) -> Self {
        let bound: Vec<Option<usize>> = self.vars.iter().map(|&v| evidence.get(v)).collect();
        if bound.iter().all(Option::is_none) {
            return self.clone();
        }
        let st = strides(&self.cards);
        let base: usize = bound
            .iter()
            .zip(&st)
            .filter_map(|(b, s)| b.map(|state| state * s))
            .sum();
        let free: Vec<usize> = (0..self.vars.len()).filter(|&i| bound[i].is_none()).collect();
        let vars: Vec<VarId> = free.iter().map(|&i| self.vars[i]).collect();
        let cards: Vec<usize> = free.iter().map(|&i| self.cards[i]).collect();
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0usize; free.len()];
        for _ in 0..size {
            let idx = base + free.iter().zip(&digits).map(|(&i, &d)| d * st[i]).sum::<usize>();
            values.push(self.values[idx]);
            increment(&mut digits, &cards);
        }
        Factor { vars, cards, values }
    }

    /// Scope and cardinalities of the product of `self` and `other`.
    pub fn product_scope(&self, other: &Self) -> (Vec<VarId>, Vec<usize>) {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let mut cards = Vec::with_capacity(vars.capacity());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() || j < other.vars.len() {
            let take_left = j >= other.vars.len() || (i < self.vars.len() && self.vars[i] <= other.vars[j]);
            if take_left {
                if j < other.vars.len() && self.vars[i] == other.vars[j] {
                    j += 1;
                }
                vars.push(self.vars[i]);
                cards.push(self.cards[i]);
                i += 1;
            } else {
                vars.push(other.vars[j]);
                cards.push(other.cards[j]);
                j += 1;
            }
        }
        (vars, cards)
    }

    pub fn product(&self, other: &Self) -> Self {
        let (vars, cards) = self.product_scope(other);
        let size: usize = cards.iter().product();
        let project = |f: &Self| -> Vec<usize> {
            let st = strides(&f.cards);
            vars.iter()
                .map(|v| f.vars.iter().position(|x| x == v).map_or(0, |k| st[k]))
                .collect()
        };
        let (sa, sb) = (project(self), project(other));
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0usize; vars.len()];
        let (mut ia, mut ib) = (0usize, 0usize);
        for _ in 0..size {
            values.push(self.values[ia] * other.values[ib]);
            // odometer step, keeping both source offsets in sync
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                ia += sa[k];
                ib += sb[k];
                if digits[k] < cards[k] {
                    break;
                }
                ia -= sa[k] * cards[k];
                ib -= sb[k] * cards[k];
                digits[k] = 0;
            }
        }
        Factor { vars, cards, values }
    }

    pub fn sum_out(&self, var: VarId) -> Self {
        let Some(k) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let card = self.cards[k];
        let inner: usize = self.cards[k + 1..].iter().product();
        let outer: usize = self.cards[..k].iter().product();
        let mut values = vec![T::zero(); outer * inner];
        for o in 0..outer {
            for s in 0..card {
                let src = (o * card + s) * inner;
                for i in 0..inner {
                    values[o * inner + i] = values[o * inner + i] + self.values[src + i];
                }
            }
        }
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        vars.remove(k);
        cards.remove(k);
        Factor { vars, cards, values }
    }

    pub fn scale(&mut self, by: T) {
        for v in &mut self.values {
            *v = *v * by;
        }
    }

    /// Sums the table down onto `keep` (which must be a subset of the scope),
    /// returned in the order of `keep`'s sorted ids.
    pub fn marginal(&self, keep: &[VarId]) -> Self {
        let mut f = self.clone();
        for &v in &self.vars {
            if !keep.contains(&v) {
                f = f.sum_out(v);
            }
        }
        f
    }

    pub fn value_at(&self, assignment: &Assignment) -> T {
        let st = strides(&self.cards);
        let idx: usize = self
            .vars
            .iter()
            .zip(&st)
            .map(|(&v, s)| assignment.get(v).unwrap_or(0) * s)
            .sum();
        self.values[idx]
    }
}

/// Advances a mixed-radix counter, last digit fastest.
pub(crate) fn increment(digits: &mut [usize], cards: &[usize]) {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < cards[k] {
            return;
        }
        digits[k] = 0;
    }
}

/// Decodes a row-major index over `cards` (last fastest) into digits.
pub(crate) fn decode(mut index: usize, cards: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; cards.len()];
    for k in (0..cards.len()).rev() {
        digits[k] = index % cards[k];
        index /= cards[k];
    }
    digits
}
