//! Generalized Bayes factor and the quantities built around it: the belief
//! update ratio, the conditional Bayes factor and the inclusion boundary.
//!
//! GBF is evaluated through its odds form,
//!
//! ```text
//! GBF(x; e) = P(x|e) (1 - P(x)) / (P(x) (1 - P(x|e)))
//! ```
//!
//! which needs only the prior and posterior of `x` itself. The ratio form
//! `r(x; e) / r(x̄; e)` is kept as an independent cross-check.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::inference::{check_disjoint, evidence_probability, probability_of};
use crate::network::{Assignment, Network, Probability};
use crate::real::Real;

/// Extended nonnegative real: finite values are `>= 0`, and `+inf` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Score<T = f64>(T);

impl<T: Real> Score<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.is_nan() || value < T::zero() {
            return Err(Error::InvalidArgument(format!("score {value} is not a nonnegative extended real")));
        }
        Ok(Score(value))
    }

    pub fn infinity() -> Self {
        Score(T::infinity())
    }

    pub fn zero() -> Self {
        Score(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl<T: Real> Eq for Score<T> {}

impl<T: Real> PartialOrd for Score<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Score<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // NaN is excluded by construction
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl<T: Real> fmt::Display for Score<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

/// Scores attached to one explanation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBundle<T = f64> {
    pub gbf: Score<T>,
    pub prior: Probability<T>,
    pub posterior: Probability<T>,
    pub belief_update_ratio: T,
}

impl<T: Real> ScoreBundle<T> {
    /// Scores an explanation from its prior and posterior.
    pub fn from_probabilities(prior: T, posterior: T) -> Result<Self> {
        let prior = Probability::new(prior)?;
        let posterior = Probability::new(posterior)?;
        Ok(ScoreBundle {
            gbf: odds_gbf(prior.value(), posterior.value())?,
            prior,
            posterior,
            belief_update_ratio: update_ratio(prior.value(), posterior.value()),
        })
    }
}

/// `P(x|e) / P(x)`; `+inf` when only the prior vanishes, `1` when both do.
pub fn update_ratio<T: Real>(prior: T, posterior: T) -> T {
    if prior <= T::zero() {
        if posterior > T::zero() {
            T::infinity()
        } else {
            T::one()
        }
    } else {
        posterior / prior
    }
}

fn check_prior<T: Real>(prior: T) -> Result<()> {
    if prior <= T::zero() {
        Err(Error::ImpossibleExplanation)
    } else if prior >= T::one() {
        Err(Error::CertainExplanation)
    } else {
        Ok(())
    }
}

/// Odds-form GBF from the prior and posterior of an explanation.
pub fn odds_gbf<T: Real>(prior: T, posterior: T) -> Result<Score<T>> {
    check_prior(prior)?;
    if posterior <= T::zero() {
        return Ok(Score::zero());
    }
    if posterior >= T::one() {
        return Ok(Score::infinity());
    }
    Score::new(posterior * (T::one() - prior) / (prior * (T::one() - posterior)))
}

/// GBF as the ratio of the belief update ratios of `x` and its complement.
pub fn ratio_gbf<T: Real>(prior: T, posterior: T) -> Result<Score<T>> {
    check_prior(prior)?;
    let r_x = posterior / prior;
    let r_complement = (T::one() - posterior) / (T::one() - prior);
    if r_complement <= T::zero() {
        return Ok(Score::infinity());
    }
    Score::new(r_x / r_complement)
}

/// `(1 - P(x)) / (1 - P(x|e))`, the inverse belief update ratio of `x̄`.
pub fn boundary_of<T: Real>(prior: T, posterior: T) -> Result<T> {
    check_prior(prior)?;
    if posterior >= T::one() {
        return Err(Error::InfiniteBoundary);
    }
    Ok((T::one() - prior) / (T::one() - posterior))
}

/// Conditional Bayes factor from `P(y|x)` and `P(y|x,e)`.
pub fn conditional_odds<T: Real>(given_x: T, given_xe: T) -> Result<Score<T>> {
    if given_x <= T::zero() || given_x >= T::one() {
        return Err(Error::DegenerateConditional(given_x.to_f64_lossy()));
    }
    if given_xe <= T::zero() {
        return Ok(Score::zero());
    }
    if given_xe >= T::one() {
        return Ok(Score::infinity());
    }
    Score::new(given_xe * (T::one() - given_x) / (given_x * (T::one() - given_xe)))
}

/// Clamped `(P(x), P(x|e))` after checking the query shape.
fn prior_posterior<T: Real>(net: &Network<T>, x: &Assignment, e: &Assignment) -> Result<(T, T)> {
    if x.is_empty() {
        return Err(Error::EmptyAssignment("explanation"));
    }
    net.check_assignment(x)?;
    check_disjoint(net, x, e)?;
    let pe = evidence_probability(net, e)?;
    let prior = Probability::new(probability_of(net, x)?)?.value();
    let posterior = Probability::new(probability_of(net, &x.union(e)?)? / pe)?.value();
    Ok((prior, posterior))
}

pub fn belief_update_ratio<T: Real>(net: &Network<T>, x: &Assignment, e: &Assignment) -> Result<T> {
    let (prior, posterior) = prior_posterior(net, x, e)?;
    Ok(update_ratio(prior, posterior))
}

pub fn gbf<T: Real>(net: &Network<T>, x: &Assignment, e: &Assignment) -> Result<Score<T>> {
    let (prior, posterior) = prior_posterior(net, x, e)?;
    odds_gbf(prior, posterior)
}

pub fn gbf_ratio_form<T: Real>(net: &Network<T>, x: &Assignment, e: &Assignment) -> Result<Score<T>> {
    let (prior, posterior) = prior_posterior(net, x, e)?;
    ratio_gbf(prior, posterior)
}

pub fn score_bundle<T: Real>(net: &Network<T>, x: &Assignment, e: &Assignment) -> Result<ScoreBundle<T>> {
    let (prior, posterior) = prior_posterior(net, x, e)?;
    ScoreBundle::from_probabilities(prior, posterior)
}

/// `CBF(y; e | x)`: the Bayes factor of adding `y` to an explanation `x`.
pub fn cbf<T: Real>(net: &Network<T>, y: &Assignment, x: &Assignment, e: &Assignment) -> Result<Score<T>> {
    if y.is_empty() {
        return Err(Error::EmptyAssignment("added hypothesis"));
    }
    if x.is_empty() {
        return Err(Error::EmptyAssignment("explanation"));
    }
    net.check_assignment(y)?;
    net.check_assignment(x)?;
    check_disjoint(net, y, x)?;
    check_disjoint(net, y, e)?;
    check_disjoint(net, x, e)?;
    let xy = x.union(y)?;
    let xe = x.union(e)?;
    let p_x = probability_of(net, x)?;
    let p_xe = probability_of(net, &xe)?;
    if p_xe <= T::zero() {
        return Err(Error::ZeroProbabilityEvidence);
    }
    let given_x = Probability::new(probability_of(net, &xy)? / p_x)?.value();
    let given_xe = Probability::new(probability_of(net, &xy.union(e)?)? / p_xe)?.value();
    conditional_odds(given_x, given_xe)
}

/// Threshold `1 / r(x̄; e)` that `CBF(y; e | x)` must exceed for `x ∪ y` to
/// score higher than `x`.
pub fn inclusion_boundary<T: Real>(net: &Network<T>, x: &Assignment, e: &Assignment) -> Result<T> {
    let (prior, posterior) = prior_posterior(net, x, e)?;
    boundary_of(prior, posterior)
}
