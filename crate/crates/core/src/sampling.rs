//! Ancestral (forward) sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{Assignment, Network};
use crate::real::Real;

/// Draws a full assignment in topological order. The same seed always
/// produces the same assignment.
pub fn forward_sample<T: Real>(net: &Network<T>, seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(net, &mut rng)
}

pub fn sample_with<T: Real, R: Rng + ?Sized>(net: &Network<T>, rng: &mut R) -> Assignment {
    let cards = net.cards();
    let mut states = vec![0usize; net.len()];
    for &v in net.topological_order() {
        let cpt = net.cpt(v);
        let row = cpt.row_of(cards, |p| states[p.0]);
        let probs = cpt.row(row, cards[v.0]);
        let u = T::from_f64_lossy(rng.gen::<f64>());
        let mut acc = T::zero();
        // fall back to the last state with positive mass when rounding leaves u above the total
        let mut chosen = probs.iter().rposition(|&p| p > T::zero()).unwrap_or(0);
        for (s, &p) in probs.iter().enumerate() {
            acc = acc + p;
            if p > T::zero() && u < acc {
                chosen = s;
                break;
            }
        }
        states[v.0] = chosen;
    }
    states.into_iter().enumerate().map(|(i, s)| (crate::network::VarId(i), s)).collect()
}
