//! Bundled example networks.

use crate::format::parse_network;
use crate::network::Network;
use crate::real::Real;

pub const CIRCUIT: &str = include_str!("../fixtures/circuit.net");
/// The circuit with every gated connection emitting current with probability 0.99.
pub const CIRCUIT_UNIFORM: &str = include_str!("../fixtures/circuit_uniform099.net");

/// Four-gate diagnostic circuit: targets A–D, observation TotalOutput.
pub fn circuit() -> Network {
    circuit_in()
}

pub fn circuit_in<T: Real>() -> Network<T> {
    parse_network(CIRCUIT).expect("bundled circuit parses")
}

pub fn circuit_uniform() -> Network {
    parse_network(CIRCUIT_UNIFORM).expect("bundled circuit parses")
}
