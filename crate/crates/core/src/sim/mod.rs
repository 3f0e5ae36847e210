//! Discrete-event engine, seeded randomness, and network topology.

mod lottery;
mod queue;
mod rng;
mod topology;

pub use lottery::{check_powers, next_block_winner, MinerClocks, MinerId};
pub use queue::{EventKind, EventQueue, SimEvent};
pub use rng::{sample_exponential, SimRng};
pub(crate) use rng::exp_draw;
pub use topology::{Topology, TopologyKind};

/// Simulated seconds.
pub type SimTime = f64;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SimError {
    #[error("event scheduled at t={time} but simulation time is already {now}")]
    EventInPast { time: SimTime, now: SimTime },
    #[error("node {node} out of range for topology with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("mean must be positive and finite, got {0}")]
    NonPositiveMean(f64),
    #[error("miner list is empty")]
    NoMiners,
    #[error("hash powers must be non-negative and sum to 1, got sum {0}")]
    PowersNotNormalized(f64),
}
