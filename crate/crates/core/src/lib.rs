//! Discrete-event simulation of incentive attacks and reward schemes in
//! proof-of-work blockchains.
//!
//! - [`sim`]: event queue, seeded streams, PoW lottery, ring topology.
//! - [`chain`]: headers, blocks, Merkle roots, mempool, block validation.
//! - [`strongchain`]: weak-header consensus and adversarial mining.
//! - [`dag`]: greedy vs. random transaction selection in DAG protocols.
//! - [`feegame`]: fee-redistribution contracts and the undercutting game.
//! - [`gametheory`]: the two-player transaction-selection game.
//! - [`report`]: versioned CSV output.

pub mod chain;
pub mod dag;
pub mod feegame;
pub mod gametheory;
pub mod report;
pub mod sim;
pub mod strongchain;
