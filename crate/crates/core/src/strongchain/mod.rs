//! Weak-header consensus: aggregated-work fork choice, proportional
//! rewards, weighted timestamps, adversarial strategies and reward variance.

mod ops;
mod params;
mod simulator;
mod strategy;
mod variance;

pub use ops::{block_timestamp, chain_pow, fork_choice, retarget, reward_block, ChainView};
pub use params::StrongchainParams;
pub use simulator::{first_crossover, payoff_sweep, run_race, PayoffPoint, RaceConfig, RaceOutcome};
pub use strategy::{strategy_step, Action, MinerStrategy, Observation, StrategyContext};
pub use variance::{bitcoin_relative_std, equivalent_pool_size, estimate_reward_stats, RewardStats};

use crate::sim::SimError;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StrongchainError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no candidate chains")]
    NoCandidates,
    #[error("retarget needs {want} blocks, got {got}")]
    WindowLength { got: usize, want: usize },
    #[error("retarget window has zero elapsed time")]
    ZeroElapsed,
    #[error("horizon of {0} blocks is below the minimum of 100")]
    HorizonTooSmall(usize),
    #[error("equivalent pool size did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}
