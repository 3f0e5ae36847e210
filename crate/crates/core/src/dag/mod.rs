//! Abstract DAG protocol with first-inclusion rewards and greedy vs. random
//! transaction selection.

mod experiment;
mod ledger;
mod select;

pub use experiment::{
    duel_miners, mean_profit_factor, pool_duel_miners, run_dag_experiment, uniform_miners, DagConfig, DagMinerSpec,
    ExperimentResult,
};
pub use ledger::{attribute_rewards, collision_rate, profit_factor, DagBlock, DagLedger};
pub use select::{select_txs, select_txs_greedy, select_txs_rts, Selection};

use crate::sim::SimError;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DagError {
    #[error("total reward is zero")]
    ZeroReward,
    #[error("ledger has no transaction inclusions")]
    EmptyLedger,
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error(transparent)]
    Sim(#[from] SimError),
}
