//! Fee-redistribution contracts and the undercutting mining game.

mod exp3;
mod frsc;
mod game;
mod run;
mod strategy;

pub use exp3::Exp3;
pub use frsc::{
    apply_block, effective_lambda, effective_lambda_ppb, init_frscs, next_claim, ratios_to_ppb, to_ppb,
    BlockPayout, FeeSplit, Frsc, PPB,
};
pub use game::{BlockNode, FeeMarket, Game};
pub use run::{
    bootstrap_mean_ci, find_dc_threshold, frsc_trace, run_fee_game, FrscConfig, GameConfig, GameRecord, GameResult,
    ProfitComparison, StrategyProfit, ThresholdResult, TraceRow,
};
pub use strategy::{strategy_decide, MiningAction, TipInfo, UndercutStrategy, View};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FeeGameError {
    #[error("redistribution ratios must sum to 1, got {0}")]
    RatioSum(f64),
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("token amount overflows 64 bits")]
    Overflow,
}

impl FeeGameError {
    /// Config path of the offending field.
    pub fn field(&self) -> &str {
        match self {
            FeeGameError::RatioSum(_) => "frscs.rho",
            FeeGameError::Invalid { field, .. } => field,
            FeeGameError::Overflow => "mean_fees",
        }
    }
}
