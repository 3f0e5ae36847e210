use serde::{Deserialize, Serialize};

use super::StrongchainError;

/// Protocol parameters. Targets are fractions of the maximum target, so
/// `t_max = 1` unless stated otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongchainParams {
    pub t_s: f64,
    pub t_w: f64,
    pub t_max: f64,
    /// Block reward.
    pub reward: f64,
    /// Weight of weak-header rewards.
    pub gamma: f64,
    /// Scaling constant of weak-header rewards.
    pub c: f64,
    /// Blocks between retargets.
    pub difficulty_window: usize,
    /// Seconds.
    pub target_block_time: f64,
}

impl StrongchainParams {
    /// Parameters with `T_w / T_s = ratio` and `gamma = log2(ratio)`.
    pub fn with_ratio(ratio: f64) -> Result<Self, StrongchainError> {
        let p = Self {
            t_s: 1.0 / 4_294_967_296.0,
            t_w: ratio / 4_294_967_296.0,
            t_max: 1.0,
            reward: 1.0,
            gamma: ratio.log2(),
            c: 1.0,
            difficulty_window: 2016,
            target_block_time: 600.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn ratio(&self) -> f64 {
        self.t_w / self.t_s
    }

    /// Reward of one weak header: `gamma * c * R * T_s / T_w`.
    pub fn weak_reward(&self) -> f64 {
        self.gamma * self.c * self.reward * self.t_s / self.t_w
    }

    pub fn validate(&self) -> Result<(), StrongchainError> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !(pos(self.t_s) && pos(self.t_w) && pos(self.t_max)) {
            return Err(StrongchainError::InvalidParams("targets must be positive".into()));
        }
        if self.t_w < self.t_s {
            return Err(StrongchainError::InvalidParams("weak target must not be below the strong target".into()));
        }
        if self.t_w > self.t_max {
            return Err(StrongchainError::InvalidParams("weak target exceeds the maximum target".into()));
        }
        if self.t_w > self.t_s && !pos(self.gamma) {
            return Err(StrongchainError::InvalidParams("gamma must be positive".into()));
        }
        if !(pos(self.c) && pos(self.reward)) {
            return Err(StrongchainError::InvalidParams("c and reward must be positive".into()));
        }
        if self.difficulty_window == 0 || !pos(self.target_block_time) {
            return Err(StrongchainError::InvalidParams("difficulty window and block time must be positive".into()));
        }
        Ok(())
    }
}
