use rand::Rng;
use serde::{Deserialize, Serialize};

use super::exp3::Exp3;
use super::frsc::{init_frscs, ratios_to_ppb, FeeSplit, Frsc};
use super::game::{FeeMarket, Game};
use super::strategy::UndercutStrategy;
use super::FeeGameError;
use crate::sim::{exp_draw, SimRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrscConfig {
    pub lambda: u64,
    pub rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    pub n_miners: usize,
    pub blocks_per_game: usize,
    pub n_games: usize,
    /// Fees entering the mempool per `block_time`.
    pub fee_inflow: u64,
    pub block_time: f64,
    pub full_mempool: bool,
    /// Fraction of block fees deposited into the contracts.
    pub cdep: f64,
    pub frscs: Vec<FrscConfig>,
    /// Mean block fees assumed when sizing the genesis contracts.
    pub mean_fees: u64,
    pub dc_fraction: f64,
    pub orphan_compensation: bool,
    pub exp3_gamma: f64,
    /// Fee fractions left unclaimed by the function-fork arms.
    pub function_fork_x: Vec<f64>,
    /// Share of final games used to judge profitability.
    pub final_window: f64,
    pub bootstrap_resamples: usize,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            n_miners: 20,
            blocks_per_game: 1_000,
            n_games: 10_000,
            fee_inflow: 5_000_000_000,
            block_time: 600.0,
            full_mempool: false,
            cdep: 0.7,
            frscs: vec![FrscConfig { lambda: 2016, rho: 1.0 }],
            mean_fees: 5_000_000_000,
            dc_fraction: 0.5,
            orphan_compensation: true,
            exp3_gamma: 0.05,
            function_fork_x: vec![0.25, 0.5, 0.75],
            final_window: 0.1,
            bootstrap_resamples: 1_000,
        }
    }
}

impl GameConfig {
    /// Full-size setting: 100 miners, 10^4 blocks per game, 3*10^5 games.
    pub fn paper_scale() -> Self {
        Self {
            n_miners: 100,
            blocks_per_game: 10_000,
            n_games: 300_000,
            ..Self::default()
        }
    }

    pub fn without_contracts(mut self) -> Self {
        self.cdep = 0.0;
        self.frscs.clear();
        self
    }

    pub fn validate(&self) -> Result<(), FeeGameError> {
        let bad = |field: &str, reason: String| {
            Err(FeeGameError::Invalid {
                field: field.into(),
                reason,
            })
        };
        if self.n_miners < 2 {
            return bad("n_miners", "need at least 2 miners".into());
        }
        if self.blocks_per_game == 0 {
            return bad("blocks_per_game", "must be positive".into());
        }
        if self.n_games == 0 {
            return bad("n_games", "must be positive".into());
        }
        if !(self.block_time > 0.0 && self.block_time.is_finite()) {
            return bad("block_time", format!("must be positive, got {}", self.block_time));
        }
        if !(0.0..=1.0).contains(&self.dc_fraction) {
            return bad("dc_fraction", format!("must be in [0, 1], got {}", self.dc_fraction));
        }
        if !(self.exp3_gamma > 0.0 && self.exp3_gamma <= 1.0) {
            return bad("exp3_gamma", format!("must be in (0, 1], got {}", self.exp3_gamma));
        }
        if !(self.final_window > 0.0 && self.final_window <= 1.0) {
            return bad("final_window", format!("must be in (0, 1], got {}", self.final_window));
        }
        if self.bootstrap_resamples == 0 {
            return bad("bootstrap_resamples", "must be positive".into());
        }
        if let Some(x) = self.function_fork_x.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return bad("function_fork_x", format!("values must be in [0, 1), got {x}"));
        }
        FeeSplit::from_cdep(self.cdep)?;
        if self.cdep > 0.0 && self.frscs.is_empty() {
            return bad("frscs", "cdep > 0 needs at least one contract".into());
        }
        self.contract_ratios().map(|_| ())
    }

    fn contract_ratios(&self) -> Result<Vec<(u64, u64)>, FeeGameError> {
        let pairs: Vec<(u64, f64)> = self.frscs.iter().map(|f| (f.lambda, f.rho)).collect();
        ratios_to_ppb(&pairs)
    }

    pub fn split(&self) -> FeeSplit {
        if self.frscs.is_empty() {
            FeeSplit::none()
        } else {
            FeeSplit::from_cdep(self.cdep).expect("validated")
        }
    }

    pub fn genesis_frscs(&self) -> Result<Vec<Frsc>, FeeGameError> {
        init_frscs(self.mean_fees, self.split().cdep_ppb, &self.contract_ratios()?)
    }

    pub fn n_default_compliant(&self) -> usize {
        (self.dc_fraction * self.n_miners as f64).round() as usize
    }

    /// Strategies the learning miners choose from.
    pub fn arms(&self) -> Vec<UndercutStrategy> {
        let mut a = vec![UndercutStrategy::PettyCompliant, UndercutStrategy::LazyFork];
        a.extend(self.function_fork_x.iter().map(|&x| UndercutStrategy::function_fork(x)));
        a
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrategyProfit {
    pub strategy: UndercutStrategy,
    pub miners: usize,
    /// Mean main-chain reward per miner playing this strategy.
    pub mean_profit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameRecord {
    pub game: usize,
    pub orphan_rate: f64,
    /// Total reward paid on the main chain.
    pub main_chain_value: u64,
    pub strategies: Vec<StrategyProfit>,
    /// Mean profit of miners on a forking strategy this game.
    pub forker_mean: Option<f64>,
    pub dc_mean: Option<f64>,
}

/// Bootstrap comparison of forker and compliant profit over the final games.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfitComparison {
    pub games: usize,
    pub mean_diff: f64,
    pub p05: f64,
    pub p95: f64,
    /// Share of learner plays that used a forking arm.
    pub forking_share: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub height: u64,
    pub fees_in_block: u64,
    pub next_claim: u64,
    pub reward_t: u64,
    pub nu: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameResult {
    pub dc_fraction: f64,
    pub n_default_compliant: usize,
    pub games: Vec<GameRecord>,
    pub conservation_failures: u64,
    pub comparison: Option<ProfitComparison>,
    /// Undercutting does not beat compliance in the final window.
    pub dc_profitable: bool,
    /// Main chain of the last game.
    pub trace: Vec<TraceRow>,
    /// Final exp3 probabilities per learning miner.
    pub learner_probabilities: Vec<Vec<f64>>,
}

/// Contract trace along the main chain.
pub fn frsc_trace(game: &Game) -> Vec<TraceRow> {
    let blocks = game.blocks();
    game.main_chain()
        .into_iter()
        .skip(1)
        .map(|b| {
            let n = &blocks[b];
            TraceRow {
                height: n.height,
                fees_in_block: n.claim,
                next_claim: blocks[n.parent.unwrap()].next_claim,
                reward_t: n.reward_t,
                nu: game.nu_after(b).to_vec(),
            }
        })
        .collect()
}

/// Plays `n_games` consecutive games; learning state carries across games.
///
/// Streams: `feegame/dc<n>/arrivals`, `.../winners`, `.../learner/<i>`,
/// `.../bootstrap`, where `<n>` is the number of compliant miners.
pub fn run_fee_game(config: &GameConfig, seed: u64) -> Result<GameResult, FeeGameError> {
    config.validate()?;
    let n = config.n_miners;
    let n_dc = config.n_default_compliant();
    let base = SimRng::new(seed, format!("feegame/dc{n_dc}"));
    let mut arrivals = base.substream("arrivals");
    let mut winners = base.substream("winners");
    let mut learner_rng: Vec<SimRng> = (n_dc..n).map(|i| base.substream(&format!("learner/{i}"))).collect();

    let arms = config.arms();
    let mut learners: Vec<Exp3> = (n_dc..n).map(|_| Exp3::new(arms.len(), config.exp3_gamma)).collect();
    let genesis = config.genesis_frscs()?;
    let market = FeeMarket {
        fee_inflow: config.fee_inflow,
        block_time: config.block_time,
        initial_fees: 0,
        full_mempool: config.full_mempool,
        split: config.split(),
    };
    let mut game = Game::new(market, genesis.clone());
    let mut records = Vec::with_capacity(config.n_games);
    let mut conservation_failures = 0;
    let mut prev_orphan = 0.0;
    let mut chosen = vec![0usize; n - n_dc];
    let mut strategies = vec![UndercutStrategy::DefaultCompliant; n];
    let mut forking_plays = 0usize;
    let mut learner_plays = 0usize;
    let window_start = config.n_games - ((config.n_games as f64 * config.final_window).ceil() as usize).max(1);

    for g in 0..config.n_games {
        for (j, l) in learners.iter().enumerate() {
            chosen[j] = l.choose(&mut learner_rng[j]);
            strategies[n_dc + j] = arms[chosen[j]];
        }
        let start = if config.orphan_compensation && g > 0 {
            Game::compensated(&genesis, prev_orphan)
        } else {
            genesis.clone()
        };
        game.reset(&start);
        let mut t = 0.0;
        for _ in 0..config.blocks_per_game {
            t += exp_draw(&mut arrivals, config.block_time);
            let m = winners.random_range(0..n);
            game.mine(m, &strategies[m], t);
        }
        conservation_failures += game.conservation_failures();
        let pay = game.payouts(n);
        let orphan = game.orphan_rate();
        prev_orphan = orphan;

        let max = *pay.iter().max().unwrap_or(&0);
        for (j, l) in learners.iter_mut().enumerate() {
            let r = if max == 0 { 0.0 } else { pay[n_dc + j] as f64 / max as f64 };
            l.update(chosen[j], r);
        }

        let mut per: Vec<(UndercutStrategy, usize, u128)> = Vec::new();
        let (mut fork_sum, mut fork_n, mut dc_sum) = (0u128, 0usize, 0u128);
        for (m, s) in strategies.iter().enumerate() {
            match per.iter_mut().find(|e| e.0 == *s) {
                Some(e) => {
                    e.1 += 1;
                    e.2 += pay[m] as u128;
                }
                None => per.push((*s, 1, pay[m] as u128)),
            }
            if s.is_forking() {
                fork_sum += pay[m] as u128;
                fork_n += 1;
            } else if m < n_dc {
                dc_sum += pay[m] as u128;
            }
        }
        if g >= window_start {
            forking_plays += fork_n;
            learner_plays += n - n_dc;
        }
        per.sort_by_key(|e| e.0.label());
        records.push(GameRecord {
            game: g,
            orphan_rate: orphan,
            main_chain_value: pay.iter().sum(),
            strategies: per
                .into_iter()
                .map(|(strategy, miners, sum)| StrategyProfit {
                    strategy,
                    miners,
                    mean_profit: sum as f64 / miners as f64,
                })
                .collect(),
            forker_mean: (fork_n > 0).then(|| fork_sum as f64 / fork_n as f64),
            dc_mean: (n_dc > 0).then(|| dc_sum as f64 / n_dc as f64),
        });
    }

    let mut boot = base.substream("bootstrap");
    let diffs: Vec<f64> = records[window_start..]
        .iter()
        .filter_map(|r| Some(r.forker_mean? - r.dc_mean?))
        .collect();
    let forking_share = if learner_plays == 0 {
        0.0
    } else {
        forking_plays as f64 / learner_plays as f64
    };
    let comparison = (!diffs.is_empty()).then(|| {
        let (p05, p95) = bootstrap_mean_ci(&diffs, config.bootstrap_resamples, &mut boot);
        ProfitComparison {
            games: diffs.len(),
            mean_diff: diffs.iter().sum::<f64>() / diffs.len() as f64,
            p05,
            p95,
            forking_share,
        }
    });
    let dc_profitable = n_dc > 0 && comparison.as_ref().is_none_or(|c| c.p05 <= 0.0);

    Ok(GameResult {
        dc_fraction: config.dc_fraction,
        n_default_compliant: n_dc,
        games: records,
        conservation_failures,
        comparison,
        dc_profitable,
        trace: frsc_trace(&game),
        learner_probabilities: learners.iter().map(Exp3::probabilities).collect(),
    })
}

/// 5th and 95th percentiles of the resampled mean.
pub fn bootstrap_mean_ci(xs: &[f64], resamples: usize, rng: &mut SimRng) -> (f64, f64) {
    let n = xs.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let at = |q: f64| means[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    (at(0.05), at(0.95))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    /// Smallest qualifying grid value; `None` means above the grid maximum.
    pub threshold: Option<f64>,
    pub points: Vec<GameResult>,
}

/// Scans `grid` in ascending order and stops at the first compliant fraction
/// at which forking no longer beats default compliance.
pub fn find_dc_threshold(base: &GameConfig, grid: &[f64], seed: u64) -> Result<ThresholdResult, FeeGameError> {
    if grid.is_empty() {
        return Err(FeeGameError::Invalid {
            field: "grid".into(),
            reason: "must not be empty".into(),
        });
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FeeGameError::Invalid {
            field: "grid".into(),
            reason: "must be strictly ascending".into(),
        });
    }
    let mut points = Vec::new();
    for &dc in grid {
        let cfg = GameConfig {
            dc_fraction: dc,
            ..base.clone()
        };
        let r = run_fee_game(&cfg, seed)?;
        let ok = r.dc_profitable;
        points.push(r);
        if ok {
            return Ok(ThresholdResult {
                threshold: Some(dc),
                points,
            });
        }
    }
    Ok(ThresholdResult { threshold: None, points })
}
