//! Two-party mining race: one adversary with a chosen strategy against the
//! honest rest of the network.
//!
//! Work is counted in integer units: a weak header is 1 and a strong block
//! is `ratio`. Weak headers arrive as a Poisson stream at rate
//! `(ratio - 1) * power / block_time` on the miner's current tip. Between
//! consecutive events their count is drawn in aggregate; headers that would
//! still be in flight at the next event are delivered by individual events.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::strategy::{strategy_step, Action, MinerStrategy, Observation, StrategyContext};
use super::{StrongchainError, StrongchainParams};
use crate::sim::{EventKind, EventQueue, MinerClocks, SimRng};

const ADV: usize = 0;
const HON: usize = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaceConfig {
    /// Adversary's share of hash power.
    pub alpha: f64,
    pub strategy: MinerStrategy,
    pub params: StrongchainParams,
    /// One-way delay between the two parties, seconds.
    pub latency: f64,
    /// Strong blocks found before the run stops (orphans included).
    pub blocks: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RaceOutcome {
    pub adversary_reward: f64,
    pub honest_reward: f64,
    /// Adversary's share of all rewards on the main chain.
    pub relative_payoff: f64,
    pub main_chain_blocks: usize,
    pub blocks_found: usize,
}

#[derive(Clone, Copy)]
struct Node {
    parent: u32,
    cum: u64,
    /// Weak headers included, by finder.
    incl: [u64; 2],
    finder: u8,
}

impl Node {
    fn l(&self) -> u64 {
        self.incl[0] + self.incl[1]
    }
}

enum Ev {
    Found,
    Block { to: usize, b: usize },
    Weak { to: usize, parent: usize, finder: usize, count: u64 },
}

struct Race<'a> {
    cfg: &'a RaceConfig,
    ratio: u64,
    nodes: Vec<Node>,
    /// Weak headers known per viewer: block -> counts by finder.
    weak: [HashMap<usize, [u64; 2]>; 2],
    tip: [usize; 2],
    /// Adversary's view of the best published block.
    pub_tip: usize,
    unpublished: Vec<usize>,
    queue: EventQueue<Ev>,
    weak_rng: [SimRng; 2],
    rates: [f64; 2],
    last: f64,
}

impl Race<'_> {
    fn k(&self, v: usize, b: usize) -> u64 {
        self.weak[v].get(&b).map_or(0, |c| c[0] + c[1])
    }

    fn siblings(&self, x: usize, y: usize) -> bool {
        x != y && x != 0 && y != 0 && self.nodes[x].parent == self.nodes[y].parent
    }

    /// Whether `v` prefers `x` over its current choice `y`.
    fn better(&self, v: usize, x: usize, y: usize) -> bool {
        if self.siblings(x, y) {
            self.nodes[x].l() + self.k(v, x) > self.nodes[y].l() + self.k(v, y)
        } else {
            self.nodes[x].cum > self.nodes[y].cum
        }
    }

    fn lead(&self) -> i64 {
        let (p, q) = (self.tip[ADV], self.pub_tip);
        if p == q {
            0
        } else if self.siblings(p, q) {
            (self.nodes[p].l() + self.k(ADV, p)) as i64 - (self.nodes[q].l() + self.k(ADV, q)) as i64
        } else {
            self.nodes[p].cum as i64 - self.nodes[q].cum as i64
        }
    }

    fn ctx(&self) -> StrategyContext {
        StrategyContext {
            unpublished: self.unpublished.len() as u32,
            lead: self.lead(),
            block_work: self.ratio as i64,
        }
    }

    fn selfish(&self) -> bool {
        self.cfg.strategy == MinerStrategy::Selfish
    }

    fn strategy_of(&self, m: usize) -> MinerStrategy {
        if m == ADV {
            self.cfg.strategy
        } else {
            MinerStrategy::Honest
        }
    }

    fn add_weak(&mut self, v: usize, parent: usize, finder: usize, n: u64) {
        self.weak[v].entry(parent).or_insert([0, 0])[finder] += n;
    }

    /// Weak headers mined since the previous event, up to `now`.
    fn accrue_weak(&mut self, now: f64) -> Result<(), StrongchainError> {
        let d = self.cfg.latency;
        let split = self.last.max(now - d);
        for m in [ADV, HON] {
            let rate = self.rates[m];
            if rate == 0.0 {
                continue;
            }
            let x = self.tip[m];
            let broadcast = strategy_step(self.strategy_of(m), Observation::FoundWeak, &self.ctx())
                .contains(&Action::BroadcastWeak);
            let early = poisson(&mut self.weak_rng[m], rate * (split - self.last));
            let late = poisson(&mut self.weak_rng[m], rate * (now - split));
            self.add_weak(m, x, m, early + late);
            if broadcast {
                self.add_weak(1 - m, x, m, early);
                for _ in 0..late {
                    let t = split + (now - split) * self.weak_rng[m].random::<f64>();
                    self.queue.schedule(
                        (t + d).max(now),
                        EventKind::DeliverHeader,
                        Ev::Weak {
                            to: 1 - m,
                            parent: x,
                            finder: m,
                            count: 1,
                        },
                    )?;
                }
            }
        }
        self.last = now;
        Ok(())
    }

    fn found(&mut self, m: usize, now: f64) -> Result<(), StrongchainError> {
        let parent = self.tip[m];
        let known = self.weak[m].get(&parent).copied().unwrap_or([0, 0]);
        let foreign = known[1 - m];
        let include_foreign = strategy_step(
            self.strategy_of(m),
            Observation::AssembleBlock { foreign_weak: foreign },
            &self.ctx(),
        )
        .contains(&Action::IncludeForeignWeak);
        let mut incl = [0u64; 2];
        incl[m] = known[m];
        if include_foreign {
            incl[1 - m] = foreign;
        }
        let b = self.nodes.len();
        self.nodes.push(Node {
            parent: parent as u32,
            cum: self.nodes[parent].cum + self.ratio + incl[0] + incl[1],
            incl,
            finder: m as u8,
        });
        self.tip[m] = b;
        if m == ADV && self.selfish() {
            self.unpublished.push(b);
            let acts = strategy_step(MinerStrategy::Selfish, Observation::FoundBlock, &self.ctx());
            self.react(&acts, now)?;
        } else {
            if m == ADV {
                self.pub_tip = b;
            }
            self.queue
                .schedule(now + self.cfg.latency, EventKind::DeliverBlock, Ev::Block { to: 1 - m, b })?;
        }
        Ok(())
    }

    fn react(&mut self, acts: &[Action], now: f64) -> Result<(), StrongchainError> {
        for a in acts {
            match a {
                Action::AdoptPublic => {
                    self.tip[ADV] = self.pub_tip;
                    self.unpublished.clear();
                }
                Action::PublishPrivateChain => {
                    let at = now + self.cfg.latency;
                    for &b in &self.unpublished {
                        self.queue.schedule(at, EventKind::DeliverBlock, Ev::Block { to: HON, b })?;
                    }
                    let p = self.tip[ADV];
                    let own = self.weak[ADV].get(&p).map_or(0, |c| c[ADV]);
                    if own > 0 {
                        self.queue.schedule(
                            at,
                            EventKind::DeliverHeader,
                            Ev::Weak {
                                to: HON,
                                parent: p,
                                finder: ADV,
                                count: own,
                            },
                        )?;
                    }
                    self.unpublished.clear();
                    self.pub_tip = p;
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn deliver_block(&mut self, to: usize, b: usize, now: f64) -> Result<(), StrongchainError> {
        if to == ADV && self.selfish() {
            if self.better(ADV, b, self.pub_tip) {
                self.pub_tip = b;
            }
            let acts = strategy_step(MinerStrategy::Selfish, Observation::ReceivedBlock, &self.ctx());
            self.react(&acts, now)
        } else {
            if self.better(to, b, self.tip[to]) {
                self.tip[to] = b;
                if to == ADV {
                    self.pub_tip = b;
                }
            }
            Ok(())
        }
    }

    fn deliver_weak(&mut self, to: usize, parent: usize, finder: usize, count: u64, now: f64) -> Result<(), StrongchainError> {
        self.add_weak(to, parent, finder, count);
        if to == ADV && self.selfish() {
            if self.siblings(parent, self.pub_tip) && self.better(ADV, parent, self.pub_tip) {
                self.pub_tip = parent;
            }
            let acts = strategy_step(MinerStrategy::Selfish, Observation::ReceivedWeak, &self.ctx());
            self.react(&acts, now)
        } else {
            if self.siblings(parent, self.tip[to]) && self.better(to, parent, self.tip[to]) {
                self.tip[to] = parent;
                if to == ADV {
                    self.pub_tip = parent;
                }
            }
            Ok(())
        }
    }
}

fn poisson(rng: &mut SimRng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

/// Runs one race. Streams under `stream`: `miner/<i>/clock`, `miner/<i>/weak`.
pub fn run_race(cfg: &RaceConfig, seed: u64, stream: &str) -> Result<RaceOutcome, StrongchainError> {
    cfg.params.validate()?;
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(StrongchainError::InvalidParams(format!("alpha must be in (0, 1), got {}", cfg.alpha)));
    }
    if !(cfg.latency >= 0.0 && cfg.latency.is_finite()) {
        return Err(StrongchainError::InvalidParams("latency must be non-negative".into()));
    }
    let ratio = cfg.params.ratio().round() as u64;
    if ratio == 0 || (cfg.params.ratio() - ratio as f64).abs() > 1e-9 {
        return Err(StrongchainError::InvalidParams("T_w/T_s must be a positive integer".into()));
    }
    let base = SimRng::new(seed, stream);
    let powers = [cfg.alpha, 1.0 - cfg.alpha];
    let mut clocks = MinerClocks::new(&base, &powers, cfg.params.target_block_time)?;
    let weak_rate = |p: f64| (ratio - 1) as f64 * p / cfg.params.target_block_time;
    let mut race = Race {
        cfg,
        ratio,
        nodes: vec![Node {
            parent: 0,
            cum: 0,
            incl: [0, 0],
            finder: u8::MAX,
        }],
        weak: [HashMap::new(), HashMap::new()],
        tip: [0, 0],
        pub_tip: 0,
        unpublished: Vec::new(),
        queue: EventQueue::new(),
        weak_rng: [base.substream("miner/0/weak"), base.substream("miner/1/weak")],
        rates: [weak_rate(powers[0]), weak_rate(powers[1])],
        last: 0.0,
    };
    race.queue.schedule(clocks.peek().1, EventKind::BlockFound, Ev::Found)?;
    let mut found = 0;
    while let Some(ev) = race.queue.pop() {
        race.accrue_weak(ev.time)?;
        match ev.payload {
            Ev::Found => {
                let (m, t) = clocks.advance();
                race.found(m, t)?;
                found += 1;
                if found == cfg.blocks {
                    break;
                }
                race.queue.schedule(clocks.peek().1, EventKind::BlockFound, Ev::Found)?;
            }
            Ev::Block { to, b } => race.deliver_block(to, b, ev.time)?,
            Ev::Weak {
                to,
                parent,
                finder,
                count,
            } => race.deliver_weak(to, parent, finder, count, ev.time)?,
        }
    }

    // main chain: most work, earliest on ties
    let mut best = 0;
    for (i, n) in race.nodes.iter().enumerate() {
        if n.cum > race.nodes[best].cum {
            best = i;
        }
    }
    let w = cfg.params.weak_reward();
    let mut rewards = [0.0f64; 2];
    let mut len = 0;
    let mut cur = best;
    while cur != 0 {
        let n = race.nodes[cur];
        rewards[n.finder as usize] += cfg.params.reward;
        rewards[0] += n.incl[0] as f64 * w;
        rewards[1] += n.incl[1] as f64 * w;
        len += 1;
        cur = n.parent as usize;
    }
    let total = rewards[0] + rewards[1];
    Ok(RaceOutcome {
        adversary_reward: rewards[0],
        honest_reward: rewards[1],
        relative_payoff: if total > 0.0 { rewards[0] / total } else { 0.0 },
        main_chain_blocks: len,
        blocks_found: found,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PayoffPoint {
    pub strategy: MinerStrategy,
    pub alpha: f64,
    pub ratio: f64,
    pub gamma: f64,
    pub runs: usize,
    pub mean_relative_payoff: f64,
    pub std: f64,
    pub per_run: Vec<f64>,
}

/// Relative payoff over `runs` seeds for every `alpha`. Run `r` at grid
/// point `alpha` uses stream `strongchain/<strategy>/<ratio>/<alpha>/run/<r>`.
pub fn payoff_sweep(
    template: &RaceConfig,
    alphas: &[f64],
    runs: usize,
    seed: u64,
) -> Result<Vec<PayoffPoint>, StrongchainError> {
    let jobs: Vec<(usize, usize)> = (0..alphas.len()).flat_map(|a| (0..runs).map(move |r| (a, r))).collect();
    let results: Vec<Result<f64, StrongchainError>> = jobs
        .par_iter()
        .map(|&(a, r)| {
            let cfg = RaceConfig {
                alpha: alphas[a],
                ..template.clone()
            };
            let stream = format!(
                "strongchain/{}/{}/{:.4}/run/{r}",
                template.strategy.label(),
                template.params.ratio(),
                alphas[a]
            );
            run_race(&cfg, seed, &stream).map(|o| o.relative_payoff)
        })
        .collect();
    let mut points = Vec::with_capacity(alphas.len());
    let mut it = results.into_iter();
    for &alpha in alphas {
        let per_run: Vec<f64> = (0..runs).map(|_| it.next().unwrap()).collect::<Result<_, _>>()?;
        let (mean, std) = mean_std(&per_run);
        points.push(PayoffPoint {
            strategy: template.strategy,
            alpha,
            ratio: template.params.ratio(),
            gamma: template.params.gamma,
            runs,
            mean_relative_payoff: mean,
            std,
            per_run,
        });
    }
    Ok(points)
}

/// Smallest `alpha` whose mean relative payoff exceeds `alpha`.
pub fn first_crossover(points: &[PayoffPoint]) -> Option<f64> {
    points.iter().find(|p| p.mean_relative_payoff > p.alpha).map(|p| p.alpha)
}

pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}
