use serde::{Deserialize, Serialize};

use super::ledger::{attribute_rewards, collision_rate, profit_factor, DagBlock, DagLedger};
use super::select::{select_txs, Selection};
use super::DagError;
use crate::chain::{generate_batch, FeeDistribution, Mempool, TxIdGen};
use crate::sim::{check_powers, EventKind, EventQueue, MinerClocks, SimRng, Topology};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DagConfig {
    /// Mean time between blocks across the whole network.
    pub block_time: f64,
    pub block_capacity: usize,
    pub mempool_capacity: usize,
    pub refill_period: f64,
    /// Transactions per refill; `None` tops the fullest-drained view back up
    /// to capacity.
    pub refill_count: Option<usize>,
    pub fee_distribution: FeeDistribution,
    /// Reward discount for late blocks. Only 1 (no discount) is modelled.
    pub discount: f64,
}

impl Default for DagConfig {
    fn default() -> Self {
        Self {
            block_time: 20.0,
            block_capacity: 100,
            mempool_capacity: 10_000,
            refill_period: 60.0,
            refill_count: None,
            fee_distribution: FeeDistribution::Exponential { mean: 100.0 },
            discount: 1.0,
        }
    }
}

impl DagConfig {
    pub fn validate(&self) -> Result<(), DagError> {
        let bad = |field: &str, reason: String| {
            Err(DagError::Invalid {
                field: field.into(),
                reason,
            })
        };
        if !(self.block_time > 0.0 && self.block_time.is_finite()) {
            return bad("block_time", format!("must be positive, got {}", self.block_time));
        }
        if self.block_capacity == 0 {
            return bad("block_capacity", "must be positive".into());
        }
        if self.block_capacity > self.mempool_capacity {
            return bad("block_capacity", "must not exceed mempool_capacity".into());
        }
        if !(self.refill_period > 0.0 && self.refill_period.is_finite()) {
            return bad("refill_period", format!("must be positive, got {}", self.refill_period));
        }
        if self.discount != 1.0 {
            return bad("discount", format!("only 1 is supported, got {}", self.discount));
        }
        if let FeeDistribution::Exponential { mean } = self.fee_distribution {
            if !(mean > 0.0 && mean.is_finite()) {
                return bad("fee_distribution.mean", format!("must be positive, got {mean}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DagMinerSpec {
    pub id: usize,
    pub power: f64,
    pub selection: Selection,
    pub node: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub rewards: Vec<u64>,
    pub profit_factor: Vec<f64>,
    pub collision_rate: f64,
    pub throughput_tps: f64,
    pub blocks: usize,
    pub inclusions: usize,
    pub unique_txs: usize,
    pub duration: f64,
}

enum Ev {
    Found,
    Deliver { miner: usize, block: usize },
    Refill,
}

/// Runs one DAG mining simulation for `duration` seconds.
///
/// Every miner keeps its own mempool view. A block's transactions leave a
/// view when the block is delivered to that miner's node; the finder's own
/// view is updated at once. Refills deliver the same batch to every view at
/// the same instant. Streams under `stream`: `miner/<i>/clock`,
/// `miner/<i>/select`, `fees`.
pub fn run_dag_experiment(
    config: &DagConfig,
    miners: &[DagMinerSpec],
    topology: &Topology,
    duration: f64,
    seed: u64,
    stream: &str,
) -> Result<ExperimentResult, DagError> {
    config.validate()?;
    let powers: Vec<f64> = miners.iter().map(|m| m.power).collect();
    check_powers(&powers)?;
    for m in miners {
        topology.hop_distance(m.node, m.node)?;
    }
    let base = SimRng::new(seed, stream);
    let mut clocks = MinerClocks::new(&base, &powers, config.block_time)?;
    let mut select_rng: Vec<SimRng> = (0..miners.len())
        .map(|i| base.substream(&format!("miner/{i}/select")))
        .collect();
    let mut fee_rng = base.substream("fees");
    let mut ids = TxIdGen::new();

    let initial = generate_batch(
        &mut fee_rng,
        &mut ids,
        config.mempool_capacity,
        &config.fee_distribution,
        0.0,
    );
    let mut views: Vec<Mempool> = miners
        .iter()
        .map(|_| {
            let mut p = Mempool::new(config.mempool_capacity);
            p.refill(&initial);
            p
        })
        .collect();

    let delays: Vec<Vec<f64>> = miners
        .iter()
        .map(|a| {
            miners
                .iter()
                .map(|b| topology.propagation_delay(a.node, b.node))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut queue: EventQueue<Ev> = EventQueue::new();
    queue.schedule(config.refill_period, EventKind::MempoolRefill, Ev::Refill)?;
    queue.schedule(clocks.peek().1, EventKind::BlockFound, Ev::Found)?;

    let mut ledger = DagLedger::new();
    let mut block_txs: Vec<Vec<u64>> = Vec::new();

    while let Some(ev) = queue.pop() {
        if ev.time > duration {
            break;
        }
        match ev.payload {
            Ev::Found => {
                let (m, t) = clocks.advance();
                let txs = select_txs(miners[m].selection, &views[m], config.block_capacity, &mut select_rng[m]);
                let b = block_txs.len();
                for tx in &txs {
                    views[m].remove(tx.id);
                }
                block_txs.push(txs.iter().map(|t| t.id).collect());
                ledger.push(DagBlock {
                    id: b as u64,
                    miner: m,
                    created_at: t,
                    txs: txs.iter().map(|t| (t.id, t.fee)).collect(),
                });
                for (other, d) in delays[m].iter().enumerate() {
                    if other != m {
                        queue.schedule(t + d, EventKind::DeliverBlock, Ev::Deliver { miner: other, block: b })?;
                    }
                }
                queue.schedule(clocks.peek().1, EventKind::BlockFound, Ev::Found)?;
            }
            Ev::Deliver { miner, block } => {
                for &id in &block_txs[block] {
                    views[miner].remove(id);
                }
            }
            Ev::Refill => {
                let count = match config.refill_count {
                    Some(c) => c,
                    None => views.iter().map(|v| v.free()).max().unwrap_or(0),
                };
                let batch = generate_batch(&mut fee_rng, &mut ids, count, &config.fee_distribution, ev.time);
                for v in &mut views {
                    v.refill(&batch);
                }
                queue.schedule(ev.time + config.refill_period, EventKind::MempoolRefill, Ev::Refill)?;
            }
        }
    }

    let rewards_map = attribute_rewards(&mut ledger);
    let rewards: Vec<u64> = (0..miners.len()).map(|m| *rewards_map.get(&m).unwrap_or(&0)).collect();
    let pf = profit_factor(&rewards_map, &powers)?;
    let (inclusions, unique) = ledger.inclusion_counts();
    Ok(ExperimentResult {
        rewards,
        profit_factor: pf,
        collision_rate: collision_rate(&mut ledger)?,
        throughput_tps: unique as f64 / duration,
        blocks: ledger.len(),
        inclusions,
        unique_txs: unique,
        duration,
    })
}

/// Greedy miner at node 0 with power `alpha` against an honest miner at the
/// opposite side of a ten-node ring.
pub fn duel_miners(alpha: f64) -> Vec<DagMinerSpec> {
    vec![
        DagMinerSpec {
            id: 0,
            power: alpha,
            selection: Selection::Greedy,
            node: 0,
        },
        DagMinerSpec {
            id: 1,
            power: 1.0 - alpha,
            selection: Selection::Rts,
            node: 5,
        },
    ]
}

/// `n` miners with equal power, one per node; the first `n_greedy` are greedy.
pub fn uniform_miners(n: usize, n_greedy: usize) -> Vec<DagMinerSpec> {
    (0..n)
        .map(|i| DagMinerSpec {
            id: i,
            power: 1.0 / n as f64,
            selection: if i < n_greedy { Selection::Greedy } else { Selection::Rts },
            node: i,
        })
        .collect()
}

/// Greedy pool at node 0 and honest pool at node 5, each with `alpha`; the
/// remaining power is split evenly over honest miners on the other 8 nodes.
pub fn pool_duel_miners(alpha: f64) -> Vec<DagMinerSpec> {
    let rest = (1.0 - 2.0 * alpha) / 8.0;
    let mut v = vec![
        DagMinerSpec {
            id: 0,
            power: alpha,
            selection: Selection::Greedy,
            node: 0,
        },
        DagMinerSpec {
            id: 1,
            power: alpha,
            selection: Selection::Rts,
            node: 5,
        },
    ];
    for node in (1..10).filter(|&n| n != 5) {
        v.push(DagMinerSpec {
            id: v.len(),
            power: rest,
            selection: Selection::Rts,
            node,
        });
    }
    v
}

/// Mean profit factor of the miners using `sel`.
pub fn mean_profit_factor(result: &ExperimentResult, miners: &[DagMinerSpec], sel: Selection) -> Option<f64> {
    let v: Vec<f64> = miners
        .iter()
        .filter(|m| m.selection == sel)
        .map(|m| result.profit_factor[m.id])
        .collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}
