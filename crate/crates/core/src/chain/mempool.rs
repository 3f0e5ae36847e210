use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::tx::Transaction;
use crate::sim::{exp_draw, SimRng};

/// Fee distribution for freshly generated transactions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FeeDistribution {
    /// Exponential with the given mean, rounded to the nearest integer.
    Exponential { mean: f64 },
    /// Every transaction pays `value`.
    Flat { value: u64 },
}

impl FeeDistribution {
    pub fn sample(&self, rng: &mut SimRng) -> u64 {
        match *self {
            FeeDistribution::Exponential { mean } => exp_draw(rng, mean).round() as u64,
            FeeDistribution::Flat { value } => value,
        }
    }
}

/// Hands out unique transaction ids within a run.
#[derive(Clone, Debug, Default)]
pub struct TxIdGen(u64);

impl TxIdGen {
    pub fn new() -> Self {
        Self(0)
    }

    pub fn next_id(&mut self) -> u64 {
        let id = self.0;
        self.0 += 1;
        id
    }
}

/// Generates `count` new transactions stamped `now`.
pub fn generate_batch(
    rng: &mut SimRng,
    ids: &mut TxIdGen,
    count: usize,
    fee_dist: &FeeDistribution,
    now: f64,
) -> Vec<Transaction> {
    (0..count)
        .map(|_| Transaction {
            id: ids.next_id(),
            fee: fee_dist.sample(rng),
            created_at: now,
        })
        .collect()
}

/// Bounded transaction pool with fee-ordered and uniform-random access.
///
/// Fee order is descending fee, ties by ascending id. Uniform sampling uses a
/// dense id vector kept in sync by swap-remove.
#[derive(Clone, Debug)]
pub struct Mempool {
    capacity: usize,
    full_mode: bool,
    by_fee: BTreeSet<(Reverse<u64>, u64)>,
    txs: HashMap<u64, (Transaction, usize)>,
    dense: Vec<u64>,
}

impl Mempool {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            full_mode: false,
            by_fee: BTreeSet::new(),
            txs: HashMap::with_capacity(capacity),
            dense: Vec::with_capacity(capacity),
        }
    }

    pub fn with_full_mode(mut self, full: bool) -> Self {
        self.full_mode = full;
        self
    }

    pub fn full_mode(&self) -> bool {
        self.full_mode
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.dense.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dense.is_empty()
    }

    pub fn free(&self) -> usize {
        self.capacity - self.len()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.txs.contains_key(&id)
    }

    pub fn get(&self, id: u64) -> Option<&Transaction> {
        self.txs.get(&id).map(|(t, _)| t)
    }

    /// Inserts unless the pool is full or the id is already present.
    pub fn insert(&mut self, tx: Transaction) -> bool {
        if self.len() >= self.capacity || self.txs.contains_key(&tx.id) {
            return false;
        }
        self.by_fee.insert((Reverse(tx.fee), tx.id));
        self.txs.insert(tx.id, (tx, self.dense.len()));
        self.dense.push(tx.id);
        true
    }

    /// Inserts the prefix of `batch` that fits. Returns how many went in.
    pub fn refill(&mut self, batch: &[Transaction]) -> usize {
        let mut n = 0;
        for tx in batch.iter().take(self.free()) {
            if self.insert(*tx) {
                n += 1;
            }
        }
        n
    }

    pub fn remove(&mut self, id: u64) -> Option<Transaction> {
        let (tx, pos) = self.txs.remove(&id)?;
        self.by_fee.remove(&(Reverse(tx.fee), id));
        self.dense.swap_remove(pos);
        if let Some(&moved) = self.dense.get(pos) {
            self.txs.get_mut(&moved).unwrap().1 = pos;
        }
        Some(tx)
    }

    pub fn peek_max(&self) -> Option<&Transaction> {
        self.by_fee.first().map(|(_, id)| &self.txs[id].0)
    }

    pub fn pop_max(&mut self) -> Option<Transaction> {
        let (_, id) = *self.by_fee.first()?;
        self.remove(id)
    }

    /// The `k` highest-fee transactions, without removing them.
    pub fn top_by_fee(&self, k: usize) -> Vec<Transaction> {
        self.by_fee.iter().take(k).map(|(_, id)| self.txs[id].0).collect()
    }

    /// Uniform sample without replacement of `min(k, len)` transactions.
    pub fn sample_uniform(&self, k: usize, rng: &mut SimRng) -> Vec<Transaction> {
        let k = k.min(self.len());
        index::sample(rng, self.len(), k)
            .into_iter()
            .map(|i| self.txs[&self.dense[i]].0)
            .collect()
    }

    pub fn total_fees(&self) -> u64 {
        self.dense.iter().map(|id| self.txs[id].0.fee).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transaction> {
        self.dense.iter().map(|id| &self.txs[id].0)
    }
}

/// Draws up to `count` new transactions and inserts those that fit.
pub fn refill_mempool(
    pool: &mut Mempool,
    rng: &mut SimRng,
    ids: &mut TxIdGen,
    count: usize,
    fee_dist: &FeeDistribution,
    now: f64,
) -> usize {
    let n = count.min(pool.free());
    let batch = generate_batch(rng, ids, n, fee_dist, now);
    pool.refill(&batch)
}
