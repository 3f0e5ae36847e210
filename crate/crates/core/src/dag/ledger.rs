use std::collections::{HashMap, HashSet};

use super::DagError;

#[derive(Clone, Debug, PartialEq)]
pub struct DagBlock {
    pub id: u64,
    pub miner: usize,
    pub created_at: f64,
    /// `(tx id, fee)` pairs.
    pub txs: Vec<(u64, u64)>,
}

/// Append-only block set with a deterministic total order by
/// `(created_at, id)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DagLedger {
    blocks: Vec<DagBlock>,
    sorted: bool,
}

impl DagLedger {
    pub fn new() -> Self {
        Self {
            blocks: Vec::new(),
            sorted: true,
        }
    }

    pub fn push(&mut self, b: DagBlock) {
        if let Some(last) = self.blocks.last() {
            if (last.created_at, last.id) > (b.created_at, b.id) {
                self.sorted = false;
            }
        }
        self.blocks.push(b);
    }

    /// Blocks in total order.
    pub fn ordered(&mut self) -> &[DagBlock] {
        if !self.sorted {
            self.blocks
                .sort_by(|a, b| a.created_at.total_cmp(&b.created_at).then(a.id.cmp(&b.id)));
            self.sorted = true;
        }
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Position in total order of the first block containing each tx.
    pub fn tx_first_inclusion(&mut self) -> HashMap<u64, usize> {
        let mut m = HashMap::new();
        for (i, b) in self.ordered().iter().enumerate() {
            for &(tx, _) in &b.txs {
                m.entry(tx).or_insert(i);
            }
        }
        m
    }

    pub fn inclusion_counts(&mut self) -> (usize, usize) {
        let mut seen = HashSet::new();
        let mut total = 0;
        for b in self.ordered() {
            for &(tx, _) in &b.txs {
                total += 1;
                seen.insert(tx);
            }
        }
        (total, seen.len())
    }
}

/// Credits each fee once, to the miner of the first block containing the tx.
pub fn attribute_rewards(ledger: &mut DagLedger) -> HashMap<usize, u64> {
    let mut seen = HashSet::new();
    let mut out: HashMap<usize, u64> = HashMap::new();
    for b in ledger.ordered() {
        let e = out.entry(b.miner).or_insert(0);
        for &(tx, fee) in &b.txs {
            if seen.insert(tx) {
                *e += fee;
            }
        }
    }
    out
}

/// `(reward(m) / total) / power(m)` for every miner.
pub fn profit_factor(rewards: &HashMap<usize, u64>, powers: &[f64]) -> Result<Vec<f64>, DagError> {
    let total: u64 = rewards.values().sum();
    if total == 0 {
        return Err(DagError::ZeroReward);
    }
    Ok(powers
        .iter()
        .enumerate()
        .map(|(m, &p)| {
            let share = *rewards.get(&m).unwrap_or(&0) as f64 / total as f64;
            if p > 0.0 {
                share / p
            } else {
                0.0
            }
        })
        .collect())
}

/// Duplicate inclusions over all inclusions.
pub fn collision_rate(ledger: &mut DagLedger) -> Result<f64, DagError> {
    let (total, unique) = ledger.inclusion_counts();
    if total == 0 {
        return Err(DagError::EmptyLedger);
    }
    Ok((total - unique) as f64 / total as f64)
}
