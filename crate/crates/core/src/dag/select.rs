use serde::{Deserialize, Serialize};

use crate::chain::{Mempool, Transaction};
use crate::sim::SimRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    /// Uniform random sample of the mempool.
    Rts,
    /// Highest fees first.
    Greedy,
}

impl Selection {
    pub fn label(&self) -> &'static str {
        match self {
            Selection::Rts => "honest",
            Selection::Greedy => "greedy",
        }
    }
}

/// Uniform sample without replacement of `min(capacity, |pool|)` txs. The
/// pool is left untouched.
pub fn select_txs_rts(pool: &Mempool, capacity: usize, rng: &mut SimRng) -> Vec<Transaction> {
    pool.sample_uniform(capacity, rng)
}

/// Top `capacity` txs by fee, ties by ascending id.
pub fn select_txs_greedy(pool: &Mempool, capacity: usize) -> Vec<Transaction> {
    pool.top_by_fee(capacity)
}

pub fn select_txs(sel: Selection, pool: &Mempool, capacity: usize, rng: &mut SimRng) -> Vec<Transaction> {
    match sel {
        Selection::Rts => select_txs_rts(pool, capacity, rng),
        Selection::Greedy => select_txs_greedy(pool, capacity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool(fees: &[u64]) -> Mempool {
        let mut p = Mempool::new(10_000);
        for (i, &f) in fees.iter().enumerate() {
            p.insert(Transaction {
                id: i as u64,
                fee: f,
                created_at: 0.0,
            });
        }
        p
    }

    #[test]
    fn greedy_examples() {
        let fees: Vec<u64> = select_txs_greedy(&pool(&[5, 3, 9]), 2).iter().map(|t| t.fee).collect();
        assert_eq!(fees, vec![9, 5]);
        let ids: Vec<u64> = select_txs_greedy(&pool(&[1; 10]), 3).iter().map(|t| t.id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
        assert_eq!(select_txs_greedy(&pool(&[1, 2]), 100).len(), 2);
    }

    #[test]
    fn rts_clamps_and_repeats() {
        let p = pool(&[1; 50]);
        assert_eq!(select_txs_rts(&p, 100, &mut SimRng::new(0, "r")).len(), 50);
        let p = pool(&(0..500).collect::<Vec<_>>());
        let a = select_txs_rts(&p, 100, &mut SimRng::new(4, "r"));
        let b = select_txs_rts(&p, 100, &mut SimRng::new(4, "r"));
        assert_eq!(a, b);
        assert_eq!(p.len(), 500);
    }
}
