use std::collections::HashMap;

use crate::chain::{Block, BlockHeader};

use super::{StrongchainError, StrongchainParams};

/// A chain from genesis plus weak headers seen on its tip but not yet
/// included in a block.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChainView {
    pub blocks: Vec<Block>,
    pub pending_weak: Vec<BlockHeader>,
}

fn block_pow(b: &Block, p: &StrongchainParams) -> f64 {
    let t_s = b.header.target;
    let t_w = t_s * p.ratio();
    p.t_max / t_s + b.weak_headers.len() as f64 * p.t_max / t_w
}

/// Aggregated PoW: per block `T_max/T_s + |weak| * T_max/T_w`, using each
/// block's recorded target.
pub fn chain_pow(chain: &ChainView, p: &StrongchainParams) -> f64 {
    chain.blocks.iter().map(|b| block_pow(b, p)).sum()
}

fn is_single_block_fork(a: &ChainView, b: &ChainView) -> bool {
    let (Some(x), Some(y)) = (a.blocks.last(), b.blocks.last()) else {
        return false;
    };
    a.blocks.len() == b.blocks.len() && x.header.prev_hash == y.header.prev_hash && x.header.target == y.header.target
}

/// Index of the preferred candidate.
///
/// Higher aggregated PoW wins. Two chains that differ only in a last block
/// mined on the same parent at the same target are compared by included plus
/// pending weak headers instead. Remaining ties keep the earlier candidate.
pub fn fork_choice(candidates: &[ChainView], p: &StrongchainParams) -> Result<usize, StrongchainError> {
    if candidates.is_empty() {
        return Err(StrongchainError::NoCandidates);
    }
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let b = &candidates[best];
        let better = if is_single_block_fork(c, b) {
            let lk = |v: &ChainView| v.blocks.last().unwrap().weak_headers.len() + v.pending_weak.len();
            lk(c) > lk(b)
        } else {
            chain_pow(c, p) > chain_pow(b, p)
        };
        if better {
            best = i;
        }
    }
    Ok(best)
}

/// Payouts for one block, strong finder first, then weak finders in order of
/// first appearance. Fees are the block's transaction fees.
pub fn reward_block(block: &Block, p: &StrongchainParams) -> Vec<(usize, f64)> {
    let fees: u64 = block.txs.iter().map(|t| t.fee).sum();
    let mut out = vec![(block.header.coinbase.miner(), p.reward + fees as f64)];
    let w = p.weak_reward();
    let mut idx: HashMap<usize, usize> = HashMap::new();
    for h in &block.weak_headers {
        let m = h.coinbase.miner();
        match idx.get(&m) {
            Some(&i) => out[i].1 += w,
            None => {
                idx.insert(m, out.len());
                out.push((m, w));
            }
        }
    }
    out
}

/// Weighted mean of header timestamps: weight 1 for the strong header and
/// `T_s/T_w` for each weak header.
pub fn block_timestamp(block: &Block, p: &StrongchainParams) -> f64 {
    let w = 1.0 / p.ratio();
    let sum: f64 = block.weak_headers.iter().map(|h| h.timestamp).sum();
    (block.header.timestamp + w * sum) / (1.0 + w * block.weak_headers.len() as f64)
}

/// New `(T_s, T_w)` after a full difficulty window. Elapsed time is the
/// difference of the weighted timestamps of the last and first blocks.
pub fn retarget(history: &[Block], p: &StrongchainParams) -> Result<(f64, f64), StrongchainError> {
    if history.len() != p.difficulty_window {
        return Err(StrongchainError::WindowLength {
            got: history.len(),
            want: p.difficulty_window,
        });
    }
    let elapsed = block_timestamp(history.last().unwrap(), p) - block_timestamp(&history[0], p);
    if elapsed <= 0.0 {
        return Err(StrongchainError::ZeroElapsed);
    }
    let expected = p.difficulty_window as f64 * p.target_block_time;
    let t_s = p.t_s * elapsed / expected;
    Ok((t_s, t_s * p.ratio()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{Coinbase, Hash256};

    fn params(t_s: f64, t_w: f64) -> StrongchainParams {
        StrongchainParams {
            t_s,
            t_w,
            t_max: 1.0,
            reward: 12.5,
            gamma: 10.0,
            c: 1.0,
            difficulty_window: 4,
            target_block_time: 600.0,
        }
    }

    fn hdr(prev: Hash256, target: f64, ts: f64, miner: usize) -> BlockHeader {
        BlockHeader {
            prev_hash: prev,
            target,
            nonce: 0,
            timestamp: ts,
            tx_root: Hash256::ZERO,
            coinbase: Coinbase::from_miner(miner),
            pow_value: 0.0,
        }
    }

    fn block(prev: Hash256, target: f64, weak: usize, ts: f64) -> Block {
        let ws = (0..weak).map(|i| hdr(prev, target, ts, 100 + i)).collect();
        Block::assemble(hdr(prev, target, ts, 0), ws, vec![])
    }

    #[test]
    fn pow_examples() {
        let p = params(0.25, 0.5);
        assert_eq!(chain_pow(&ChainView::default(), &p), 0.0);
        let one = ChainView {
            blocks: vec![block(Hash256::ZERO, 1.0, 0, 0.0)],
            pending_weak: vec![],
        };
        assert_eq!(chain_pow(&one, &params(1.0, 1.0)), 1.0);
        let two_weak = ChainView {
            blocks: vec![block(Hash256::ZERO, 0.25, 2, 0.0)],
            pending_weak: vec![],
        };
        assert_eq!(chain_pow(&two_weak, &p), 8.0);
    }

    #[test]
    fn sibling_forks_count_pending() {
        let p = params(0.25, 0.5);
        let g = Hash256([1; 32]);
        let mk = |l: usize, k: usize| ChainView {
            blocks: vec![block(g, 0.25, l, 0.0)],
            pending_weak: (0..k).map(|_| hdr(Hash256::ZERO, 0.25, 0.0, 7)).collect(),
        };
        assert_eq!(fork_choice(&[mk(4, 0), mk(3, 2)], &p).unwrap(), 1);
        assert_eq!(fork_choice(&[mk(3, 2), mk(4, 0)], &p).unwrap(), 0);
        assert_eq!(fork_choice(&[mk(3, 2), mk(3, 2)], &p).unwrap(), 0);
    }

    #[test]
    fn longer_pow_wins_regardless_of_pending() {
        let p = params(0.25, 0.5);
        let short = ChainView {
            blocks: vec![block(Hash256::ZERO, 0.25, 0, 0.0)],
            pending_weak: (0..50).map(|_| hdr(Hash256::ZERO, 0.25, 0.0, 7)).collect(),
        };
        let b1 = block(Hash256::ZERO, 0.25, 0, 0.0);
        let b2 = block(b1.hash(), 0.25, 0, 1.0);
        let long = ChainView {
            blocks: vec![b1, b2],
            pending_weak: vec![],
        };
        assert_eq!(fork_choice(&[short, long], &p).unwrap(), 1);
        assert!(fork_choice(&[], &p).is_err());
    }

    #[test]
    fn rewards() {
        let p = params(1.0 / 1024.0, 1.0);
        let b = block(Hash256::ZERO, p.t_s, 0, 0.0);
        assert_eq!(reward_block(&b, &p), vec![(0, 12.5)]);
        assert_eq!(p.weak_reward(), 0.1220703125);
        let mut b = block(Hash256::ZERO, p.t_s, 2, 0.0);
        b.weak_headers[1].coinbase = b.weak_headers[0].coinbase;
        assert_eq!(reward_block(&b, &p), vec![(0, 12.5), (100, 2.0 * 0.1220703125)]);
    }

    #[test]
    fn timestamps() {
        let p = params(0.25, 0.5);
        let mut b = block(Hash256::ZERO, 0.25, 1, 100.0);
        b.weak_headers[0].timestamp = 200.0;
        assert!((block_timestamp(&b, &p) - 200.0 / 1.5).abs() < 1e-12);
        assert_eq!(block_timestamp(&block(Hash256::ZERO, 0.25, 0, 42.0), &p), 42.0);
        assert_eq!(block_timestamp(&block(Hash256::ZERO, 0.25, 3, 9.0), &p), 9.0);
    }

    #[test]
    fn retarget_rules() {
        let p = params(0.25, 0.5);
        let window = |span: f64| -> Vec<Block> {
            (0..4).map(|i| block(Hash256::ZERO, 0.25, 0, span * i as f64 / 3.0)).collect()
        };
        assert_eq!(retarget(&window(2400.0), &p).unwrap(), (0.25, 0.5));
        let (ts, tw) = retarget(&window(1200.0), &p).unwrap();
        assert_eq!((ts, tw), (0.125, 0.25));
        assert!(matches!(retarget(&window(0.0), &p), Err(StrongchainError::ZeroElapsed)));
        assert!(retarget(&window(2400.0)[..3], &p).is_err());
    }
}
