use super::frsc::{apply_block, next_claim, FeeSplit, Frsc, PPB};
use super::strategy::{strategy_decide, MiningAction, TipInfo, UndercutStrategy, View};

/// One block in the game's block tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockNode {
    pub parent: Option<usize>,
    pub height: u64,
    pub time: f64,
    pub miner: Option<usize>,
    /// Fees claimed by this block.
    pub claim: u64,
    /// Fees claimed along the chain up to and including this block.
    pub chain_claimed: u64,
    /// Paid to this block's miner.
    pub reward_t: u64,
    /// Contract payout a child of this block receives.
    pub next_claim: u64,
    pub undercut: bool,
}

/// Fee market settings shared by all blocks of a game.
#[derive(Clone, Debug, PartialEq)]
pub struct FeeMarket {
    /// Fees entering the mempool per `block_time` seconds.
    pub fee_inflow: u64,
    pub block_time: f64,
    /// Fees sitting in the mempool at time zero.
    pub initial_fees: u64,
    /// Caps each block's claim at `fee_inflow`.
    pub full_mempool: bool,
    pub split: FeeSplit,
}

/// Block tree of a single game with zero propagation delay.
///
/// Contract state is stored per block (`nu` values, flattened) so any block
/// can be extended.
#[derive(Clone, Debug)]
pub struct Game {
    market: FeeMarket,
    template: Vec<Frsc>,
    blocks: Vec<BlockNode>,
    nu: Vec<u64>,
    tips_at_max: Vec<usize>,
    scratch: Vec<Frsc>,
    conservation_failures: u64,
}

impl Game {
    /// New tree holding only a genesis block with the given contracts.
    pub fn new(market: FeeMarket, genesis_frscs: Vec<Frsc>) -> Self {
        let mut g = Self {
            market,
            template: genesis_frscs.clone(),
            blocks: Vec::new(),
            nu: Vec::new(),
            tips_at_max: Vec::new(),
            scratch: genesis_frscs.clone(),
            conservation_failures: 0,
        };
        g.reset(&genesis_frscs);
        g
    }

    /// Clears the tree, keeping allocations.
    pub fn reset(&mut self, genesis_frscs: &[Frsc]) {
        self.template = genesis_frscs.to_vec();
        self.blocks.clear();
        self.nu.clear();
        self.nu.extend(genesis_frscs.iter().map(|f| f.nu));
        self.blocks.push(BlockNode {
            parent: None,
            height: 0,
            time: 0.0,
            miner: None,
            claim: 0,
            chain_claimed: 0,
            reward_t: 0,
            next_claim: next_claim(genesis_frscs),
            undercut: false,
        });
        self.tips_at_max.clear();
        self.tips_at_max.push(0);
        self.conservation_failures = 0;
    }

    pub fn blocks(&self) -> &[BlockNode] {
        &self.blocks
    }

    pub fn market(&self) -> &FeeMarket {
        &self.market
    }

    /// Contract balances after block `b`.
    pub fn nu_after(&self, b: usize) -> &[u64] {
        let k = self.template.len();
        &self.nu[b * k..(b + 1) * k]
    }

    pub fn conservation_failures(&self) -> u64 {
        self.conservation_failures
    }

    /// Longest-chain tips in arrival order.
    pub fn tips_at_max(&self) -> &[usize] {
        &self.tips_at_max
    }

    /// Fees a child of `b` found at time `t` may claim.
    pub fn available(&self, b: usize, t: f64) -> u64 {
        let arrived = self.market.initial_fees
            + (self.market.fee_inflow as f64 * t / self.market.block_time).floor() as u64;
        let a = arrived.saturating_sub(self.blocks[b].chain_claimed);
        if self.market.full_mempool {
            a.min(self.market.fee_inflow)
        } else {
            a
        }
    }

    /// Appends a block on `parent`, paying out its contracts. `claim` must
    /// not exceed what is available at `t`.
    pub fn push_block(&mut self, parent: usize, miner: Option<usize>, claim: u64, t: f64, undercut: bool) -> usize {
        debug_assert!(claim <= self.available(parent, t));
        let k = self.template.len();
        for (i, f) in self.scratch.iter_mut().enumerate() {
            *f = self.template[i];
            f.nu = self.nu[parent * k + i];
        }
        let before: u128 = self.scratch.iter().map(|f| f.nu as u128).sum();
        let payout = apply_block(&mut self.scratch, claim, &self.market.split);
        let after: u128 = self.scratch.iter().map(|f| f.nu as u128).sum();
        if payout.reward_t as u128 + after != before + claim as u128 {
            self.conservation_failures += 1;
        }
        self.nu.extend(self.scratch.iter().map(|f| f.nu));
        let p = self.blocks[parent];
        let id = self.blocks.len();
        self.blocks.push(BlockNode {
            parent: Some(parent),
            height: p.height + 1,
            time: t,
            miner,
            claim,
            chain_claimed: p.chain_claimed + claim,
            reward_t: payout.reward_t,
            next_claim: next_claim(&self.scratch),
            undercut,
        });
        let max_h = self.blocks[self.tips_at_max[0]].height;
        if p.height + 1 > max_h {
            self.tips_at_max.clear();
            self.tips_at_max.push(id);
        } else if p.height + 1 == max_h {
            self.tips_at_max.push(id);
        }
        id
    }

    fn info(&self, b: usize, t: f64) -> TipInfo {
        TipInfo {
            id: b,
            available: self.available(b, t),
            next_claim: self.blocks[b].next_claim,
        }
    }

    /// The action `strategy` takes when it finds a block at `t`.
    pub fn decide(&self, strategy: &UndercutStrategy, t: f64) -> MiningAction {
        let tips: Vec<(TipInfo, Option<TipInfo>)> = self
            .tips_at_max
            .iter()
            .map(|&b| (self.info(b, t), self.blocks[b].parent.map(|p| self.info(p, t))))
            .collect();
        strategy_decide(
            strategy,
            &View {
                tips: &tips,
                m_ppb: self.market.split.m_ppb,
            },
        )
    }

    /// `miner` finds a block at `t` and mines it per `strategy`.
    pub fn mine(&mut self, miner: usize, strategy: &UndercutStrategy, t: f64) -> usize {
        let a = self.decide(strategy, t);
        self.push_block(a.parent, Some(miner), a.claim, t, a.undercut)
    }

    /// Blocks of the longest chain from genesis; among equal-height tips the
    /// earliest wins.
    pub fn main_chain(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = Some(self.tips_at_max[0]);
        while let Some(b) = cur {
            out.push(b);
            cur = self.blocks[b].parent;
        }
        out.reverse();
        out
    }

    /// Rewards of main-chain blocks per miner.
    pub fn payouts(&self, n_miners: usize) -> Vec<u64> {
        let mut p = vec![0u64; n_miners];
        for b in self.main_chain() {
            if let Some(m) = self.blocks[b].miner {
                p[m] += self.blocks[b].reward_t;
            }
        }
        p
    }

    /// Fraction of mined blocks that are off the main chain.
    pub fn orphan_rate(&self) -> f64 {
        let mined = self.blocks.iter().filter(|b| b.miner.is_some()).count();
        if mined == 0 {
            return 0.0;
        }
        let on_main = self
            .main_chain()
            .iter()
            .filter(|&&b| self.blocks[b].miner.is_some())
            .count();
        1.0 - on_main as f64 / mined as f64
    }

    /// Genesis contracts scaled by `1 + rate`.
    pub fn compensated(genesis: &[Frsc], rate: f64) -> Vec<Frsc> {
        let bump = (rate.clamp(0.0, 1.0) * PPB as f64).round() as u128;
        genesis
            .iter()
            .map(|f| Frsc {
                nu: (f.nu as u128 * (PPB as u128 + bump) / PPB as u128) as u64,
                ..*f
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feegame::frsc::{init_frscs, to_ppb};

    fn market(inflow: u64, split: FeeSplit) -> FeeMarket {
        FeeMarket {
            fee_inflow: inflow,
            block_time: 600.0,
            initial_fees: 0,
            full_mempool: false,
            split,
        }
    }

    #[test]
    fn compliant_chain_claims_inflow() {
        let mut g = Game::new(market(600, FeeSplit::none()), vec![]);
        let dc = UndercutStrategy::DefaultCompliant;
        g.mine(0, &dc, 600.0);
        g.mine(1, &dc, 900.0);
        assert_eq!(g.blocks()[1].claim, 600);
        assert_eq!(g.blocks()[2].claim, 300);
        assert_eq!(g.payouts(2), vec![600, 300]);
        assert_eq!(g.orphan_rate(), 0.0);
    }

    #[test]
    fn undercut_creates_sibling() {
        let mut g = Game::new(market(1000, FeeSplit::none()), vec![]);
        g.mine(0, &UndercutStrategy::DefaultCompliant, 600.0);
        let b = g.mine(1, &UndercutStrategy::function_fork(0.5), 600.0);
        assert_eq!(g.blocks()[b].parent, Some(0));
        assert!(g.blocks()[b].undercut);
        assert_eq!(g.tips_at_max(), &[1, 2]);
        // the oldest tip wins the tie
        assert_eq!(g.main_chain(), vec![0, 1]);
        assert!((g.orphan_rate() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn contracts_conserve_tokens() {
        let split = FeeSplit::from_cdep(0.7).unwrap();
        let genesis = init_frscs(5_000_000_000, split.cdep_ppb, &[(2016, PPB)]).unwrap();
        let mut g = Game::new(market(5_000_000_000, split), genesis);
        let mut t = 0.0;
        for i in 0..500 {
            t += 37.0 + (i % 11) as f64 * 97.0;
            g.mine(i % 3, &UndercutStrategy::PettyCompliant, t);
        }
        assert_eq!(g.conservation_failures(), 0);
    }

    #[test]
    fn compensation_scales_nu() {
        let f = init_frscs(100, to_ppb(1.0), &[(10, PPB)]).unwrap();
        assert_eq!(Game::compensated(&f, 0.4)[0].nu, 1400);
    }
}
