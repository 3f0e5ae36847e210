use std::collections::HashSet;

use proptest::prelude::*;

use powlab_core::chain::{Block, BlockHeader, Coinbase, Hash256, Transaction};
use powlab_core::sim::SimRng;
use powlab_core::strongchain::{
    bitcoin_relative_std, block_timestamp, chain_pow, equivalent_pool_size, estimate_reward_stats, fork_choice,
    reward_block, run_race, ChainView, MinerStrategy, RaceConfig, StrongchainParams,
};

fn params(ratio: f64, t_max: f64) -> StrongchainParams {
    StrongchainParams {
        t_s: t_max / 1024.0,
        t_w: t_max / 1024.0 * ratio,
        t_max,
        reward: 12.5,
        gamma: 10.0,
        c: 1.0,
        difficulty_window: 2016,
        target_block_time: 600.0,
    }
}

fn header(prev: Hash256, target: f64, ts: f64, miner: usize) -> BlockHeader {
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

/// Block description: (target exponent, weak timestamps with finders, strong timestamp, fees).
type Spec = (u32, Vec<(f64, usize)>, f64, Vec<u64>);

fn spec() -> impl Strategy<Value = Spec> {
    (
        8u32..14,
        prop::collection::vec((0.0f64..1e6, 0usize..5), 0..20),
        0.0f64..1e6,
        prop::collection::vec(0u64..1_000_000, 0..10),
    )
}

fn build(prev: Hash256, s: &Spec) -> Block {
    let target = 1.0 / (1u64 << s.0) as f64;
    let weak = s.1.iter().map(|&(t, m)| header(prev, target, t, m)).collect();
    let txs = s
        .3
        .iter()
        .enumerate()
        .map(|(i, &fee)| Transaction {
            id: i as u64,
            fee,
            created_at: 0.0,
        })
        .collect();
    Block::assemble(header(prev, target, s.2, 7), weak, txs)
}

fn chain(specs: &[Spec], root: Hash256) -> ChainView {
    let mut blocks: Vec<Block> = Vec::new();
    for s in specs {
        let prev = blocks.last().map(|b| b.hash()).unwrap_or(root);
        blocks.push(build(prev, s));
    }
    ChainView {
        blocks,
        pending_weak: vec![],
    }
}

proptest! {
    #[test]
    fn chain_pow_is_additive(specs in prop::collection::vec(spec(), 0..6), next in spec(), ratio_exp in 0u32..11) {
        let p = params((1u64 << ratio_exp) as f64, 1.0);
        let mut c = chain(&specs, Hash256::ZERO);
        let before = chain_pow(&c, &p);
        let prev = c.blocks.last().map(|b| b.hash()).unwrap_or(Hash256::ZERO);
        let b = build(prev, &next);
        let t_s = b.header.target;
        let want = p.t_max / t_s + b.weak_headers.len() as f64 * p.t_max / (t_s * p.ratio());
        c.blocks.push(b);
        let got = chain_pow(&c, &p) - before;
        prop_assert!((got - want).abs() <= 1e-9 * want, "{} vs {}", got, want);
    }

    #[test]
    fn fork_choice_ignores_t_max_scale(
        chains in prop::collection::vec(prop::collection::vec(spec(), 1..4), 1..5),
        pending in prop::collection::vec(0usize..5, 5),
        scale_exp in -20i32..20,
    ) {
        let views: Vec<ChainView> = chains
            .iter()
            .zip(&pending)
            .map(|(specs, &k)| {
                let mut v = chain(specs, Hash256([1; 32]));
                v.pending_weak = (0..k).map(|_| header(Hash256::ZERO, 0.001, 0.0, 3)).collect();
                v
            })
            .collect();
        let base = params(64.0, 1.0);
        let scaled = StrongchainParams { t_max: 2f64.powi(scale_exp), ..base };
        prop_assert_eq!(fork_choice(&views, &base).unwrap(), fork_choice(&views, &scaled).unwrap());
    }

    #[test]
    fn rewards_match_declared_emission(s in spec(), ratio_exp in 0u32..11) {
        let p = params((1u64 << ratio_exp) as f64, 1.0);
        let b = build(Hash256::ZERO, &s);
        let paid = reward_block(&b, &p);
        let total: f64 = paid.iter().map(|(_, x)| x).sum();
        let fees: u64 = s.3.iter().sum();
        let want = p.reward + fees as f64 + b.weak_headers.len() as f64 * p.gamma * p.c * p.reward * p.t_s / p.t_w;
        prop_assert!((total - want).abs() <= 1e-9 * want);
        prop_assert_eq!(paid[0].0, 7);
        let weak: HashSet<usize> = paid[1..].iter().map(|(m, _)| *m).collect();
        prop_assert_eq!(weak.len(), paid.len() - 1, "a weak finder is paid twice");
    }

    #[test]
    fn timestamp_within_constituents(s in spec(), ratio_exp in 0u32..11) {
        let p = params((1u64 << ratio_exp) as f64, 1.0);
        let b = build(Hash256::ZERO, &s);
        let ts: Vec<f64> = std::iter::once(s.2).chain(s.1.iter().map(|w| w.0)).collect();
        let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let t = block_timestamp(&b, &p);
        prop_assert!(t >= lo - 1e-6 && t <= hi + 1e-6, "{} not in [{}, {}]", t, lo, hi);
    }
}

/// Per-block mean and variance of an honest miner's reward, in closed form.
/// Weak headers per block are geometric with success probability
/// `q = T_s/T_w`, so `E[W] = (1-q)/q` and `Var[W] = (1-q)/q^2`.
fn analytic(alpha: f64, p: &StrongchainParams) -> (f64, f64) {
    let q = p.t_s / p.t_w;
    let (ew, vw) = ((1.0 - q) / q, (1.0 - q) / (q * q));
    let w = p.weak_reward();
    let r = p.reward;
    let mean = alpha * r + w * alpha * ew;
    let var = r * r * alpha * (1.0 - alpha) + w * w * (ew * alpha * (1.0 - alpha) + alpha * alpha * vw);
    (mean, var)
}

#[test]
fn reward_variance_matches_closed_form() {
    for (alpha, ratio, gamma) in [(0.01, 16.0, 4.0), (0.1, 1024.0, 10.0), (0.3, 64.0, 6.0), (0.00245, 1024.0, 10.0)] {
        let p = StrongchainParams::with_ratio(ratio).unwrap().gamma(gamma);
        let n = 1_000_000;
        let s = estimate_reward_stats(alpha, &p, n, &mut SimRng::new(11, format!("oracle/{ratio}/{alpha}"))).unwrap();
        let (m, v) = analytic(alpha, &p);
        assert!((s.per_block_mean / m - 1.0).abs() < 0.02, "mean {} vs {m}", s.per_block_mean);
        assert!((s.per_block_var / v - 1.0).abs() < 0.05, "var {} vs {v}", s.per_block_var);
        let rel = (n as f64 * v).sqrt() / (n as f64 * m);
        assert!((s.relative_std / rel - 1.0).abs() < 0.03);
    }
}

#[test]
fn pool_equivalence_matches_closed_form() {
    for (alpha, ratio) in [(0.00245, 1024.0), (0.01, 64.0), (0.05, 4.0)] {
        let p = StrongchainParams::with_ratio(ratio).unwrap().gamma(10.0);
        let (m, v) = analytic(alpha, &p);
        // equal relative std: (1 - beta) / beta = v / m^2
        let beta = 1.0 / (1.0 + v / (m * m));
        let got = equivalent_pool_size(alpha, &p, 2_000_000, 1e-6, &mut SimRng::new(3, "oracle/pool")).unwrap();
        assert!((got / beta - 1.0).abs() < 0.05, "ratio {ratio}: {got} vs {beta}");
    }
    let (m, v) = analytic(0.00245, &StrongchainParams::with_ratio(1024.0).unwrap().gamma(10.0));
    let beta = 1.0 / (1.0 + v / (m * m));
    assert!((beta / 0.00245 / 74.0 - 1.0).abs() < 0.2, "closed-form reduction {}", beta / 0.00245);
}

#[test]
fn no_weak_region_is_the_identity() {
    let p = StrongchainParams::with_ratio(1.0).unwrap();
    let beta = equivalent_pool_size(0.2, &p, 500_000, 1e-6, &mut SimRng::new(4, "id")).unwrap();
    assert!((beta - 0.2).abs() < 0.01, "{beta}");
    assert!((bitcoin_relative_std(0.2, 100) - (0.8f64 / 20.0).sqrt()).abs() < 1e-15);
}

#[test]
fn honest_zero_delay_is_fair_with_weak_headers() {
    for alpha in [0.1, 0.45] {
        let cfg = RaceConfig {
            alpha,
            strategy: MinerStrategy::Honest,
            params: StrongchainParams::with_ratio(16.0).unwrap(),
            latency: 0.0,
            blocks: 10_000,
        };
        let o = run_race(&cfg, 8, "fair").unwrap();
        assert_eq!(o.main_chain_blocks, 10_000, "fork without delay");
        assert!((o.relative_payoff / alpha - 1.0).abs() < 0.03, "{}", o.relative_payoff);
    }
}
