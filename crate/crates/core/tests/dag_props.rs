use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use powlab_core::chain::{FeeDistribution, Mempool, Transaction};
use powlab_core::dag::{
    attribute_rewards, collision_rate, duel_miners, mean_profit_factor, profit_factor, run_dag_experiment,
    select_txs_greedy, select_txs_rts, uniform_miners, DagBlock, DagConfig, DagLedger, Selection,
};
use powlab_core::sim::{SimRng, Topology};

fn full_pool(n: usize, fee: impl Fn(usize) -> u64) -> Mempool {
    let mut p = Mempool::new(n);
    for i in 0..n {
        p.insert(Transaction {
            id: i as u64,
            fee: fee(i),
            created_at: 0.0,
        });
    }
    p
}

#[test]
fn random_selection_is_uniform() {
    let (n, k, rounds) = (10_000usize, 100usize, 1_000usize);
    let pool = full_pool(n, |i| (i % 97) as u64);
    let mut rng = SimRng::new(5, "rts/uniform");
    let mut counts = vec![0u32; n];
    for _ in 0..rounds {
        let pick = select_txs_rts(&pool, k, &mut rng);
        let ids: HashSet<u64> = pick.iter().map(|t| t.id).collect();
        assert_eq!(ids.len(), k, "sample repeats a tx");
        for t in pick {
            counts[t.id as usize] += 1;
        }
    }
    let expect = (rounds * k) as f64 / n as f64;
    let sd = (expect * (1.0 - k as f64 / n as f64)).sqrt();
    let mut chi2 = 0.0;
    for &c in &counts {
        let d = c as f64 - expect;
        assert!(d.abs() <= 5.0 * sd, "count {c} vs {expect}");
        chi2 += d * d / expect;
    }
    // chi-square with n - 1 degrees of freedom
    let df = (n - 1) as f64;
    assert!((chi2 - df).abs() <= 5.0 * (2.0 * df).sqrt(), "chi2 {chi2}");
}

#[test]
fn selection_leaves_pool_untouched() {
    let pool = full_pool(500, |i| (i * 7 % 31) as u64);
    let before: Vec<Transaction> = pool.iter().cloned().collect();
    select_txs_rts(&pool, 100, &mut SimRng::new(1, "x"));
    select_txs_greedy(&pool, 100);
    let after: Vec<Transaction> = pool.iter().cloned().collect();
    assert_eq!(before, after);
}

fn ledger() -> impl Strategy<Value = Vec<(usize, u32, Vec<(u64, u64)>)>> {
    prop::collection::vec(
        (0usize..5, 0u32..100, prop::collection::vec((0u64..40, 1u64..1000), 0..15)),
        1..40,
    )
}

fn build(blocks: &[(usize, u32, Vec<(u64, u64)>)]) -> DagLedger {
    let mut l = DagLedger::new();
    for (i, (miner, t, txs)) in blocks.iter().enumerate() {
        // fee is a function of the tx id so duplicates agree
        let txs = txs.iter().map(|&(id, _)| (id, id * 13 + 1)).collect();
        l.push(DagBlock {
            id: i as u64,
            miner: *miner,
            created_at: *t as f64,
            txs,
        });
    }
    l
}

proptest! {
    #[test]
    fn each_fee_is_paid_once(blocks in ledger()) {
        let mut l = build(&blocks);
        let paid: u64 = attribute_rewards(&mut l).values().sum();
        let unique: HashMap<u64, u64> = l.ordered().iter().flat_map(|b| b.txs.iter().copied()).collect();
        prop_assert_eq!(paid, unique.values().sum::<u64>());
        let (total, distinct) = l.inclusion_counts();
        prop_assert_eq!(distinct, unique.len());
        if total > 0 {
            let c = collision_rate(&mut l).unwrap();
            prop_assert!((0.0..1.0).contains(&c));
            prop_assert!((c - (total - distinct) as f64 / total as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn ordering_ignores_insertion_order(blocks in ledger(), seed in any::<u64>()) {
        let mut a = build(&blocks);
        let mut shuffled: Vec<DagBlock> = a.ordered().to_vec();
        let mut rng = SimRng::new(seed, "shuffle");
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let mut b = DagLedger::new();
        for x in shuffled {
            b.push(x);
        }
        prop_assert_eq!(a.ordered(), b.ordered());
        prop_assert_eq!(attribute_rewards(&mut a), attribute_rewards(&mut b));
    }

    #[test]
    fn power_weighted_profit_factor_is_one(
        raw in prop::collection::vec(0.01f64..1.0, 1..8),
        rewards in prop::collection::vec(0u64..1_000_000, 8),
    ) {
        let s: f64 = raw.iter().sum();
        let powers: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let map: HashMap<usize, u64> = (0..powers.len()).map(|m| (m, rewards[m])).collect();
        prop_assume!(map.values().sum::<u64>() > 0);
        let pf = profit_factor(&map, &powers).unwrap();
        let weighted: f64 = pf.iter().zip(&powers).map(|(f, p)| f * p).sum();
        prop_assert!((weighted - 1.0).abs() < 1e-9, "{}", weighted);
    }
}

#[test]
fn experiment_profit_factors_weight_to_one() {
    let cfg = DagConfig {
        mempool_capacity: 2_000,
        ..DagConfig::default()
    };
    let topo = Topology::ring(10, 1.0).unwrap();
    for miners in [duel_miners(0.3), uniform_miners(10, 4)] {
        let r = run_dag_experiment(&cfg, &miners, &topo, 20.0 * 400.0, 3, "weights").unwrap();
        let w: f64 = miners.iter().map(|m| m.power * r.profit_factor[m.id]).sum();
        assert!((w - 1.0).abs() < 1e-9, "{w}");
        assert_eq!(r.inclusions as f64 * r.collision_rate, (r.inclusions - r.unique_txs) as f64);
    }
}

#[test]
fn experiment_is_deterministic_per_seed() {
    let cfg = DagConfig {
        mempool_capacity: 2_000,
        ..DagConfig::default()
    };
    let topo = Topology::ring(10, 1.0).unwrap();
    let miners = uniform_miners(10, 3);
    let run = |seed| run_dag_experiment(&cfg, &miners, &topo, 20.0 * 300.0, seed, "det").unwrap();
    assert_eq!(run(1), run(1));
    assert_ne!(run(1).rewards, run(2).rewards);
}

#[test]
fn flat_fees_leave_no_greedy_edge() {
    let cfg = DagConfig {
        fee_distribution: FeeDistribution::Flat { value: 100 },
        ..DagConfig::default()
    };
    let topo = Topology::ring(10, 1.0).unwrap();
    let miners = duel_miners(0.3);
    let (mut g, mut h) = (0.0, 0.0);
    let runs = 4;
    for r in 0..runs {
        let res = run_dag_experiment(&cfg, &miners, &topo, 20.0 * 2000.0, r, "flat").unwrap();
        g += mean_profit_factor(&res, &miners, Selection::Greedy).unwrap() / runs as f64;
        h += mean_profit_factor(&res, &miners, Selection::Rts).unwrap() / runs as f64;
    }
    assert!((g - h).abs() <= 0.05, "greedy {g} honest {h}");
}
