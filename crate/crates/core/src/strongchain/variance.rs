use rand::Rng;
use rand_distr::{Binomial, Distribution, Geometric};

use super::{StrongchainError, StrongchainParams};
use crate::sim::SimRng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewardStats {
    /// Mean total reward over the horizon.
    pub mean: f64,
    /// Standard deviation of the total over its mean.
    pub relative_std: f64,
    pub per_block_mean: f64,
    pub per_block_var: f64,
}

/// Monte Carlo reward statistics of an honest miner with power `alpha`.
///
/// Each of `horizon` simulated blocks draws the weak headers found before it,
/// `W ~ Geometric(T_s/T_w)`, the miner's share of them,
/// `Binomial(W, alpha)`, and whether the miner found the strong block,
/// `Bernoulli(alpha)`. Blocks are independent, so the total over the horizon
/// has mean `horizon * m` and standard deviation `sqrt(horizon * v)`.
pub fn estimate_reward_stats(
    alpha: f64,
    p: &StrongchainParams,
    horizon: usize,
    rng: &mut SimRng,
) -> Result<RewardStats, StrongchainError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(StrongchainError::InvalidParams(format!("alpha must be in (0, 1], got {alpha}")));
    }
    if horizon < 100 {
        return Err(StrongchainError::HorizonTooSmall(horizon));
    }
    p.validate()?;
    let geo = Geometric::new(p.t_s / p.t_w).map_err(|e| StrongchainError::InvalidParams(e.to_string()))?;
    let w = p.weak_reward();
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..horizon {
        let weak = geo.sample(rng);
        let mine = if weak == 0 {
            0
        } else {
            Binomial::new(weak, alpha).expect("valid binomial").sample(rng)
        };
        let strong = if rng.random::<f64>() < alpha { p.reward } else { 0.0 };
        let x = strong + mine as f64 * w;
        sum += x;
        sum_sq += x * x;
    }
    let n = horizon as f64;
    let m = sum / n;
    let v = ((sum_sq - n * m * m) / (n - 1.0)).max(0.0);
    Ok(RewardStats {
        mean: m * n,
        relative_std: if m > 0.0 { (v * n).sqrt() / (m * n) } else { f64::INFINITY },
        per_block_mean: m,
        per_block_var: v,
    })
}

/// Relative standard deviation of a pool of size `beta` over `horizon`
/// blocks without weak headers: `sqrt((1 - beta) / (horizon * beta))`.
pub fn bitcoin_relative_std(beta: f64, horizon: usize) -> f64 {
    ((1.0 - beta) / (horizon as f64 * beta)).sqrt()
}

const MAX_ITERS: usize = 200;

/// Bitcoin pool size whose reward has the same relative standard deviation
/// as a weak-header miner of size `alpha`, found by bisection to within
/// `tolerance` (relative).
pub fn equivalent_pool_size(
    alpha: f64,
    p: &StrongchainParams,
    horizon: usize,
    tolerance: f64,
    rng: &mut SimRng,
) -> Result<f64, StrongchainError> {
    let target = estimate_reward_stats(alpha, p, horizon, rng)?.relative_std;
    if target <= bitcoin_relative_std(1.0 - 1e-15, horizon) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1e-12f64, 1.0f64);
    for _ in 0..MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let s = bitcoin_relative_std(mid, horizon);
        if ((s - target) / target).abs() <= tolerance {
            return Ok(mid);
        }
        // relative std falls as the pool grows
        if s > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(StrongchainError::NoConvergence(MAX_ITERS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_power_has_tiny_spread() {
        let p = StrongchainParams::with_ratio(1024.0).unwrap();
        let s = estimate_reward_stats(1.0, &p, 10_000, &mut SimRng::new(1, "v")).unwrap();
        assert!(s.relative_std < 0.01, "{}", s.relative_std);
    }

    #[test]
    fn no_weak_region_matches_binomial() {
        let p = StrongchainParams::with_ratio(1.0).unwrap();
        let n = 200_000;
        let s = estimate_reward_stats(0.2, &p, n, &mut SimRng::new(2, "v")).unwrap();
        let want = bitcoin_relative_std(0.2, n);
        assert!((s.relative_std / want - 1.0).abs() < 0.02, "{} vs {want}", s.relative_std);
        let beta = equivalent_pool_size(0.2, &p, n, 1e-6, &mut SimRng::new(2, "v")).unwrap();
        assert!((beta - 0.2).abs() < 0.01, "{beta}");
    }

    #[test]
    fn rejects_small_horizon() {
        let p = StrongchainParams::with_ratio(4.0).unwrap();
        assert_eq!(
            estimate_reward_stats(0.5, &p, 99, &mut SimRng::new(0, "v")),
            Err(StrongchainError::HorizonTooSmall(99))
        );
    }
}
