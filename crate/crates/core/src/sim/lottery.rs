use super::rng::exp_draw;
use super::{SimError, SimRng, SimTime};

const POWER_SUM_TOLERANCE: f64 = 1e-9;

pub type MinerId = usize;

/// Checks that hash-power fractions are non-negative and sum to one.
pub fn check_powers(powers: &[f64]) -> Result<(), SimError> {
    if powers.is_empty() {
        return Err(SimError::NoMiners);
    }
    if powers.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(SimError::PowersNotNormalized(f64::NAN));
    }
    let sum: f64 = powers.iter().sum();
    if (sum - 1.0).abs() > POWER_SUM_TOLERANCE {
        return Err(SimError::PowersNotNormalized(sum));
    }
    Ok(())
}

/// One step of the PoW lottery: time to the next block and who finds it.
///
/// Draws the inter-block time first, then the winner, both from `rng`.
pub fn next_block_winner(
    rng: &mut SimRng,
    powers: &[f64],
    mean_block_time: SimTime,
) -> Result<(MinerId, SimTime), SimError> {
    check_powers(powers)?;
    if !(mean_block_time > 0.0 && mean_block_time.is_finite()) {
        return Err(SimError::NonPositiveMean(mean_block_time));
    }
    let dt = exp_draw(rng, mean_block_time);
    let u = rng.uniform();
    let mut acc = 0.0;
    let mut winner = powers.len() - 1;
    for (i, p) in powers.iter().enumerate() {
        acc += p;
        if u < acc {
            winner = i;
            break;
        }
    }
    // float slack at the top end must not pick a zero-power miner
    while powers[winner] == 0.0 && winner > 0 {
        winner -= 1;
    }
    Ok((winner, dt))
}

/// Per-miner exponential clocks, each driven by its own stream.
///
/// Equivalent in distribution to [`next_block_winner`], but adding or
/// removing a miner leaves every other miner's sequence of find times intact.
#[derive(Debug, Clone)]
pub struct MinerClocks {
    rngs: Vec<SimRng>,
    means: Vec<f64>,
    next: Vec<SimTime>,
}

impl MinerClocks {
    /// Streams are `"<base>/miner/<i>/clock"`.
    pub fn new(base: &SimRng, powers: &[f64], mean_block_time: SimTime) -> Result<Self, SimError> {
        check_powers(powers)?;
        if !(mean_block_time > 0.0 && mean_block_time.is_finite()) {
            return Err(SimError::NonPositiveMean(mean_block_time));
        }
        let mut rngs: Vec<SimRng> = (0..powers.len())
            .map(|i| base.substream(&format!("miner/{i}/clock")))
            .collect();
        let means: Vec<f64> = powers
            .iter()
            .map(|&p| if p > 0.0 { mean_block_time / p } else { f64::INFINITY })
            .collect();
        let next = rngs
            .iter_mut()
            .zip(&means)
            .map(|(r, &m)| if m.is_finite() { exp_draw(r, m) } else { f64::INFINITY })
            .collect();
        Ok(Self { rngs, means, next })
    }

    /// Earliest pending find: `(miner, absolute time)`. Ties go to the lower id.
    pub fn peek(&self) -> (MinerId, SimTime) {
        let mut best = 0;
        for i in 1..self.next.len() {
            if self.next[i] < self.next[best] {
                best = i;
            }
        }
        (best, self.next[best])
    }

    /// Consumes the earliest find and re-arms that miner's clock.
    pub fn advance(&mut self) -> (MinerId, SimTime) {
        let (m, t) = self.peek();
        self.next[m] = t + exp_draw(&mut self.rngs[m], self.means[m]);
        (m, t)
    }
}
