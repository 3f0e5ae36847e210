use rand::Rng;

/// Exp3 adversarial bandit with rewards in `[0, 1]`.
///
/// Arm probabilities mix the normalised weights with a uniform floor:
/// `p_i = (1 - gamma) * w_i / sum(w) + gamma / K`.
#[derive(Clone, Debug)]
pub struct Exp3 {
    weights: Vec<f64>,
    gamma: f64,
}

impl Exp3 {
    pub fn new(arms: usize, gamma: f64) -> Self {
        assert!(arms > 0, "exp3 needs at least one arm");
        assert!(gamma > 0.0 && gamma <= 1.0, "exp3 gamma must be in (0, 1]");
        Self {
            weights: vec![1.0; arms],
            gamma,
        }
    }

    pub fn arms(&self) -> usize {
        self.weights.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let k = self.weights.len() as f64;
        let sum: f64 = self.weights.iter().sum();
        self.weights
            .iter()
            .map(|w| (1.0 - self.gamma) * w / sum + self.gamma / k)
            .collect()
    }

    pub fn choose(&self, rng: &mut impl Rng) -> usize {
        let p = self.probabilities();
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, pi) in p.iter().enumerate() {
            acc += pi;
            if u < acc {
                return i;
            }
        }
        p.len() - 1
    }

    /// Importance-weighted update for the arm that was played.
    pub fn update(&mut self, arm: usize, reward: f64) {
        let reward = reward.clamp(0.0, 1.0);
        let p = self.probabilities()[arm];
        let k = self.weights.len() as f64;
        self.weights[arm] *= (self.gamma * reward / (p * k)).exp();
        let max = self.weights.iter().cloned().fold(f64::MIN, f64::max);
        for w in &mut self.weights {
            *w /= max;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SimRng;
    use proptest::prelude::*;

    #[test]
    fn learns_the_better_arm() {
        let mut e = Exp3::new(3, 0.05);
        let mut rng = SimRng::new(1, "exp3");
        for _ in 0..5000 {
            let a = e.choose(&mut rng);
            e.update(a, if a == 2 { 0.9 } else { 0.2 });
        }
        let p = e.probabilities();
        assert!(p[2] > 0.9, "{p:?}");
    }

    proptest! {
        #[test]
        fn stays_a_distribution(
            updates in proptest::collection::vec((0usize..5, 0.0f64..=1.0), 0..400),
            gamma in 0.01f64..0.5,
        ) {
            let mut e = Exp3::new(5, gamma);
            for (a, r) in updates {
                e.update(a, r);
                let p = e.probabilities();
                let s: f64 = p.iter().sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
                prop_assert!(p.iter().all(|&x| x >= gamma / 5.0 - 1e-12));
            }
        }
    }
}
