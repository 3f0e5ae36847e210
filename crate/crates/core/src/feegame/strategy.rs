use std::fmt;

use serde::{Deserialize, Serialize};

use super::frsc::PPB;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UndercutStrategy {
    /// Extends the oldest longest-chain tip, claims all available fees.
    DefaultCompliant,
    /// Extends the most valuable longest-chain tip, claims all.
    PettyCompliant,
    /// Undercuts when a half-claim on the parent beats a full claim on the
    /// tip. Either way claims half of what is available.
    LazyFork,
    /// Undercuts when claiming `1 - x` of the parent's fees beats a full
    /// claim on the tip; `x` is stored in parts per billion.
    FunctionFork { leave_ppb: u64 },
}

impl UndercutStrategy {
    pub fn function_fork(x: f64) -> Self {
        UndercutStrategy::FunctionFork {
            leave_ppb: super::frsc::to_ppb(x),
        }
    }

    pub fn is_forking(&self) -> bool {
        matches!(self, UndercutStrategy::LazyFork | UndercutStrategy::FunctionFork { .. })
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for UndercutStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UndercutStrategy::DefaultCompliant => write!(f, "default-compliant"),
            UndercutStrategy::PettyCompliant => write!(f, "petty-compliant"),
            UndercutStrategy::LazyFork => write!(f, "lazy-fork"),
            UndercutStrategy::FunctionFork { leave_ppb } => {
                write!(f, "function-fork({})", *leave_ppb as f64 / PPB as f64)
            }
        }
    }
}

/// Where to mine and how much of the available fees to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MiningAction {
    pub parent: usize,
    pub claim: u64,
    /// True when the block forks off the parent of a longest-chain tip.
    pub undercut: bool,
}

/// What a miner sees about one candidate block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TipInfo {
    pub id: usize,
    /// Fees a child of this block may claim.
    pub available: u64,
    /// Contract payout a child of this block receives.
    pub next_claim: u64,
}

/// Candidate blocks: the longest-chain tips in arrival order, each paired
/// with its parent if it has one.
pub struct View<'a> {
    pub tips: &'a [(TipInfo, Option<TipInfo>)],
    pub m_ppb: u64,
}

fn value(t: &TipInfo, claim: u64, m_ppb: u64) -> u128 {
    t.next_claim as u128 * PPB as u128 + m_ppb as u128 * claim as u128
}

fn fraction(x: u64, keep_ppb: u64) -> u64 {
    (x as u128 * keep_ppb as u128 / PPB as u128) as u64
}

/// Index into `view.tips` of the tip with the highest full-claim value;
/// ties go to the earliest.
fn richest(view: &View) -> usize {
    let mut best = 0;
    let mut best_v = 0u128;
    for (i, (t, _)) in view.tips.iter().enumerate() {
        let v = value(t, t.available, view.m_ppb);
        if i == 0 || v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

pub fn strategy_decide(strategy: &UndercutStrategy, view: &View) -> MiningAction {
    assert!(!view.tips.is_empty(), "no tip to mine on");
    let m = view.m_ppb;
    match *strategy {
        UndercutStrategy::DefaultCompliant => {
            let t = view.tips[0].0;
            MiningAction {
                parent: t.id,
                claim: t.available,
                undercut: false,
            }
        }
        UndercutStrategy::PettyCompliant => {
            let t = view.tips[richest(view)].0;
            MiningAction {
                parent: t.id,
                claim: t.available,
                undercut: false,
            }
        }
        UndercutStrategy::LazyFork => {
            let (t, p) = view.tips[richest(view)];
            if let Some(p) = p {
                let half = p.available / 2;
                if value(&p, half, m) > value(&t, t.available, m) {
                    return MiningAction {
                        parent: p.id,
                        claim: half,
                        undercut: true,
                    };
                }
            }
            MiningAction {
                parent: t.id,
                claim: t.available / 2,
                undercut: false,
            }
        }
        UndercutStrategy::FunctionFork { leave_ppb } => {
            let (t, p) = view.tips[richest(view)];
            if let Some(p) = p {
                let c = fraction(p.available, PPB - leave_ppb);
                if value(&p, c, m) > value(&t, t.available, m) {
                    return MiningAction {
                        parent: p.id,
                        claim: c,
                        undercut: true,
                    };
                }
            }
            MiningAction {
                parent: t.id,
                claim: t.available,
                undercut: false,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tip(id: usize, available: u64) -> TipInfo {
        TipInfo {
            id,
            available,
            next_claim: 0,
        }
    }

    #[test]
    fn function_fork_undercuts_fresh_tip() {
        let f = 1_000;
        let tips = [(tip(1, 0), Some(tip(0, f)))];
        let v = View { tips: &tips, m_ppb: PPB };
        let a = strategy_decide(&UndercutStrategy::function_fork(0.5), &v);
        assert_eq!(a, MiningAction { parent: 0, claim: f / 2, undercut: true });
    }

    #[test]
    fn petty_takes_richer_tip() {
        let tips = [(tip(1, 10), Some(tip(0, 50))), (tip(2, 40), Some(tip(0, 50)))];
        let v = View { tips: &tips, m_ppb: PPB };
        assert_eq!(strategy_decide(&UndercutStrategy::PettyCompliant, &v).parent, 2);
        let dc = strategy_decide(&UndercutStrategy::DefaultCompliant, &v);
        assert_eq!((dc.parent, dc.undercut), (1, false));
    }

    #[test]
    fn lazy_fork_leaves_half() {
        // tip took everything: undercut with half
        let tips = [(tip(1, 0), Some(tip(0, 100)))];
        let v = View { tips: &tips, m_ppb: PPB };
        let a = strategy_decide(&UndercutStrategy::LazyFork, &v);
        assert_eq!(a, MiningAction { parent: 0, claim: 50, undercut: true });
        // tip left half: extending is at least as good
        let tips = [(tip(1, 50), Some(tip(0, 100)))];
        let v = View { tips: &tips, m_ppb: PPB };
        let a = strategy_decide(&UndercutStrategy::LazyFork, &v);
        assert_eq!(a, MiningAction { parent: 1, claim: 25, undercut: false });
    }

    #[test]
    fn contract_payout_dominates_when_fee_share_is_small() {
        // the parent pays less from the contracts than the tip does
        let t = TipInfo { id: 1, available: 0, next_claim: 1_000 };
        let p = TipInfo { id: 0, available: 1_000, next_claim: 900 };
        let tips = [(t, Some(p))];
        let v = View { tips: &tips, m_ppb: PPB / 10 };
        let a = strategy_decide(&UndercutStrategy::function_fork(0.5), &v);
        assert!(!a.undercut);
    }
}
