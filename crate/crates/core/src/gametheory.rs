//! Two-player honest-vs-greedy transaction-selection game.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Honest,
    Greedy,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Honest, Action::Greedy];

    fn idx(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Action::Honest => "H",
            Action::Greedy => "G",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffLevels {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PayoffLevels {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// `c > a` and `c > b`.
    pub fn meets_baseline(&self) -> bool {
        self.c > self.a && self.c > self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    S1,
    S2,
    S3,
    S4,
    S5,
    Invalid,
}

pub fn classify_scenario(l: &PayoffLevels) -> Scenario {
    let PayoffLevels { a, b, c, d } = *l;
    if d > c && c > a && a > b {
        Scenario::S1
    } else if c > d && d > a && a > b {
        Scenario::S2
    } else if c > a && a > d && d > b {
        Scenario::S3
    } else if c > a && a > b && b > d {
        Scenario::S4
    } else if a == d && c > a && c > b {
        Scenario::S5
    } else {
        Scenario::Invalid
    }
}

/// `payoffs[row][col] = (row player, column player)`, index 0 = honest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BimatrixGame {
    pub payoffs: [[(f64, f64); 2]; 2],
}

pub type Profile = (Action, Action);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedEquilibrium {
    /// Probability the row player plays honest.
    pub p_row: f64,
    /// Probability the column player plays honest.
    pub p_col: f64,
    pub payoff_row: f64,
    pub payoff_col: f64,
}

impl BimatrixGame {
    pub fn from_levels(l: &PayoffLevels) -> Self {
        Self {
            payoffs: [[(l.a, l.a), (l.b, l.c)], [(l.c, l.b), (l.d, l.d)]],
        }
    }

    pub fn payoff(&self, p: Profile) -> (f64, f64) {
        self.payoffs[p.0.idx()][p.1.idx()]
    }

    /// Same game with the players' roles exchanged.
    pub fn transpose(&self) -> Self {
        let mut t = [[(0.0, 0.0); 2]; 2];
        for (i, row) in self.payoffs.iter().enumerate() {
            for (j, &(r, c)) in row.iter().enumerate() {
                t[j][i] = (c, r);
            }
        }
        Self { payoffs: t }
    }

    /// Expected payoffs when each player plays honest with the given probability.
    pub fn expected(&self, p_row: f64, p_col: f64) -> (f64, f64) {
        let pr = [p_row, 1.0 - p_row];
        let pc = [p_col, 1.0 - p_col];
        let mut out = (0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                let w = pr[i] * pc[j];
                out.0 += w * self.payoffs[i][j].0;
                out.1 += w * self.payoffs[i][j].1;
            }
        }
        out
    }

    /// Profiles where no player strictly gains by deviating alone.
    pub fn pure_nash(&self) -> Vec<Profile> {
        let mut out = Vec::new();
        for r in Action::ALL {
            for c in Action::ALL {
                let (ur, uc) = self.payoff((r, c));
                let row_ok = Action::ALL.iter().all(|&r2| self.payoff((r2, c)).0 <= ur);
                let col_ok = Action::ALL.iter().all(|&c2| self.payoff((r, c2)).1 <= uc);
                if row_ok && col_ok {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Fully mixed equilibrium from the indifference conditions, if one
    /// exists strictly inside the unit square.
    pub fn mixed_nash_2x2(&self) -> Option<MixedEquilibrium> {
        let a = |i: usize, j: usize| self.payoffs[i][j].0;
        let b = |i: usize, j: usize| self.payoffs[i][j].1;
        // column's mix q makes the row player indifferent
        let den_q = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
        // row's mix p makes the column player indifferent
        let den_p = b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1);
        if den_q == 0.0 || den_p == 0.0 {
            return None;
        }
        let q = (a(1, 1) - a(0, 1)) / den_q;
        let p = (b(1, 1) - b(1, 0)) / den_p;
        let interior = |x: f64| x > 0.0 && x < 1.0;
        if !(interior(p) && interior(q)) {
            return None;
        }
        let (ur, uc) = self.expected(p, q);
        Some(MixedEquilibrium {
            p_row: p,
            p_col: q,
            payoff_row: ur,
            payoff_col: uc,
        })
    }
}

pub fn pure_nash(g: &BimatrixGame) -> Vec<Profile> {
    g.pure_nash()
}

pub fn mixed_nash_2x2(g: &BimatrixGame) -> Option<MixedEquilibrium> {
    g.mixed_nash_2x2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HonestVerdict {
    /// (H,H) is an equilibrium; only possible outside the baseline constraints.
    EquilibriumOutsideBaseline,
    /// (H,H) is not an equilibrium because greedy is a profitable deviation.
    NotEquilibrium,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("payoff levels {0:?} do not match any scenario")]
pub struct InvalidScenario(pub PayoffLevels);

/// Whether (H,H) is a pure equilibrium of the game built from `levels`.
pub fn honest_is_equilibrium(levels: &PayoffLevels) -> Result<(bool, HonestVerdict), InvalidScenario> {
    let hh = (Action::Honest, Action::Honest);
    let is_eq = BimatrixGame::from_levels(levels).pure_nash().contains(&hh);
    if classify_scenario(levels) == Scenario::Invalid {
        if is_eq {
            return Ok((true, HonestVerdict::EquilibriumOutsideBaseline));
        }
        return Err(InvalidScenario(*levels));
    }
    Ok((
        is_eq,
        if is_eq {
            HonestVerdict::EquilibriumOutsideBaseline
        } else {
            HonestVerdict::NotEquilibrium
        },
    ))
}

/// Discounted payoff of mutual grim-trigger cooperation on (H,H) vs. a
/// one-shot greedy deviation followed by permanent (G,G) punishment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrimTrigger {
    pub cooperate: f64,
    pub deviate: f64,
}

pub fn grim_trigger(levels: &PayoffLevels, delta: f64) -> GrimTrigger {
    assert!((0.0..1.0).contains(&delta), "discount factor must be in [0,1)");
    GrimTrigger {
        cooperate: levels.a / (1.0 - delta),
        deviate: levels.c + delta * levels.d / (1.0 - delta),
    }
}

/// Smallest discount factor at which grim trigger sustains (H,H):
/// `(c - a) / (c - d)`. `None` if punishment does not hurt (`d >= c`).
pub fn grim_trigger_threshold(levels: &PayoffLevels) -> Option<f64> {
    if levels.d >= levels.c {
        return None;
    }
    Some((levels.c - levels.a) / (levels.c - levels.d))
}
