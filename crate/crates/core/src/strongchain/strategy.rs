use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinerStrategy {
    Honest,
    /// Withholds blocks and publishes to override the public chain.
    Selfish,
    /// Honest, but never broadcasts its own weak headers.
    Reclusive,
    /// Honest, but leaves out other miners' weak headers unless they add
    /// more than one block's worth of work.
    Spiteful,
}

impl MinerStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            MinerStrategy::Honest => "honest",
            MinerStrategy::Selfish => "selfish",
            MinerStrategy::Reclusive => "reclusive",
            MinerStrategy::Spiteful => "spiteful",
        }
    }
}

/// Protocol event seen by a miner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observation {
    FoundBlock,
    FoundWeak,
    ReceivedBlock,
    ReceivedWeak,
    /// About to assemble a block; `foreign_weak` other miners' weak headers
    /// point at the parent.
    AssembleBlock { foreign_weak: u64 },
}

/// Miner state relevant to its decision, in work units where a weak header
/// is 1 and a strong block is `block_work`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyContext {
    /// Blocks mined but not yet published.
    pub unpublished: u32,
    /// Private chain work minus best public chain work. Pending weak headers
    /// count only when the two tips share a parent.
    pub lead: i64,
    /// Work of one strong block; the reward-equivalent `R` of the rules.
    pub block_work: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    PublishBlock,
    WithholdBlock,
    /// Release every unpublished block and the weak headers on its tip.
    PublishPrivateChain,
    BroadcastWeak,
    WithholdWeak,
    /// Drop the private chain and mine on the best public tip.
    AdoptPublic,
    AddPendingWeak,
    IncludeForeignWeak,
    ExcludeForeignWeak,
}

fn selfish_reaction(ctx: &StrategyContext) -> Option<Action> {
    let r = ctx.block_work;
    if ctx.lead <= -r {
        Some(Action::AdoptPublic)
    } else if ctx.unpublished >= 2 && ctx.lead > 0 && ctx.lead <= r {
        Some(Action::PublishPrivateChain)
    } else {
        None
    }
}

/// Decision rule of each strategy. `ctx` reflects the state after the
/// observation has been applied (a found block is already counted in
/// `unpublished` and `lead`).
pub fn strategy_step(strategy: MinerStrategy, obs: Observation, ctx: &StrategyContext) -> Vec<Action> {
    use Action::*;
    use MinerStrategy::*;
    match (strategy, obs) {
        (Selfish, Observation::FoundBlock) => {
            let mut v = vec![WithholdBlock];
            v.extend(selfish_reaction(ctx));
            v
        }
        (_, Observation::FoundBlock) => vec![PublishBlock],

        (Reclusive, Observation::FoundWeak) => vec![WithholdWeak],
        (Selfish, Observation::FoundWeak) if ctx.unpublished > 0 => vec![WithholdWeak],
        (_, Observation::FoundWeak) => vec![BroadcastWeak],

        (Selfish, Observation::ReceivedBlock) => selfish_reaction(ctx).into_iter().collect(),
        (_, Observation::ReceivedBlock) => vec![],

        (Selfish, Observation::ReceivedWeak) => {
            let mut v = vec![AddPendingWeak];
            v.extend(selfish_reaction(ctx));
            v
        }
        (_, Observation::ReceivedWeak) => vec![AddPendingWeak],

        (Spiteful, Observation::AssembleBlock { foreign_weak }) => {
            if foreign_weak as i64 > ctx.block_work {
                vec![IncludeForeignWeak]
            } else {
                vec![ExcludeForeignWeak]
            }
        }
        (_, Observation::AssembleBlock { .. }) => vec![IncludeForeignWeak],
    }
}
