//! Scenario configuration files.
//!
//! A config is a TOML document. Top-level keys are `kind`, `seed`, `runs`
//! and `output_dir`; each scenario kind reads its own table (`[strongchain]`,
//! `[dag]`, `[feegame]`, `[gametheory]`). Every key is optional. Unknown keys
//! are rejected before anything runs.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use powlab_core::dag::DagConfig;
use powlab_core::feegame::GameConfig;
use powlab_core::gametheory::PayoffLevels;
use powlab_core::strongchain::{MinerStrategy, StrongchainParams};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Strongchain,
    Dag,
    Feegame,
    Gametheory,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Strongchain => "strongchain",
            Kind::Dag => "dag",
            Kind::Feegame => "feegame",
            Kind::Gametheory => "gametheory",
        }
    }

    fn default_runs(self) -> usize {
        match self {
            Kind::Strongchain => 20,
            Kind::Dag => 10,
            Kind::Feegame | Kind::Gametheory => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: Option<Kind>,
    pub seed: u64,
    pub runs: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub strongchain: StrongchainSection,
    pub dag: DagSection,
    pub feegame: FeegameSection,
    pub gametheory: GametheorySection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            kind: None,
            seed: 1,
            runs: None,
            output_dir: None,
            strongchain: StrongchainSection::default(),
            dag: DagSection::default(),
            feegame: FeegameSection::default(),
            gametheory: GametheorySection::default(),
        }
    }
}

fn percent_grid(lo: u32, hi: u32, step: u32) -> Vec<f64> {
    (lo..=hi).step_by(step as usize).map(|x| x as f64 / 100.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrongchainSection {
    pub strategies: Vec<MinerStrategy>,
    /// `T_w / T_s` values; 1 is plain Bitcoin.
    pub ratios: Vec<f64>,
    pub alphas: Vec<f64>,
    pub blocks: usize,
    /// One-way link latency in seconds.
    pub latency: f64,
    /// Weak-header reward weight; `log2(ratio)` when unset.
    pub gamma: Option<f64>,
    pub variance: Option<VarianceSection>,
}

impl Default for StrongchainSection {
    fn default() -> Self {
        Self {
            strategies: vec![MinerStrategy::Selfish],
            ratios: vec![1.0, 1024.0],
            alphas: percent_grid(5, 45, 5),
            blocks: 10_000,
            latency: 0.53,
            gamma: None,
            variance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VarianceSection {
    pub alpha: f64,
    pub ratios: Vec<f64>,
    pub gamma: f64,
    pub horizon: usize,
    pub tolerance: f64,
}

impl Default for VarianceSection {
    fn default() -> Self {
        Self {
            alpha: 0.00245,
            ratios: vec![4.0, 16.0, 64.0, 1024.0],
            gamma: 10.0,
            horizon: 2_000_000,
            tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DagExperiment {
    /// One greedy miner against one honest miner.
    Duel,
    /// Greedy and honest pools of equal size among small honest miners.
    Pools,
    /// Ten equal miners, `n_greedy` of them greedy; reports profit factors.
    Uniform,
    /// Ten equal miners; reports collision rate and throughput.
    Collision,
}

impl DagExperiment {
    pub fn label(self) -> &'static str {
        match self {
            DagExperiment::Duel => "duel",
            DagExperiment::Pools => "pools",
            DagExperiment::Uniform => "uniform",
            DagExperiment::Collision => "collision",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DagSection {
    pub experiment: DagExperiment,
    pub alphas: Vec<f64>,
    pub n_greedy: Vec<usize>,
    /// Block times swept by the collision experiment.
    pub lambdas: Vec<f64>,
    /// Expected blocks per run; duration is `blocks * block_time`.
    pub blocks: usize,
    pub nodes: usize,
    /// Seconds per ring hop.
    pub delay: f64,
    #[serde(flatten)]
    pub params: DagConfig,
}

impl Default for DagSection {
    fn default() -> Self {
        Self {
            experiment: DagExperiment::Duel,
            alphas: percent_grid(10, 90, 10),
            n_greedy: vec![0, 2, 4, 6, 8, 10],
            lambdas: vec![10.0, 20.0, 60.0],
            blocks: 3_000,
            nodes: 10,
            delay: 1.0,
            params: DagConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeegameSection {
    /// When set, searches this ascending grid for the smallest qualifying
    /// default-compliant fraction instead of running `dc_fraction` alone.
    pub dc_grid: Option<Vec<f64>>,
    /// Every n-th game is written to `fee_game.csv`.
    pub csv_every: usize,
    #[serde(flatten)]
    pub game: GameConfig,
}

impl Default for FeegameSection {
    fn default() -> Self {
        Self {
            dc_grid: None,
            csv_every: 100,
            game: GameConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GametheorySection {
    /// Payoff levels `[a, b, c, d]`, one game per entry.
    pub levels: Vec<[f64; 4]>,
    /// Discount factor for the grim-trigger comparison.
    pub delta: Option<f64>,
}

impl Default for GametheorySection {
    fn default() -> Self {
        Self {
            levels: vec![[2.0, 1.0, 3.0, 0.0], [2.0, 0.0, 3.0, 1.0], [1.0, 0.0, 2.0, 1.0]],
            delta: None,
        }
    }
}

impl GametheorySection {
    pub fn payoff_levels(&self) -> Vec<PayoffLevels> {
        self.levels.iter().map(|l| PayoffLevels::new(l[0], l[1], l[2], l[3])).collect()
    }
}

// ------------------------------------------------------------------ keys

enum Key {
    Leaf,
    Table(&'static [(&'static str, Key)]),
    TableArray(&'static [(&'static str, Key)]),
}

const VARIANCE: &[(&str, Key)] = &[
    ("alpha", Key::Leaf),
    ("ratios", Key::Leaf),
    ("gamma", Key::Leaf),
    ("horizon", Key::Leaf),
    ("tolerance", Key::Leaf),
];

const STRONGCHAIN: &[(&str, Key)] = &[
    ("strategies", Key::Leaf),
    ("ratios", Key::Leaf),
    ("alphas", Key::Leaf),
    ("blocks", Key::Leaf),
    ("latency", Key::Leaf),
    ("gamma", Key::Leaf),
    ("variance", Key::Table(VARIANCE)),
];

const FEE_DISTRIBUTION: &[(&str, Key)] = &[("kind", Key::Leaf), ("mean", Key::Leaf), ("value", Key::Leaf)];

const DAG: &[(&str, Key)] = &[
    ("experiment", Key::Leaf),
    ("alphas", Key::Leaf),
    ("n_greedy", Key::Leaf),
    ("lambdas", Key::Leaf),
    ("blocks", Key::Leaf),
    ("nodes", Key::Leaf),
    ("delay", Key::Leaf),
    ("block_time", Key::Leaf),
    ("block_capacity", Key::Leaf),
    ("mempool_capacity", Key::Leaf),
    ("refill_period", Key::Leaf),
    ("refill_count", Key::Leaf),
    ("fee_distribution", Key::Table(FEE_DISTRIBUTION)),
    ("discount", Key::Leaf),
];

const FRSCS: &[(&str, Key)] = &[("lambda", Key::Leaf), ("rho", Key::Leaf)];

const FEEGAME: &[(&str, Key)] = &[
    ("dc_grid", Key::Leaf),
    ("csv_every", Key::Leaf),
    ("n_miners", Key::Leaf),
    ("blocks_per_game", Key::Leaf),
    ("n_games", Key::Leaf),
    ("fee_inflow", Key::Leaf),
    ("block_time", Key::Leaf),
    ("full_mempool", Key::Leaf),
    ("cdep", Key::Leaf),
    ("frscs", Key::TableArray(FRSCS)),
    ("mean_fees", Key::Leaf),
    ("dc_fraction", Key::Leaf),
    ("orphan_compensation", Key::Leaf),
    ("exp3_gamma", Key::Leaf),
    ("function_fork_x", Key::Leaf),
    ("final_window", Key::Leaf),
    ("bootstrap_resamples", Key::Leaf),
];

const GAMETHEORY: &[(&str, Key)] = &[("levels", Key::Leaf), ("delta", Key::Leaf)];

const TOP: &[(&str, Key)] = &[
    ("kind", Key::Leaf),
    ("seed", Key::Leaf),
    ("runs", Key::Leaf),
    ("output_dir", Key::Leaf),
    ("strongchain", Key::Table(STRONGCHAIN)),
    ("dag", Key::Table(DAG)),
    ("feegame", Key::Table(FEEGAME)),
    ("gametheory", Key::Table(GAMETHEORY)),
];

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn suggest(key: &str, known: &[(&str, Key)]) -> Option<String> {
    known
        .iter()
        .map(|(k, _)| (strsim::normalized_damerau_levenshtein(key, k), *k))
        .filter(|(score, _)| *score >= 0.6)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, k)| k.to_string())
}

fn check_keys(table: &toml::Table, known: &[(&str, Key)], prefix: &str) -> Result<(), CliError> {
    for (k, v) in table {
        let path = join(prefix, k);
        let Some((_, schema)) = known.iter().find(|(name, _)| name == k) else {
            return Err(CliError::UnknownKey {
                suggestion: suggest(k, known).map(|s| join(prefix, &s)),
                path,
            });
        };
        match (schema, v) {
            (Key::Table(sub), toml::Value::Table(t)) => check_keys(t, sub, &path)?,
            (Key::TableArray(sub), toml::Value::Array(items)) => {
                for (i, item) in items.iter().enumerate() {
                    if let toml::Value::Table(t) = item {
                        check_keys(t, sub, &format!("{path}[{i}]"))?;
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ load

/// Parses a config document and rejects unknown keys. No range checks.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    check_keys(&table, TOP, "")?;
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))
}

/// Reads, parses and validates the config at `path` for scenario `kind`.
pub fn load_config(path: &Path, kind: Kind) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = parse_config(&text)?;
    cfg.validate(kind)?;
    Ok(cfg)
}

fn all_in(xs: &[f64], lo: f64, hi: f64) -> Option<f64> {
    xs.iter().copied().find(|x| !(*x > lo && *x < hi))
}

impl ScenarioConfig {
    pub fn runs(&self, kind: Kind) -> usize {
        self.runs.unwrap_or(kind.default_runs())
    }

    pub fn validate(&self, kind: Kind) -> Result<(), CliError> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(CliError::invalid(
                    "kind",
                    format!("config is for `{}` but `{}` was requested", k.label(), kind.label()),
                ));
            }
        }
        if self.runs == Some(0) {
            return Err(CliError::invalid("runs", "must be at least 1"));
        }
        match kind {
            Kind::Strongchain => self.validate_strongchain(),
            Kind::Dag => self.validate_dag(),
            Kind::Feegame => self.validate_feegame(),
            Kind::Gametheory => self.validate_gametheory(),
        }
    }

    fn validate_strongchain(&self) -> Result<(), CliError> {
        let s = &self.strongchain;
        let p = "strongchain";
        if s.strategies.is_empty() {
            return Err(CliError::invalid(format!("{p}.strategies"), "must not be empty"));
        }
        if s.alphas.is_empty() {
            return Err(CliError::invalid(format!("{p}.alphas"), "must not be empty"));
        }
        if let Some(a) = all_in(&s.alphas, 0.0, 1.0) {
            return Err(CliError::invalid(format!("{p}.alphas"), format!("values must be in (0, 1), got {a}")));
        }
        if s.blocks == 0 {
            return Err(CliError::invalid(format!("{p}.blocks"), "must be positive"));
        }
        if !(s.latency >= 0.0 && s.latency.is_finite()) {
            return Err(CliError::invalid(format!("{p}.latency"), "must be non-negative"));
        }
        if s.ratios.is_empty() {
            return Err(CliError::invalid(format!("{p}.ratios"), "must not be empty"));
        }
        for &r in &s.ratios {
            self.strongchain_params(r).map_err(|e| match e {
                CliError::Validation { reason, .. } if s.gamma.is_some() && r > 1.0 => {
                    CliError::invalid(format!("{p}.gamma"), reason)
                }
                other => other,
            })?;
        }
        if let Some(v) = &s.variance {
            let q = "strongchain.variance";
            if !(v.alpha > 0.0 && v.alpha <= 1.0) {
                return Err(CliError::invalid(format!("{q}.alpha"), format!("must be in (0, 1], got {}", v.alpha)));
            }
            if v.horizon < 100 {
                return Err(CliError::invalid(format!("{q}.horizon"), "must be at least 100"));
            }
            if !(v.tolerance > 0.0 && v.tolerance < 1.0) {
                return Err(CliError::invalid(format!("{q}.tolerance"), "must be in (0, 1)"));
            }
            for &r in &v.ratios {
                let params = StrongchainParams::with_ratio(r)
                    .map(|p| p.gamma(v.gamma))
                    .map_err(|e| CliError::invalid(format!("{q}.ratios"), e.to_string()))?;
                params
                    .validate()
                    .map_err(|e| CliError::invalid(format!("{q}.gamma"), e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Protocol parameters for one ratio of the payoff sweep.
    pub fn strongchain_params(&self, ratio: f64) -> Result<StrongchainParams, CliError> {
        let mut p = StrongchainParams::with_ratio(ratio)
            .map_err(|e| CliError::invalid("strongchain.ratios", format!("{ratio}: {e}")))?;
        if let Some(g) = self.strongchain.gamma {
            p = p.gamma(g);
            p.validate()
                .map_err(|e| CliError::invalid("strongchain.gamma", e.to_string()))?;
        }
        Ok(p)
    }

    fn validate_dag(&self) -> Result<(), CliError> {
        let d = &self.dag;
        let p = "dag";
        d.params.validate().map_err(|e| match e {
            powlab_core::dag::DagError::Invalid { field, reason } => CliError::invalid(format!("{p}.{field}"), reason),
            other => CliError::invalid(p, other.to_string()),
        })?;
        if d.blocks == 0 {
            return Err(CliError::invalid(format!("{p}.blocks"), "must be positive"));
        }
        if d.nodes < 2 {
            return Err(CliError::invalid(format!("{p}.nodes"), "need at least 2 nodes"));
        }
        if !(d.delay >= 0.0 && d.delay.is_finite()) {
            return Err(CliError::invalid(format!("{p}.delay"), "must be non-negative"));
        }
        match d.experiment {
            DagExperiment::Duel | DagExperiment::Pools => {
                let hi = if d.experiment == DagExperiment::Pools { 0.5 } else { 1.0 };
                if d.alphas.is_empty() {
                    return Err(CliError::invalid(format!("{p}.alphas"), "must not be empty"));
                }
                if let Some(a) = all_in(&d.alphas, 0.0, hi) {
                    return Err(CliError::invalid(format!("{p}.alphas"), format!("values must be in (0, {hi}), got {a}")));
                }
                let need = if d.experiment == DagExperiment::Pools { 10 } else { 6 };
                if d.nodes < need {
                    return Err(CliError::invalid(
                        format!("{p}.nodes"),
                        format!("the {} experiment needs at least {need} nodes", d.experiment.label()),
                    ));
                }
            }
            DagExperiment::Uniform | DagExperiment::Collision => {
                if d.n_greedy.is_empty() {
                    return Err(CliError::invalid(format!("{p}.n_greedy"), "must not be empty"));
                }
                if let Some(n) = d.n_greedy.iter().find(|&&n| n > d.nodes) {
                    return Err(CliError::invalid(
                        format!("{p}.n_greedy"),
                        format!("{n} exceeds the {} miners", d.nodes),
                    ));
                }
                if d.experiment == DagExperiment::Collision {
                    if d.lambdas.is_empty() {
                        return Err(CliError::invalid(format!("{p}.lambdas"), "must not be empty"));
                    }
                    if let Some(l) = d.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
                        return Err(CliError::invalid(format!("{p}.lambdas"), format!("must be positive, got {l}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_feegame(&self) -> Result<(), CliError> {
        let f = &self.feegame;
        f.game
            .validate()
            .map_err(|e| CliError::invalid(format!("feegame.{}", e.field()), e.to_string()))?;
        if f.csv_every == 0 {
            return Err(CliError::invalid("feegame.csv_every", "must be positive"));
        }
        if let Some(g) = &f.dc_grid {
            if g.is_empty() {
                return Err(CliError::invalid("feegame.dc_grid", "must not be empty"));
            }
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::invalid("feegame.dc_grid", "must be strictly ascending"));
            }
            if let Some(x) = g.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(CliError::invalid("feegame.dc_grid", format!("values must be in [0, 1], got {x}")));
            }
        }
        Ok(())
    }

    fn validate_gametheory(&self) -> Result<(), CliError> {
        let g = &self.gametheory;
        if g.levels.is_empty() {
            return Err(CliError::invalid("gametheory.levels", "must not be empty"));
        }
        if let Some(l) = g.levels.iter().find(|l| l.iter().any(|x| !x.is_finite())) {
            return Err(CliError::invalid("gametheory.levels", format!("non-finite level in {l:?}")));
        }
        if let Some(d) = g.delta {
            if !(0.0..1.0).contains(&d) {
                return Err(CliError::invalid("gametheory.delta", format!("must be in [0, 1), got {d}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys_of(v: &toml::Value, known: &[(&str, Key)], prefix: &str) -> Vec<String> {
        let mut missing = Vec::new();
        if let toml::Value::Table(t) = v {
            for (k, val) in t {
                match known.iter().find(|(n, _)| n == k) {
                    None => missing.push(join(prefix, k)),
                    Some((_, Key::Table(sub))) => missing.extend(keys_of(val, sub, &join(prefix, k))),
                    Some((_, Key::TableArray(sub))) => {
                        if let toml::Value::Array(items) = val {
                            for item in items {
                                missing.extend(keys_of(item, sub, &join(prefix, k)));
                            }
                        }
                    }
                    Some((_, Key::Leaf)) => {}
                }
            }
        }
        missing
    }

    #[test]
    fn key_table_covers_every_serialized_field() {
        let mut cfg = ScenarioConfig::default();
        cfg.strongchain.variance = Some(VarianceSection::default());
        cfg.strongchain.gamma = Some(3.0);
        cfg.runs = Some(2);
        cfg.kind = Some(Kind::Dag);
        cfg.output_dir = Some("x".into());
        cfg.feegame.dc_grid = Some(vec![0.5]);
        cfg.dag.params.refill_count = Some(5);
        cfg.gametheory.delta = Some(0.5);
        let v = toml::Value::try_from(&cfg).unwrap();
        assert_eq!(keys_of(&v, TOP, ""), Vec::<String>::new());
    }

    #[test]
    fn default_round_trips() {
        let cfg = ScenarioConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    #[test]
    fn empty_dag_section_gets_defaults() {
        let cfg = parse_config("[dag]\n").unwrap();
        assert_eq!(cfg.dag.params.block_capacity, 100);
        assert_eq!(cfg.dag.params.mempool_capacity, 10_000);
        assert_eq!(cfg.dag.params.block_time, 20.0);
        cfg.validate(Kind::Dag).unwrap();
    }

    #[test]
    fn misspelled_key_gets_suggestion() {
        let err = parse_config("[feegame]\nblok_time = 600\n").unwrap_err();
        match &err {
            CliError::UnknownKey { path, suggestion } => {
                assert_eq!(path, "feegame.blok_time");
                assert_eq!(suggestion.as_deref(), Some("feegame.block_time"));
            }
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("did you mean `feegame.block_time`"));
    }

    #[test]
    fn unknown_key_inside_table_array() {
        let err = parse_config("[[feegame.frscs]]\nlambda = 10\nrhoo = 1.0\n").unwrap_err();
        assert!(
            matches!(&err, CliError::UnknownKey { path, suggestion: Some(s) } if path == "feegame.frscs[0].rhoo" && s == "feegame.frscs[0].rho"),
            "{err:?}"
        );
    }

    #[test]
    fn unrelated_key_has_no_suggestion() {
        let err = parse_config("zzzzzz = 1\n").unwrap_err();
        assert!(matches!(err, CliError::UnknownKey { suggestion: None, .. }));
    }

    #[test]
    fn ratio_sum_names_rho() {
        let cfg = parse_config("[feegame]\ncdep = 0.7\n[[feegame.frscs]]\nlambda = 2016\nrho = 0.9\n").unwrap();
        let err = cfg.validate(Kind::Feegame).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(matches!(&err, CliError::Validation { path, .. } if path == "feegame.frscs.rho"), "{err:?}");
    }

    #[test]
    fn syntax_and_type_errors_are_parse_errors() {
        assert_eq!(parse_config("seed = = 1").unwrap_err().exit_code(), 2);
        assert_eq!(parse_config("seed = \"one\"").unwrap_err().exit_code(), 2);
        assert_eq!(parse_config("[dag]\nexperiment = \"nope\"").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let cfg = parse_config("kind = \"dag\"").unwrap();
        assert!(cfg.validate(Kind::Dag).is_ok());
        assert_eq!(cfg.validate(Kind::Feegame).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn range_checks_carry_paths() {
        let cases = [
            ("[strongchain]\nalphas = [0.0]", Kind::Strongchain, "strongchain.alphas"),
            ("[strongchain]\nratios = [0.5]", Kind::Strongchain, "strongchain.ratios"),
            ("[dag]\nblock_capacity = 0", Kind::Dag, "dag.block_capacity"),
            ("[dag]\nfee_distribution = { kind = \"exponential\", mean = -1.0 }", Kind::Dag, "dag.fee_distribution.mean"),
            ("[dag]\nexperiment = \"collision\"\nn_greedy = [11]", Kind::Dag, "dag.n_greedy"),
            ("[feegame]\ndc_fraction = 1.5", Kind::Feegame, "feegame.dc_fraction"),
            ("[feegame]\ndc_grid = [0.5, 0.4]", Kind::Feegame, "feegame.dc_grid"),
            ("[gametheory]\ndelta = 1.0", Kind::Gametheory, "gametheory.delta"),
            ("runs = 0", Kind::Gametheory, "runs"),
        ];
        for (text, kind, want) in cases {
            let err = parse_config(text).unwrap().validate(kind).unwrap_err();
            assert!(matches!(&err, CliError::Validation { path, .. } if path == want), "{text}: {err:?}");
        }
    }
}
