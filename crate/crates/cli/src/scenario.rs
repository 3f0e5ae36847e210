//! Runs one configured scenario and writes its artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use powlab_core::dag::{
    duel_miners, mean_profit_factor, pool_duel_miners, run_dag_experiment, uniform_miners, DagConfig, DagMinerSpec,
    ExperimentResult, Selection,
};
use powlab_core::feegame::{find_dc_threshold, run_fee_game, GameConfig, GameResult};
use powlab_core::gametheory::{
    classify_scenario, grim_trigger, grim_trigger_threshold, honest_is_equilibrium, BimatrixGame, HonestVerdict,
    Scenario,
};
use powlab_core::report::{self, DagCollisionRow, DagProfitRow, StrongchainPayoffRow};
use powlab_core::sim::{SimRng, Topology};
use powlab_core::strongchain::{equivalent_pool_size, first_crossover, payoff_sweep, RaceConfig};

use crate::config::{DagExperiment, Kind, ScenarioConfig};
use crate::error::CliError;
use crate::svg::{line_chart, Series};

pub const STRONGCHAIN_RUNS: &str = "strongchain_runs/v1";
pub const POOL_EQUIVALENCE: &str = "pool_equivalence/v1";
pub const GAME_THEORY: &str = "game_theory/v1";

/// Options that come from the command line rather than the config file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub paper_scale: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl Metric {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n.max(1) as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self { mean, std: var.sqrt(), n }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub kind: Kind,
    pub seed: u64,
    pub runs: usize,
    pub config: ScenarioConfig,
    pub metrics: BTreeMap<String, Metric>,
    /// Scenario-specific results such as crossovers or thresholds.
    pub results: serde_json::Value,
    pub files: Vec<String>,
    pub wall_time_s: f64,
}

struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn csv<R: Serialize>(&mut self, name: &str, schema: &str, cols: &[&str], rows: &[R]) -> Result<(), CliError> {
        let mut buf = Vec::new();
        report::write_csv_or_header(&mut buf, schema, cols, rows)?;
        self.write(name, &buf)
    }
}

fn invariant(e: impl std::fmt::Display) -> CliError {
    CliError::Invariant(e.to_string())
}

/// Runs `kind` as configured and writes CSVs plus `summary.json`.
pub fn run_scenario(kind: Kind, cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Summary, CliError> {
    let start = Instant::now();
    let mut cfg = cfg.clone();
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if opts.paper_scale && kind == Kind::Feegame {
        let p = GameConfig::paper_scale();
        let g = &mut cfg.feegame.game;
        g.n_miners = p.n_miners;
        g.blocks_per_game = p.blocks_per_game;
        g.n_games = p.n_games;
    }
    cfg.validate(kind)?;
    let dir = opts
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut art = Artifacts::new(&dir)?;
    let mut metrics = BTreeMap::new();
    let results = match kind {
        Kind::Strongchain => strongchain(&cfg, opts, &mut art, &mut metrics)?,
        Kind::Dag => dag(&cfg, opts, &mut art, &mut metrics)?,
        Kind::Feegame => feegame(&cfg, opts, &mut art, &mut metrics)?,
        Kind::Gametheory => gametheory(&cfg, &mut art)?,
    };
    let mut summary = Summary {
        kind,
        seed: cfg.seed,
        runs: cfg.runs(kind),
        config: cfg,
        metrics,
        results,
        files: Vec::new(),
        wall_time_s: 0.0,
    };
    summary.files = art.files.clone();
    summary.files.push("summary.json".into());
    summary.wall_time_s = start.elapsed().as_secs_f64();
    let json = serde_json::to_vec_pretty(&summary).map_err(|e| CliError::Output(e.to_string()))?;
    art.write("summary.json", &json)?;
    Ok(summary)
}

// ------------------------------------------------------------ strongchain

#[derive(Serialize)]
struct RunRow {
    strategy: String,
    alpha: f64,
    ratio: f64,
    run: usize,
    relative_payoff: f64,
}

#[derive(Serialize)]
struct PoolRow {
    ratio: f64,
    alpha: f64,
    bitcoin_equivalent: f64,
    reduction: f64,
}

fn strongchain(
    cfg: &ScenarioConfig,
    opts: &RunOptions,
    art: &mut Artifacts,
    metrics: &mut BTreeMap<String, Metric>,
) -> Result<serde_json::Value, CliError> {
    let s = &cfg.strongchain;
    let runs = cfg.runs(Kind::Strongchain);
    let mut points = Vec::new();
    let mut crossovers = BTreeMap::new();
    for &strategy in &s.strategies {
        for &ratio in &s.ratios {
            let tpl = RaceConfig {
                alpha: s.alphas[0],
                strategy,
                params: cfg.strongchain_params(ratio)?,
                latency: s.latency,
                blocks: s.blocks,
            };
            let pts = payoff_sweep(&tpl, &s.alphas, runs, cfg.seed).map_err(invariant)?;
            crossovers.insert(format!("{}/{ratio}", strategy.label()), first_crossover(&pts));
            points.extend(pts);
        }
    }
    let rows: Vec<StrongchainPayoffRow> = points.iter().map(Into::into).collect();
    art.csv(
        "strongchain_payoff.csv",
        report::STRONGCHAIN_PAYOFF,
        &["strategy", "alpha", "ratio", "gamma", "runs", "mean_relative_payoff", "std"],
        &rows,
    )?;
    let run_rows: Vec<RunRow> = points
        .iter()
        .flat_map(|p| {
            p.per_run.iter().enumerate().map(move |(run, &x)| RunRow {
                strategy: p.strategy.label().into(),
                alpha: p.alpha,
                ratio: p.ratio,
                run,
                relative_payoff: x,
            })
        })
        .collect();
    art.csv(
        "strongchain_runs.csv",
        STRONGCHAIN_RUNS,
        &["strategy", "alpha", "ratio", "run", "relative_payoff"],
        &run_rows,
    )?;
    for p in &points {
        metrics.insert(
            format!("relative_payoff/{}/{}/{:.4}", p.strategy.label(), p.ratio, p.alpha),
            Metric::of(&p.per_run),
        );
    }
    if opts.svg {
        let mut series: Vec<Series> = Vec::new();
        for &strategy in &s.strategies {
            for &ratio in &s.ratios {
                let pts = points
                    .iter()
                    .filter(|p| p.strategy == strategy && p.ratio == ratio)
                    .map(|p| (p.alpha, p.mean_relative_payoff))
                    .collect();
                series.push(Series::new(format!("{} T_w/T_s={ratio}", strategy.label()), pts));
            }
        }
        series.push(Series::new("fair share", s.alphas.iter().map(|&a| (a, a)).collect()).dashed());
        let chart = line_chart("Relative payoff", "alpha", "relative payoff", &series);
        art.write("strongchain_payoff.svg", chart.as_bytes())?;
    }

    let mut pool = serde_json::Value::Null;
    if let Some(v) = &s.variance {
        let rows: Vec<PoolRow> = v
            .ratios
            .iter()
            .map(|&ratio| {
                let p = powlab_core::strongchain::StrongchainParams::with_ratio(ratio)
                    .map_err(invariant)?
                    .gamma(v.gamma);
                let mut rng = SimRng::new(cfg.seed, format!("strongchain/variance/{ratio}"));
                let beta = equivalent_pool_size(v.alpha, &p, v.horizon, v.tolerance, &mut rng).map_err(invariant)?;
                Ok(PoolRow {
                    ratio,
                    alpha: v.alpha,
                    bitcoin_equivalent: beta,
                    reduction: beta / v.alpha,
                })
            })
            .collect::<Result<_, CliError>>()?;
        art.csv(
            "pool_equivalence.csv",
            POOL_EQUIVALENCE,
            &["ratio", "alpha", "bitcoin_equivalent", "reduction"],
            &rows,
        )?;
        pool = serde_json::to_value(
            rows.iter()
                .map(|r| ((r.ratio).to_string(), json!({"bitcoin_equivalent": r.bitcoin_equivalent, "reduction": r.reduction})))
                .collect::<BTreeMap<_, _>>(),
        )
        .unwrap_or_default();
    }
    Ok(json!({ "crossovers": crossovers, "pool_equivalence": pool }))
}

// ------------------------------------------------------------------ dag

struct DagPoint {
    label: String,
    /// alpha or greedy-miner count, as written to the CSV
    x: f64,
    params: DagConfig,
    miners: Vec<DagMinerSpec>,
}

fn dag_points(cfg: &ScenarioConfig) -> Vec<DagPoint> {
    let d = &cfg.dag;
    match d.experiment {
        DagExperiment::Duel | DagExperiment::Pools => d
            .alphas
            .iter()
            .map(|&a| DagPoint {
                label: format!("{a:.4}"),
                x: a,
                params: d.params.clone(),
                miners: if d.experiment == DagExperiment::Duel {
                    place_duel(duel_miners(a), d.nodes)
                } else {
                    pool_duel_miners(a)
                },
            })
            .collect(),
        DagExperiment::Uniform => d
            .n_greedy
            .iter()
            .map(|&n| DagPoint {
                label: n.to_string(),
                x: n as f64,
                params: d.params.clone(),
                miners: uniform_miners(d.nodes, n),
            })
            .collect(),
        DagExperiment::Collision => d
            .lambdas
            .iter()
            .flat_map(|&l| {
                d.n_greedy.iter().map(move |&n| DagPoint {
                    label: format!("{l}/{n}"),
                    x: n as f64,
                    params: DagConfig {
                        block_time: l,
                        ..d.params.clone()
                    },
                    miners: uniform_miners(d.nodes, n),
                })
            })
            .collect(),
    }
}

/// Duel miners sit on opposite sides of the ring.
fn place_duel(mut m: Vec<DagMinerSpec>, nodes: usize) -> Vec<DagMinerSpec> {
    m[1].node = nodes / 2;
    m
}

fn dag(
    cfg: &ScenarioConfig,
    opts: &RunOptions,
    art: &mut Artifacts,
    metrics: &mut BTreeMap<String, Metric>,
) -> Result<serde_json::Value, CliError> {
    let d = &cfg.dag;
    let runs = cfg.runs(Kind::Dag);
    let topo = Topology::ring(d.nodes, d.delay).map_err(|e| CliError::invalid("dag.nodes", e.to_string()))?;
    let points = dag_points(cfg);
    let exp = d.experiment.label();
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..runs).map(move |r| (p, r))).collect();
    let results: Vec<ExperimentResult> = jobs
        .par_iter()
        .map(|&(p, r)| {
            let pt = &points[p];
            let stream = format!("dag/{exp}/{}/run/{r}", pt.label);
            run_dag_experiment(
                &pt.params,
                &pt.miners,
                &topo,
                d.blocks as f64 * pt.params.block_time,
                cfg.seed,
                &stream,
            )
        })
        .collect::<Result<_, _>>()
        .map_err(invariant)?;

    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    if d.experiment == DagExperiment::Collision {
        let mut rows = Vec::new();
        for (&(p, run), r) in jobs.iter().zip(&results) {
            rows.push(DagCollisionRow {
                lambda: points[p].params.block_time,
                n_greedy: points[p].x as usize,
                run,
                collision_rate: r.collision_rate,
                throughput_tps: r.throughput_tps,
            });
        }
        art.csv(
            "dag_collision.csv",
            report::DAG_COLLISION,
            &["lambda", "n_greedy", "run", "collision_rate", "throughput_tps"],
            &rows,
        )?;
        for (p, pt) in points.iter().enumerate() {
            let c: Vec<f64> = rows.iter().zip(&jobs).filter(|(_, j)| j.0 == p).map(|(r, _)| r.collision_rate).collect();
            let t: Vec<f64> = rows.iter().zip(&jobs).filter(|(_, j)| j.0 == p).map(|(r, _)| r.throughput_tps).collect();
            let m = Metric::of(&c);
            series
                .entry(format!("lambda={}", pt.params.block_time))
                .or_default()
                .push((pt.x, m.mean));
            metrics.insert(format!("collision_rate/{}", pt.label), m);
            metrics.insert(format!("throughput_tps/{}", pt.label), Metric::of(&t));
        }
    } else {
        let mut rows = Vec::new();
        let mut per_point: BTreeMap<(usize, &str), Vec<f64>> = BTreeMap::new();
        for (&(p, run), r) in jobs.iter().zip(&results) {
            let pt = &points[p];
            for sel in [Selection::Greedy, Selection::Rts] {
                let pf = match d.experiment {
                    // the two named miners, not the small ones around them
                    DagExperiment::Duel | DagExperiment::Pools => {
                        Some(r.profit_factor[if sel == Selection::Greedy { 0 } else { 1 }])
                    }
                    _ => mean_profit_factor(r, &pt.miners, sel),
                };
                if let Some(pf) = pf {
                    rows.push(DagProfitRow::new(exp, pt.x, sel, run, pf));
                    per_point.entry((p, sel.label())).or_default().push(pf);
                }
            }
        }
        art.csv(
            "dag_profit.csv",
            report::DAG_PROFIT,
            &["experiment", "alpha_or_count", "strategy", "run", "profit_factor"],
            &rows,
        )?;
        for ((p, sel), xs) in &per_point {
            let m = Metric::of(xs);
            series.entry(sel.to_string()).or_default().push((points[*p].x, m.mean));
            metrics.insert(format!("profit_factor/{sel}/{}", points[*p].label), m);
        }
    }
    if opts.svg {
        let (name, x, y) = match d.experiment {
            DagExperiment::Collision => ("dag_collision.svg", "greedy miners", "collision rate"),
            DagExperiment::Uniform => ("dag_profit.svg", "greedy miners", "profit factor"),
            _ => ("dag_profit.svg", "alpha", "profit factor"),
        };
        let s: Vec<Series> = series.into_iter().map(|(k, v)| Series::new(k, v)).collect();
        art.write(name, line_chart(exp, x, y, &s).as_bytes())?;
    }
    Ok(json!({ "experiment": exp, "points": points.len() }))
}

// -------------------------------------------------------------- feegame

fn final_window<'a>(r: &'a GameResult, window: f64) -> &'a [powlab_core::feegame::GameRecord] {
    let k = ((r.games.len() as f64 * window).ceil() as usize).clamp(1, r.games.len().max(1));
    &r.games[r.games.len().saturating_sub(k)..]
}

fn feegame(
    cfg: &ScenarioConfig,
    opts: &RunOptions,
    art: &mut Artifacts,
    metrics: &mut BTreeMap<String, Metric>,
) -> Result<serde_json::Value, CliError> {
    let f = &cfg.feegame;
    let runs = cfg.runs(Kind::Feegame);
    if opts.paper_scale {
        eprintln!(
            "note: full-size fee game ({} miners, {} blocks x {} games); expect a very long run, results are not guaranteed to match the published threshold",
            f.game.n_miners, f.game.blocks_per_game, f.game.n_games
        );
    }
    let mut thresholds = Vec::new();
    let mut profits: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut orphan = Vec::new();
    let mut profitable = Vec::new();
    let mut failures = 0u64;
    for run in 0..runs {
        let seed = cfg.seed.wrapping_add(run as u64);
        let points = match &f.dc_grid {
            Some(grid) => {
                let t = find_dc_threshold(&f.game, grid, seed).map_err(invariant)?;
                thresholds.push(t.threshold);
                t.points
            }
            None => vec![run_fee_game(&f.game, seed).map_err(invariant)?],
        };
        let prefix = if runs == 1 { String::new() } else { format!("run-{run}/") };
        let rows: Vec<_> = points.iter().flat_map(|p| report::fee_game_rows(p, f.csv_every)).collect();
        art.csv(
            &format!("{prefix}fee_game.csv"),
            report::FEE_GAME,
            &["dc_fraction", "game", "strategy", "mean_profit", "orphan_rate"],
            &rows,
        )?;
        let last = points.last().expect("at least one point");
        let mut buf = Vec::new();
        report::write_frsc_trace(&mut buf, &last.trace, f.game.frscs.len())?;
        art.write(&format!("{prefix}frsc_trace.csv"), &buf)?;
        failures += points.iter().map(|p| p.conservation_failures).sum::<u64>();

        let tail = final_window(last, f.game.final_window);
        let mut by: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for g in tail {
            for s in &g.strategies {
                by.entry(s.strategy.label()).or_default().push(s.mean_profit);
            }
        }
        for (k, v) in by {
            profits.entry(k).or_default().push(Metric::of(&v).mean);
        }
        orphan.push(Metric::of(&tail.iter().map(|g| g.orphan_rate).collect::<Vec<_>>()).mean);
        profitable.push(if last.dc_profitable { 1.0 } else { 0.0 });

        if opts.svg && run == 0 {
            let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            let step = (last.games.len() / 200).max(1);
            for g in last.games.iter().step_by(step) {
                for s in &g.strategies {
                    series.entry(s.strategy.label()).or_default().push((g.game as f64, s.mean_profit));
                }
            }
            let s: Vec<Series> = series.into_iter().map(|(k, v)| Series::new(k, v)).collect();
            let title = format!("Mean profit per miner, dc_fraction={}", last.dc_fraction);
            art.write("fee_game.svg", line_chart(&title, "game", "mean profit", &s).as_bytes())?;
        }
    }
    if failures > 0 {
        return Err(CliError::Invariant(format!("token conservation failed on {failures} blocks")));
    }
    for (k, v) in &profits {
        metrics.insert(format!("mean_profit/{k}"), Metric::of(v));
    }
    metrics.insert("orphan_rate".into(), Metric::of(&orphan));
    metrics.insert("dc_profitable".into(), Metric::of(&profitable));
    let found: Option<Vec<f64>> = match f.dc_grid {
        Some(_) => thresholds.iter().copied().collect(),
        None => None,
    };
    if let Some(ts) = &found {
        metrics.insert("threshold".into(), Metric::of(ts));
    }
    let threshold = found.map(|ts| Metric::of(&ts).mean);
    Ok(json!({
        "threshold": threshold,
        "thresholds": thresholds,
        "conservation_failures": failures,
    }))
}

// ----------------------------------------------------------- gametheory

#[derive(Serialize)]
struct GameRow {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    scenario: String,
    pure_nash: String,
    mixed_p_row: Option<f64>,
    mixed_p_col: Option<f64>,
    mixed_payoff_row: Option<f64>,
    mixed_payoff_col: Option<f64>,
    honest_equilibrium: Option<bool>,
    verdict: String,
    grim_threshold: Option<f64>,
    grim_sustains: Option<bool>,
}

fn scenario_label(s: Scenario) -> &'static str {
    match s {
        Scenario::S1 => "S1",
        Scenario::S2 => "S2",
        Scenario::S3 => "S3",
        Scenario::S4 => "S4",
        Scenario::S5 => "S5",
        Scenario::Invalid => "invalid",
    }
}

fn gametheory(cfg: &ScenarioConfig, art: &mut Artifacts) -> Result<serde_json::Value, CliError> {
    let delta = cfg.gametheory.delta;
    let rows: Vec<GameRow> = cfg
        .gametheory
        .payoff_levels()
        .iter()
        .map(|l| {
            let g = BimatrixGame::from_levels(l);
            let pne: Vec<String> = g
                .pure_nash()
                .iter()
                .map(|(r, c)| format!("({},{})", r.label(), c.label()))
                .collect();
            let mne = g.mixed_nash_2x2();
            let (hh, verdict) = match honest_is_equilibrium(l) {
                Ok((b, HonestVerdict::NotEquilibrium)) => (Some(b), "greedy deviation pays".to_string()),
                Ok((b, HonestVerdict::EquilibriumOutsideBaseline)) => {
                    (Some(b), "equilibrium, outside the baseline constraints".to_string())
                }
                Err(_) => (None, "levels match no scenario".to_string()),
            };
            GameRow {
                a: l.a,
                b: l.b,
                c: l.c,
                d: l.d,
                scenario: scenario_label(classify_scenario(l)).into(),
                pure_nash: pne.join(" "),
                mixed_p_row: mne.map(|m| m.p_row),
                mixed_p_col: mne.map(|m| m.p_col),
                mixed_payoff_row: mne.map(|m| m.payoff_row),
                mixed_payoff_col: mne.map(|m| m.payoff_col),
                honest_equilibrium: hh,
                verdict,
                grim_threshold: grim_trigger_threshold(l),
                grim_sustains: delta.map(|d| {
                    let g = grim_trigger(l, d);
                    g.cooperate >= g.deviate
                }),
            }
        })
        .collect();

    println!("{:<22} {:<8} {:<14} {:<26} {:<6} verdict", "levels (a,b,c,d)", "class", "PNE", "MNE p_H / payoff", "(H,H)");
    for r in &rows {
        let mne = match (r.mixed_p_row, r.mixed_p_col, r.mixed_payoff_row, r.mixed_payoff_col) {
            (Some(p), Some(q), Some(u), Some(v)) => format!("({p:.3},{q:.3}) / ({u:.3},{v:.3})"),
            _ => "none".into(),
        };
        let hh = r.honest_equilibrium.map(|b| if b { "yes" } else { "no" }).unwrap_or("-");
        println!(
            "{:<22} {:<8} {:<14} {:<26} {:<6} {}",
            format!("({},{},{},{})", r.a, r.b, r.c, r.d),
            r.scenario,
            if r.pure_nash.is_empty() { "none" } else { &r.pure_nash },
            mne,
            hh,
            r.verdict
        );
    }
    art.csv(
        "game_theory.csv",
        GAME_THEORY,
        &[
            "a", "b", "c", "d", "scenario", "pure_nash", "mixed_p_row", "mixed_p_col", "mixed_payoff_row",
            "mixed_payoff_col", "honest_equilibrium", "verdict", "grim_threshold", "grim_sustains",
        ],
        &rows,
    )?;
    Ok(json!({ "games": rows.len() }))
}
