//! Versioned CSV output. Every file starts with `# schema: <name>/v<n>`.

use std::io::Write;

use serde::Serialize;

use crate::dag::Selection;
use crate::feegame::{GameResult, TraceRow};
use crate::strongchain::PayoffPoint;

pub const STRONGCHAIN_PAYOFF: &str = "strongchain_payoff/v1";
pub const DAG_PROFIT: &str = "dag_profit/v1";
pub const DAG_COLLISION: &str = "dag_collision/v1";
pub const FEE_GAME: &str = "fee_game/v1";
pub const FRSC_TRACE: &str = "frsc_trace/v1";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn write_csv<W: Write, R: Serialize>(mut out: W, schema: &str, rows: &[R]) -> Result<(), ReportError> {
    writeln!(out, "# schema: {schema}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Header-only files still need column names, which `serialize` only emits
/// with the first row.
fn write_header_only<W: Write>(mut out: W, schema: &str, cols: &[&str]) -> Result<(), ReportError> {
    writeln!(out, "# schema: {schema}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(cols)?;
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongchainPayoffRow {
    pub strategy: String,
    pub alpha: f64,
    pub ratio: f64,
    pub gamma: f64,
    pub runs: usize,
    pub mean_relative_payoff: f64,
    pub std: f64,
}

impl From<&PayoffPoint> for StrongchainPayoffRow {
    fn from(p: &PayoffPoint) -> Self {
        Self {
            strategy: p.strategy.label().to_string(),
            alpha: p.alpha,
            ratio: p.ratio,
            gamma: p.gamma,
            runs: p.runs,
            mean_relative_payoff: p.mean_relative_payoff,
            std: p.std,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DagProfitRow {
    pub experiment: String,
    pub alpha_or_count: f64,
    pub strategy: String,
    pub run: usize,
    pub profit_factor: f64,
}

impl DagProfitRow {
    pub fn new(experiment: &str, alpha_or_count: f64, sel: Selection, run: usize, profit_factor: f64) -> Self {
        Self {
            experiment: experiment.into(),
            alpha_or_count,
            strategy: sel.label().into(),
            run,
            profit_factor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DagCollisionRow {
    pub lambda: f64,
    pub n_greedy: usize,
    pub run: usize,
    pub collision_rate: f64,
    pub throughput_tps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeeGameRow {
    pub dc_fraction: f64,
    pub game: usize,
    pub strategy: String,
    pub mean_profit: f64,
    pub orphan_rate: f64,
}

/// Rows for every `every`-th game of a fee-game run, one per strategy.
pub fn fee_game_rows(r: &GameResult, every: usize) -> Vec<FeeGameRow> {
    let every = every.max(1);
    let last = r.games.len().saturating_sub(1);
    r.games
        .iter()
        .filter(|g| g.game % every == 0 || g.game == last)
        .flat_map(|g| {
            g.strategies.iter().map(move |s| FeeGameRow {
                dc_fraction: r.dc_fraction,
                game: g.game,
                strategy: s.strategy.label(),
                mean_profit: s.mean_profit,
                orphan_rate: g.orphan_rate,
            })
        })
        .collect()
}

pub fn write_frsc_trace<W: Write>(mut out: W, rows: &[TraceRow], contracts: usize) -> Result<(), ReportError> {
    let mut cols: Vec<String> = ["height", "fees_in_block", "next_claim", "rewardT"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend((0..contracts).map(|i| format!("nu_{i}")));
    writeln!(out, "# schema: {FRSC_TRACE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&cols)?;
    for r in rows {
        let mut rec = vec![
            r.height.to_string(),
            r.fees_in_block.to_string(),
            r.next_claim.to_string(),
            r.reward_t.to_string(),
        ];
        rec.extend(r.nu.iter().map(u64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `rows`, or just the header line when there are none.
pub fn write_csv_or_header<W: Write, R: Serialize>(
    out: W,
    schema: &str,
    cols: &[&str],
    rows: &[R],
) -> Result<(), ReportError> {
    if rows.is_empty() {
        write_header_only(out, schema, cols)
    } else {
        write_csv(out, schema, rows)
    }
}
