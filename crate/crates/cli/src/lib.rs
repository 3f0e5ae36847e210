//! Command-line driver: loads a scenario config, runs it, and writes CSVs,
//! optional SVG charts and `summary.json`.
//!
//! Exit codes: 0 success, 1 output error, 2 unreadable or malformed config
//! (including unknown keys), 3 out-of-range values, 4 simulation invariant
//! violation.

pub mod config;
pub mod error;
pub mod scenario;
pub mod svg;

use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::Parser;

pub use config::{load_config, parse_config, Kind, ScenarioConfig};
pub use error::CliError;
pub use scenario::{run_scenario, RunOptions, Summary};

#[derive(Debug, Parser)]
#[command(name = "powlab", version, about = "Proof-of-work incentive simulations")]
pub struct Args {
    /// Scenario to run.
    #[arg(value_enum)]
    pub kind: Kind,
    /// TOML scenario config.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render SVG line charts.
    #[arg(long)]
    pub svg: bool,
    /// Full-size fee game (100 miners, 10^4 blocks per game, 3*10^5 games).
    #[arg(long)]
    pub paper_scale: bool,
}

/// Runs the parsed command line on a worker pool of `args.jobs` threads.
pub fn execute(args: &Args) -> Result<Summary, CliError> {
    let cfg = load_config(&args.config, args.kind)?;
    let opts = RunOptions {
        seed: args.seed,
        out: args.out.clone(),
        svg: args.svg,
        paper_scale: args.paper_scale,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::invalid("--jobs", e.to_string()))?;
    let run = || run_scenario(args.kind, &cfg, &opts);
    match catch_unwind(AssertUnwindSafe(|| pool.install(run))) {
        Ok(r) => r,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(CliError::Invariant(msg))
        }
    }
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(s) => {
            let dir = args.out.clone().or(s.config.output_dir.clone()).unwrap_or_else(|| "out".into());
            println!(
                "{} finished in {:.1}s (seed {}); wrote {} files to {}",
                s.kind.label(),
                s.wall_time_s,
                s.seed,
                s.files.len(),
                dir.display()
            );
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
