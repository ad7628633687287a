use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use schelling_core::report::Document;
use schelling_core::sweep::{self, CellAggregate};

use crate::config::{set, set_some, SweepConfig};
use crate::output;

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated intolerance grid.
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    w: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Base seed; run i gets derive_seed(seed, i).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (output does not depend on this).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_flips: Option<u64>,
    #[arg(long)]
    allow_small_grid: bool,
    /// Per-run CSV (stdout when absent).
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Provenance and per-cell aggregates.
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// All per-run reports as a JSON array.
    #[arg(long)]
    runs_out: Option<PathBuf>,
}

impl SweepArgs {
    fn apply(self, c: &mut SweepConfig) {
        set!(c.tau, self.tau);
        set!(c.w, self.w);
        set!(c.n, self.n);
        set!(c.p, self.p);
        set!(c.replicates, self.replicates);
        set!(c.seed, self.seed);
        set_some!(c.jobs, self.jobs);
        set!(c.sample_size, self.sample_size);
        set!(c.epsilon, self.epsilon);
        set_some!(c.max_flips, self.max_flips);
        c.allow_small_grid |= self.allow_small_grid;
        set_some!(c.csv_out, self.csv_out);
        set_some!(c.report_out, self.report_out);
        set_some!(c.runs_out, self.runs_out);
    }
}

#[derive(Serialize)]
struct SweepResult {
    runs: usize,
    cells: Vec<CellAggregate>,
}

pub fn execute(mut cfg: SweepConfig, args: SweepArgs) -> anyhow::Result<()> {
    args.apply(&mut cfg);
    let spec = cfg.spec();
    spec.validate()?;
    let outcome = sweep::run_sweep(&spec)?;
    output::emit(cfg.csv_out.as_deref(), &sweep::to_csv(&outcome.rows))?;
    if let Some(path) = &cfg.runs_out {
        output::emit(Some(path), &serde_json::to_string_pretty(&outcome.reports)?)?;
    }
    let result = SweepResult { runs: outcome.rows.len(), cells: sweep::aggregate(&spec, &outcome.rows) };
    let seed = cfg.seed;
    let (report_out, csv_out) = (cfg.report_out.clone(), cfg.csv_out.clone());
    output::emit_sidecar(&Document::new(cfg, seed, result), report_out.as_deref(), csv_out.as_deref())
}
