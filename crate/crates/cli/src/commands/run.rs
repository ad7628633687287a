use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::Args;

use schelling_core::dynamics::TracePoint;
use schelling_core::report::Document;
use schelling_core::{rng, run_to_termination, snapshot, GridConfig, GridState, RegionSampling, RunLimits};

use crate::config::{set, set_some, RunConfig};
use crate::output;

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Torus side length.
    #[arg(long)]
    n: Option<usize>,
    /// Neighborhood horizon.
    #[arg(long)]
    w: Option<usize>,
    /// Intolerance; the threshold is K = ceil(tau N).
    #[arg(long)]
    tau: Option<f64>,
    /// Probability of type +1 in the initial grid.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Accept n < 8w.
    #[arg(long)]
    allow_small_grid: bool,
    /// Start from a snapshot; its grid parameters and seed replace the flags.
    #[arg(long)]
    snapshot_in: Option<PathBuf>,
    #[arg(long)]
    max_flips: Option<u64>,
    /// Stop once continuous time exceeds this value.
    #[arg(long)]
    max_time: Option<f64>,
    /// Flips between trace points (default n²/10).
    #[arg(long)]
    record_interval: Option<u64>,
    /// Skip the region measurements at termination.
    #[arg(long)]
    no_measure: bool,
    /// Agents sampled for M and M'.
    #[arg(long)]
    sample_size: Option<usize>,
    /// Exponent of the almost-monochromatic threshold.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Record wall-clock time in the report (breaks byte reproducibility).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// Trace CSV: flip_index,continuous_time,lyapunov,eligible.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Final state in the binary snapshot format.
    #[arg(long)]
    snapshot_out: Option<PathBuf>,
}

impl RunArgs {
    fn apply(self, c: &mut RunConfig) {
        set!(c.n, self.n);
        set!(c.w, self.w);
        set!(c.tau, self.tau);
        set!(c.p, self.p);
        set!(c.seed, self.seed);
        c.allow_small_grid |= self.allow_small_grid;
        set_some!(c.snapshot_in, self.snapshot_in);
        set_some!(c.max_flips, self.max_flips);
        set_some!(c.max_time, self.max_time);
        set_some!(c.record_interval, self.record_interval);
        c.measure &= !self.no_measure;
        set!(c.sample_size, self.sample_size);
        set!(c.epsilon, self.epsilon);
        c.timing |= self.timing;
        set_some!(c.report_out, self.report_out);
        set_some!(c.trace_out, self.trace_out);
        set_some!(c.snapshot_out, self.snapshot_out);
    }
}

/// Random grid from the config, or the snapshot it names.
pub fn initial_state(
    snapshot_in: Option<&PathBuf>,
    n: usize,
    w: usize,
    tau: f64,
    p: f64,
    seed: u64,
    allow_small_grid: bool,
) -> anyhow::Result<GridState> {
    if let Some(path) = snapshot_in {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        return snapshot::read(&bytes).with_context(|| format!("cannot decode snapshot {}", path.display()));
    }
    let cfg = if allow_small_grid {
        GridConfig::new_unchecked_size(n, w, tau, p, seed)?
    } else {
        GridConfig::new(n, w, tau, p, seed)?
    };
    Ok(GridState::new_random(cfg)?)
}

pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut s = String::from("flip_index,continuous_time,lyapunov,eligible\n");
    for t in trace {
        writeln!(s, "{},{},{},{}", t.flip_index, t.continuous_time, t.lyapunov, t.eligible).unwrap();
    }
    s
}

pub fn execute(mut cfg: RunConfig, args: RunArgs) -> anyhow::Result<()> {
    args.apply(&mut cfg);
    let mut state =
        initial_state(cfg.snapshot_in.as_ref(), cfg.n, cfg.w, cfg.tau, cfg.p, cfg.seed, cfg.allow_small_grid)?;
    if cfg.snapshot_in.is_some() {
        // echo the grid actually simulated
        let g = state.config();
        (cfg.n, cfg.w, cfg.tau, cfg.p, cfg.seed) = (g.n, g.w, g.tau_tilde, g.p, g.seed);
    }
    let limits = RunLimits {
        max_flips: cfg.max_flips,
        max_continuous_time: cfg.max_time,
        record_interval: cfg.record_interval.unwrap_or(((cfg.n * cfg.n) as u64 / 10).max(1)),
    };
    limits.validate()?;
    let sampling = RegionSampling { sample_size: cfg.sample_size, epsilon: cfg.epsilon, seed: cfg.seed };
    let mut dyn_rng = rng::stream_rng(cfg.seed, rng::DYNAMICS_STREAM);
    let start = Instant::now();
    let mut report = run_to_termination(&mut state, &mut dyn_rng, &limits, cfg.measure.then_some(&sampling));
    if cfg.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    if let Some(path) = &cfg.trace_out {
        output::emit(Some(path), &trace_csv(&report.trace))?;
    }
    if let Some(path) = &cfg.snapshot_out {
        output::write_bytes(path, &snapshot::write(&state))?;
    }
    let seed = cfg.seed;
    let out = cfg.report_out.clone();
    output::emit(out.as_deref(), &Document::new(cfg, seed, report).to_json())
}
