use std::path::PathBuf;

use clap::Args;

use schelling_core::report::Document;
use schelling_core::{rng, run_to_termination, snapshot, structures, Cell, RunLimits};

use super::run::initial_state;
use crate::config::{config_error, set, set_some, DetectConfig};
use crate::output;

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Analyse this snapshot instead of a generated grid.
    #[arg(long)]
    snapshot_in: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    allow_small_grid: bool,
    /// Run the dynamics to termination before detecting.
    #[arg(long)]
    terminate: bool,
    /// Radical-region slack eps'.
    #[arg(long)]
    eps_prime: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Scan every stride-th row and column.
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    max_detections: Option<usize>,
    /// Skip expandability checks.
    #[arg(long)]
    no_expand: bool,
    /// Flip budget of each expandability cascade.
    #[arg(long)]
    max_flips: Option<usize>,
    /// Firewall radius to test around each detection (repeatable).
    #[arg(long = "firewall-radius")]
    firewall_radii: Vec<usize>,
    /// Renormalize into blocks of this side.
    #[arg(long)]
    block_size: Option<usize>,
    /// Block lattice origin as ROW,COL.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    block_origin: Option<Vec<usize>>,
    /// Look for a chemical path at this block radius.
    #[arg(long)]
    chemical_radius: Option<usize>,
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// Analysed state in the binary snapshot format.
    #[arg(long)]
    snapshot_out: Option<PathBuf>,
}

impl DetectArgs {
    fn apply(self, c: &mut DetectConfig) {
        set_some!(c.snapshot_in, self.snapshot_in);
        set!(c.n, self.n);
        set!(c.w, self.w);
        set!(c.tau, self.tau);
        set!(c.p, self.p);
        set!(c.seed, self.seed);
        c.allow_small_grid |= self.allow_small_grid;
        c.terminate |= self.terminate;
        let s = &mut c.spec;
        set!(s.eps_prime, self.eps_prime);
        set!(s.eps, self.eps);
        set!(s.stride, self.stride);
        set!(s.max_detections, self.max_detections);
        s.expand &= !self.no_expand;
        set_some!(s.max_flips, self.max_flips);
        if !self.firewall_radii.is_empty() {
            s.firewall_radii = self.firewall_radii;
        }
        set_some!(s.block_size, self.block_size);
        if let Some(o) = self.block_origin {
            s.block_origin = Cell::new(o[0], o[1]);
        }
        set_some!(s.chemical_radius, self.chemical_radius);
        set_some!(c.report_out, self.report_out);
        set_some!(c.snapshot_out, self.snapshot_out);
    }
}

pub fn execute(mut cfg: DetectConfig, args: DetectArgs) -> anyhow::Result<()> {
    args.apply(&mut cfg);
    if cfg.spec.stride == 0 {
        return Err(config_error("stride must be positive"));
    }
    let mut state =
        initial_state(cfg.snapshot_in.as_ref(), cfg.n, cfg.w, cfg.tau, cfg.p, cfg.seed, cfg.allow_small_grid)?;
    if cfg.snapshot_in.is_some() {
        let g = state.config();
        (cfg.n, cfg.w, cfg.tau, cfg.p, cfg.seed) = (g.n, g.w, g.tau_tilde, g.p, g.seed);
    }
    if cfg.terminate {
        let mut r = rng::stream_rng(cfg.seed, rng::DYNAMICS_STREAM);
        run_to_termination(&mut state, &mut r, &RunLimits::default(), None);
    }
    let report = structures::detect(&state, &cfg.spec)?;
    if let Some(path) = &cfg.snapshot_out {
        output::write_bytes(path, &snapshot::write(&state))?;
    }
    let seed = cfg.seed;
    let out = cfg.report_out.clone();
    output::emit(out.as_deref(), &Document::new(cfg, seed, report).to_json())
}
