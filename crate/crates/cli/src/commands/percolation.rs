use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use schelling_core::percolation::{
    chemical_distance, fpp_min_passage_time, origin_radius, surrounding_circuit_exists, SiteLattice, WeightLattice,
};
use schelling_core::report::Document;
use schelling_core::rng::derive_seed;

use crate::config::{config_error, set, set_some, PercolationConfig};
use crate::output;

#[derive(Debug, Args)]
pub struct PercolationArgs {
    /// chemdist, fpp, radius or circuit.
    mode: Option<String>,
    #[arg(long)]
    samples: Option<u64>,
    /// Base seed; sample i uses derive_seed(seed, i).
    #[arg(long)]
    seed: Option<u64>,
    /// Open-site probability.
    #[arg(long)]
    p: Option<f64>,
    /// Side of the square lattice.
    #[arg(long)]
    size: Option<usize>,
    /// chemdist start as ROW,COL.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    from: Option<Vec<usize>>,
    /// chemdist end as ROW,COL.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    to: Option<Vec<usize>>,
    /// fpp horizontal distance.
    #[arg(long)]
    k: Option<usize>,
    /// Mean of the exponential fpp weights.
    #[arg(long)]
    mean: Option<f64>,
    /// fpp strip height.
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    r_inner: Option<usize>,
    #[arg(long)]
    r_outer: Option<usize>,
    /// CSV output (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

impl PercolationArgs {
    fn apply(self, c: &mut PercolationConfig) {
        set!(c.mode, self.mode);
        set!(c.samples, self.samples);
        set!(c.seed, self.seed);
        set!(c.p, self.p);
        set!(c.size, self.size);
        set_some!(c.from, self.from.map(|v| [v[0], v[1]]));
        set_some!(c.to, self.to.map(|v| [v[0], v[1]]));
        set!(c.k, self.k);
        set!(c.mean, self.mean);
        set_some!(c.height, self.height);
        set!(c.r_inner, self.r_inner);
        set!(c.r_outer, self.r_outer);
        set_some!(c.out, self.out);
        set_some!(c.report_out, self.report_out);
    }
}

#[derive(Serialize)]
struct PercolationResult {
    mode: String,
    samples: u64,
    /// Mean of the numeric column over samples where it is defined.
    mean: Option<f64>,
    defined: u64,
}

fn check(cfg: &PercolationConfig) -> anyhow::Result<()> {
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(config_error(format!("p = {} outside [0, 1]", cfg.p)));
    }
    let inside = |s: [usize; 2]| s[0] < cfg.size && s[1] < cfg.size;
    match cfg.mode.as_str() {
        "chemdist" | "radius" if cfg.size == 0 => Err(config_error("size must be positive")),
        "chemdist" if !cfg.from.is_none_or(inside) || !cfg.to.is_none_or(inside) => {
            Err(config_error("chemdist endpoints must lie inside the lattice"))
        }
        "fpp" if cfg.k == 0 || cfg.mean.is_nan() || cfg.mean <= 0.0 => Err(config_error("fpp needs k >= 1 and mean > 0")),
        "circuit" if !(cfg.r_inner < cfg.r_outer && 2 * cfg.r_outer < cfg.size) => {
            Err(config_error("circuit needs r_inner < r_outer and 2 r_outer < size"))
        }
        "chemdist" | "radius" | "fpp" | "circuit" => Ok(()),
        other => Err(config_error(format!("unknown percolation mode {other:?}"))),
    }
}

/// One CSV row per sample; the last value is the numeric observable.
fn sample(cfg: &PercolationConfig, seed: u64) -> anyhow::Result<(String, Option<f64>)> {
    let size = cfg.size;
    Ok(match cfg.mode.as_str() {
        "chemdist" => {
            let a = cfg.from.unwrap_or([size / 4, size / 4]);
            let b = cfg.to.unwrap_or([3 * size / 4, 3 * size / 4]);
            let lat = SiteLattice::random(size, size, cfg.p, seed);
            let l1 = a[0].abs_diff(b[0]) + a[1].abs_diff(b[1]);
            match chemical_distance(&lat, (a[0], a[1]), (b[0], b[1])) {
                Some(d) => (format!("true,{l1},{d}"), Some(d as f64)),
                None => (format!("false,{l1},NA"), None),
            }
        }
        "fpp" => {
            let half = cfg.height.map_or((1.5 * (cfg.k as f64).powf(2.0 / 3.0)).ceil() as usize, |h| h / 2);
            let lat = WeightLattice::exponential(2 * half + 1, cfg.k + 1, cfg.mean, seed);
            let t = fpp_min_passage_time(&lat, &[(half, 0)], &[(half, cfg.k)])?;
            (format!("{},{t}", cfg.k), Some(t))
        }
        "radius" => {
            let lat = SiteLattice::random(size, size, cfg.p, seed);
            match origin_radius(&lat, (size / 2, size / 2)) {
                Some(r) => (format!("true,{r}"), Some(r as f64)),
                None => ("false,NA".into(), None),
            }
        }
        _ => {
            let side = 2 * cfg.r_outer + 1;
            let lat = SiteLattice::random(side, side, cfg.p, seed);
            let found = surrounding_circuit_exists(&lat, (cfg.r_outer, cfg.r_outer), cfg.r_inner, cfg.r_outer)?;
            (found.to_string(), Some(found as u8 as f64))
        }
    })
}

pub fn execute(mut cfg: PercolationConfig, args: PercolationArgs) -> anyhow::Result<()> {
    args.apply(&mut cfg);
    check(&cfg)?;
    let header = match cfg.mode.as_str() {
        "chemdist" => "sample,seed,connected,l1,distance",
        "fpp" => "sample,seed,k,time",
        "radius" => "sample,seed,origin_open,radius",
        _ => "sample,seed,circuit",
    };
    let rows: Vec<(String, Option<f64>)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(cfg.seed, i);
            sample(&cfg, seed).map(|(row, v)| (format!("{i},{seed},{row}"), v))
        })
        .collect::<anyhow::Result<_>>()?;
    let mut csv = String::from(header);
    csv.push('\n');
    for (row, _) in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    output::emit(cfg.out.as_deref(), &csv)?;
    let values: Vec<f64> = rows.iter().filter_map(|r| r.1).collect();
    let result = PercolationResult {
        mode: cfg.mode.clone(),
        samples: cfg.samples,
        mean: (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64),
        defined: values.len() as u64,
    };
    let seed = cfg.seed;
    let (report_out, out) = (cfg.report_out.clone(), cfg.out.clone());
    output::emit_sidecar(&Document::new(cfg, seed, result), report_out.as_deref(), out.as_deref())
}
