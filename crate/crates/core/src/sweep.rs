//! Parameter sweeps: every (cell, replicate) gets its own derived seed, so
//! results do not depend on scheduling or job count.

use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{run_to_termination, RunLimits, RunReport};
use crate::error::{Error, Result};
use crate::grid::{GridConfig, GridState};
use crate::regions::{mean_stderr, RegionSampling, DEFAULT_EPSILON, DEFAULT_SAMPLE_SIZE};
use crate::rng::{self, derive_seed};

pub const CSV_HEADER: &str =
    "tau_tilde,K,N,w,n,p,seed,flips,time,unhappy0,largest_plus_r,largest_minus_r,mean_M,stderr_M,mean_Mprime,stderr_Mprime";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    pub tau_tilde: Vec<f64>,
    pub w: Vec<usize>,
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub replicates: usize,
    pub base_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub sample_size: usize,
    pub epsilon: f64,
    pub max_flips: Option<u64>,
    /// Permit `n < 8w`.
    pub allow_small_grid: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            tau_tilde: vec![0.45],
            w: vec![2],
            n: vec![64],
            p: vec![0.5],
            replicates: 1,
            base_seed: 0,
            jobs: None,
            sample_size: DEFAULT_SAMPLE_SIZE,
            epsilon: DEFAULT_EPSILON,
            max_flips: None,
            allow_small_grid: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub tau_tilde: f64,
    pub w: usize,
    pub n: usize,
    pub p: f64,
}

impl SweepSpec {
    /// Cells in nested order tau_tilde, w, n, p.
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for &tau_tilde in &self.tau_tilde {
            for &w in &self.w {
                for &n in &self.n {
                    for &p in &self.p {
                        out.push(SweepCell { tau_tilde, w, n, p });
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 || self.cells().is_empty() {
            return Err(Error::InvalidConfig("sweep has no runs".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidConfig("jobs must be positive".into()));
        }
        RunLimits { max_flips: self.max_flips, ..RunLimits::default() }.validate()?;
        for c in self.cells() {
            self.config_for(c, 0)?;
        }
        Ok(())
    }

    fn config_for(&self, c: SweepCell, seed: u64) -> Result<GridConfig> {
        if self.allow_small_grid {
            GridConfig::new_unchecked_size(c.n, c.w, c.tau_tilde, c.p, seed)
        } else {
            GridConfig::new(c.n, c.w, c.tau_tilde, c.p, seed)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell_index: usize,
    pub replicate: usize,
    pub tau_tilde: f64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub w: usize,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub flips: u64,
    pub time: f64,
    pub unhappy0: f64,
    pub largest_plus_r: Option<usize>,
    pub largest_minus_r: Option<usize>,
    pub mean_m: f64,
    pub stderr_m: f64,
    pub mean_mprime: f64,
    pub stderr_mprime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub reports: Vec<RunReport>,
}

/// One replicate: grid from `seed`, dynamics on the dynamics stream,
/// measurement sample on the measurement stream.
pub fn run_one(config: GridConfig, limits: &RunLimits, sampling: &RegionSampling) -> Result<RunReport> {
    limits.validate()?;
    let mut state = GridState::new_random(config.clone())?;
    let mut rng = rng::stream_rng(config.seed, rng::DYNAMICS_STREAM);
    Ok(run_to_termination(&mut state, &mut rng, limits, Some(sampling)))
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    let cells = spec.cells();
    let runs: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..spec.replicates).map(move |r| (c, r))).collect();
    let limits = RunLimits { max_flips: spec.max_flips, ..RunLimits::default() };
    let work = || -> Result<Vec<(SweepRow, RunReport)>> {
        runs.par_iter()
            .map(|&(ci, rep)| {
                let cell = cells[ci];
                let seed = derive_seed(spec.base_seed, (ci * spec.replicates + rep) as u64);
                let config = spec.config_for(cell, seed)?;
                let sampling = RegionSampling { sample_size: spec.sample_size, epsilon: spec.epsilon, seed };
                let report = run_one(config.clone(), &limits, &sampling)?;
                let summary = report.region_summary.as_ref().expect("sampling requested");
                let row = SweepRow {
                    cell_index: ci,
                    replicate: rep,
                    tau_tilde: cell.tau_tilde,
                    k: config.k,
                    big_n: config.big_n,
                    w: cell.w,
                    n: cell.n,
                    p: cell.p,
                    seed,
                    flips: report.flips_total,
                    time: report.continuous_time_final,
                    unhappy0: report.unhappy_initial_count as f64 / (cell.n * cell.n) as f64,
                    largest_plus_r: summary.largest_plus.map(|l| l.radius),
                    largest_minus_r: summary.largest_minus.map(|l| l.radius),
                    mean_m: summary.mean_m,
                    stderr_m: summary.stderr_m,
                    mean_mprime: summary.mean_mprime,
                    stderr_mprime: summary.stderr_mprime,
                };
                Ok((row, report))
            })
            .collect()
    };
    let pairs = match spec.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let (rows, reports) = pairs.into_iter().unzip();
    Ok(SweepOutcome { rows, reports })
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Fixed-column CSV, one line per run in (cell, replicate) order.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.tau_tilde,
            r.k,
            r.big_n,
            r.w,
            r.n,
            r.p,
            r.seed,
            r.flips,
            r.time,
            r.unhappy0,
            opt(r.largest_plus_r),
            opt(r.largest_minus_r),
            r.mean_m,
            r.stderr_m,
            r.mean_mprime,
            r.stderr_mprime
        )
        .unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellAggregate {
    pub cell: SweepCell,
    pub runs: usize,
    pub mean_m: f64,
    pub stderr_m: f64,
    pub mean_mprime: f64,
    pub stderr_mprime: f64,
    pub mean_flips: f64,
    pub mean_unhappy0: f64,
    pub max_largest_plus_r: Option<usize>,
    pub max_largest_minus_r: Option<usize>,
}

/// Per-cell mean and standard error across replicates of the per-run means.
pub fn aggregate(spec: &SweepSpec, rows: &[SweepRow]) -> Vec<CellAggregate> {
    spec.cells()
        .into_iter()
        .enumerate()
        .map(|(ci, cell)| {
            let rs: Vec<&SweepRow> = rows.iter().filter(|r| r.cell_index == ci).collect();
            let col = |f: fn(&SweepRow) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let (mean_m, stderr_m) = mean_stderr(&col(|r| r.mean_m));
            let (mean_mprime, stderr_mprime) = mean_stderr(&col(|r| r.mean_mprime));
            CellAggregate {
                cell,
                runs: rs.len(),
                mean_m,
                stderr_m,
                mean_mprime,
                stderr_mprime,
                mean_flips: mean_stderr(&col(|r| r.flips as f64)).0,
                mean_unhappy0: mean_stderr(&col(|r| r.unhappy0)).0,
                max_largest_plus_r: rs.iter().filter_map(|r| r.largest_plus_r).max(),
                max_largest_minus_r: rs.iter().filter_map(|r| r.largest_minus_r).max(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepSpec {
        SweepSpec {
            tau_tilde: vec![0.4, 0.45],
            w: vec![1],
            n: vec![16],
            p: vec![0.5],
            replicates: 3,
            base_seed: 11,
            sample_size: 32,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn all_plus_cell_never_flips() {
        let spec = SweepSpec { p: vec![1.0], ..small() };
        let out = run_sweep(&spec).unwrap();
        assert_eq!(out.rows.len(), 6);
        assert!(out.rows.iter().all(|r| r.flips == 0 && r.unhappy0 == 0.0));
    }

    #[test]
    fn deterministic_and_job_independent() {
        let a = to_csv(&run_sweep(&small()).unwrap().rows);
        let b = to_csv(&run_sweep(&SweepSpec { jobs: Some(1), ..small() }).unwrap().rows);
        let c = to_csv(&run_sweep(&SweepSpec { jobs: Some(3), ..small() }).unwrap().rows);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(a.lines().count(), 7);
        let seeds: std::collections::BTreeSet<&str> = a.lines().skip(1).map(|l| l.split(',').nth(6).unwrap()).collect();
        assert_eq!(seeds.len(), 6);
    }

    #[test]
    fn invalid_specs() {
        assert!(run_sweep(&SweepSpec { replicates: 0, ..small() }).is_err());
        assert!(run_sweep(&SweepSpec { n: vec![7], ..small() }).is_err());
        assert!(run_sweep(&SweepSpec { jobs: Some(0), ..small() }).is_err());
        let agg = aggregate(&small(), &run_sweep(&small()).unwrap().rows);
        assert_eq!(agg.len(), 2);
        assert!(agg.iter().all(|a| a.runs == 3));
    }
}
