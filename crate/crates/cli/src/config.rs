//! Config file format and the effective configs of each subcommand.
//!
//! The file is TOML with one optional table per subcommand (`[run]`,
//! `[sweep]`, `[detect]`, `[theory]`, `[percolation]`, `[stats]`). Keys
//! mirror the long flag names with `-` replaced by `_`; flags win.
//! Output paths are accepted but not echoed, so the config hash depends
//! only on what determines the results.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use schelling_core::regions::{DEFAULT_EPSILON, DEFAULT_SAMPLE_SIZE};
use schelling_core::structures::DetectSpec;
use schelling_core::sweep::SweepSpec;

/// Marks errors caused by bad input rather than failed work.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub run: RunConfig,
    pub sweep: SweepConfig,
    pub detect: DetectConfig,
    pub theory: TheoryConfig,
    pub percolation: PercolationConfig,
    pub stats: StatsConfig,
}

pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| config_error(format!("malformed config {}: {e}", path.display())))
}

/// Overwrite `$target` with `$value` when the flag was given.
macro_rules! set {
    ($target:expr, $value:expr) => {
        if let Some(v) = $value {
            $target = v;
        }
    };
}
pub(crate) use set;

/// Same as `set!` for optional config fields.
macro_rules! set_some {
    ($target:expr, $value:expr) => {
        if let Some(v) = $value {
            $target = Some(v);
        }
    };
}
pub(crate) use set_some;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub w: usize,
    pub tau: f64,
    pub p: f64,
    pub seed: u64,
    pub allow_small_grid: bool,
    /// Start from a snapshot instead of a random grid.
    pub snapshot_in: Option<PathBuf>,
    pub max_flips: Option<u64>,
    pub max_time: Option<f64>,
    /// Flips between trace points; defaults to n²/10.
    pub record_interval: Option<u64>,
    pub measure: bool,
    pub sample_size: usize,
    pub epsilon: f64,
    pub timing: bool,
    #[serde(skip_serializing)]
    pub report_out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub trace_out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub snapshot_out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 128,
            w: 2,
            tau: 0.45,
            p: 0.5,
            seed: 0,
            allow_small_grid: false,
            snapshot_in: None,
            max_flips: None,
            max_time: None,
            record_interval: None,
            measure: true,
            sample_size: DEFAULT_SAMPLE_SIZE,
            epsilon: DEFAULT_EPSILON,
            timing: false,
            report_out: None,
            trace_out: None,
            snapshot_out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub tau: Vec<f64>,
    pub w: Vec<usize>,
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[serde(skip_serializing)]
    pub jobs: Option<usize>,
    pub sample_size: usize,
    pub epsilon: f64,
    pub max_flips: Option<u64>,
    pub allow_small_grid: bool,
    #[serde(skip_serializing)]
    pub csv_out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub report_out: Option<PathBuf>,
    /// Per-run reports as a JSON array.
    #[serde(skip_serializing)]
    pub runs_out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let d = SweepSpec::default();
        SweepConfig {
            tau: d.tau_tilde,
            w: d.w,
            n: d.n,
            p: d.p,
            replicates: d.replicates,
            seed: d.base_seed,
            jobs: d.jobs,
            sample_size: d.sample_size,
            epsilon: d.epsilon,
            max_flips: d.max_flips,
            allow_small_grid: d.allow_small_grid,
            csv_out: None,
            report_out: None,
            runs_out: None,
        }
    }
}

impl SweepConfig {
    pub fn spec(&self) -> SweepSpec {
        SweepSpec {
            tau_tilde: self.tau.clone(),
            w: self.w.clone(),
            n: self.n.clone(),
            p: self.p.clone(),
            replicates: self.replicates,
            base_seed: self.seed,
            jobs: self.jobs,
            sample_size: self.sample_size,
            epsilon: self.epsilon,
            max_flips: self.max_flips,
            allow_small_grid: self.allow_small_grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectConfig {
    /// Analyse this snapshot; otherwise a random grid is generated.
    pub snapshot_in: Option<PathBuf>,
    pub n: usize,
    pub w: usize,
    pub tau: f64,
    pub p: f64,
    pub seed: u64,
    pub allow_small_grid: bool,
    /// Run the dynamics to termination before detecting.
    pub terminate: bool,
    pub spec: DetectSpec,
    #[serde(skip_serializing)]
    pub report_out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub snapshot_out: Option<PathBuf>,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            snapshot_in: None,
            n: 128,
            w: 2,
            tau: 0.45,
            p: 0.5,
            seed: 0,
            allow_small_grid: false,
            terminate: false,
            spec: DetectSpec::default(),
            report_out: None,
            snapshot_out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheoryConfig {
    pub curve: String,
    pub tau_from: f64,
    pub tau_to: f64,
    pub step: f64,
    /// Neighborhood size; must be an odd square.
    #[serde(rename = "N")]
    pub big_n: usize,
    pub eps: f64,
    pub slack: f64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub report_out: Option<PathBuf>,
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig {
            curve: "f".into(),
            tau_from: 0.35,
            tau_to: 0.5,
            step: 0.005,
            big_n: 441,
            eps: 0.1,
            slack: 0.0,
            out: None,
            report_out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PercolationConfig {
    pub mode: String,
    pub samples: u64,
    pub seed: u64,
    pub p: f64,
    /// Side of the square lattice (chemdist, radius, circuit).
    pub size: usize,
    /// Endpoints for chemdist; default to the quarter points of the diagonal.
    pub from: Option<[usize; 2]>,
    pub to: Option<[usize; 2]>,
    /// Horizontal distance for fpp.
    pub k: usize,
    pub mean: f64,
    /// Strip height for fpp; defaults to 2⌈1.5 k^{2/3}⌉+1.
    pub height: Option<usize>,
    pub r_inner: usize,
    pub r_outer: usize,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub report_out: Option<PathBuf>,
}

impl Default for PercolationConfig {
    fn default() -> Self {
        PercolationConfig {
            mode: "chemdist".into(),
            samples: 100,
            seed: 0,
            p: 0.95,
            size: 200,
            from: None,
            to: None,
            k: 100,
            mean: 1.0,
            height: None,
            r_inner: 30,
            r_outer: 90,
            out: None,
            report_out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsConfig {
    pub test: String,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub gamma: f64,
    pub tau: f64,
    pub c: f64,
    pub eps: f64,
    pub samples: u64,
    pub seed: u64,
    /// Pass floor; defaults to 0.99 (prop1) or 0.999 (lemmaA1).
    pub floor: Option<f64>,
    /// `rejection` or `exact`.
    pub conditioning: String,
    pub max_draws: u64,
    pub n: usize,
    pub w: usize,
    pub sigmas: f64,
    /// Sweep CSV for fig2-trend.
    pub csv_in: Option<PathBuf>,
    pub alpha: f64,
    #[serde(skip_serializing)]
    pub report_out: Option<PathBuf>,
}

impl Default for StatsConfig {
    fn default() -> Self {
        StatsConfig {
            test: "prop1".into(),
            big_n: 441,
            gamma: 0.25,
            tau: 0.45,
            c: 2.0,
            eps: 0.1,
            samples: 10_000,
            seed: 0,
            floor: None,
            conditioning: "rejection".into(),
            max_draws: 100_000_000,
            n: 1024,
            w: 1,
            sigmas: 3.0,
            csv_in: None,
            alpha: 0.05,
            report_out: None,
        }
    }
}
