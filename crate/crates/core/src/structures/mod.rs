//! Detectors for the geometric constructions used in segregation
//! arguments: radical and unhappy regions, firewalls, regions of
//! expansion, block renormalization and chemical paths.

pub mod blocks;
pub mod chemical;
pub mod expansion;
pub mod firewall;
pub mod radical;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{Cell, GridState};

pub use blocks::{bad_cluster_radii, classify_block_good, default_block_size, renormalize, BlockLabel, BlockLattice};
pub use chemical::{find_chemical_path, ChemicalPath};
pub use expansion::{is_region_of_expansion, ExpansionCheck, Placement};
pub use firewall::{annulus_cells, firewall_check, firewall_unconditionally_stable, is_firewall, FirewallCheck};
pub use radical::{
    is_expandable, is_radical_region, is_unhappy_region, radical_check, unhappy_check, ExpandCheck, RadicalSpec,
    ThresholdCheck,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectSpec {
    pub eps_prime: f64,
    pub eps: f64,
    /// Scan every `stride`-th row and column for radical centers.
    pub stride: usize,
    /// Detailed records (unhappy region, expandability, firewalls) kept
    /// for at most this many radical centers.
    pub max_detections: usize,
    pub expand: bool,
    pub max_flips: Option<usize>,
    pub firewall_radii: Vec<usize>,
    pub block_size: Option<usize>,
    pub block_origin: Cell,
    pub chemical_radius: Option<usize>,
}

impl Default for DetectSpec {
    fn default() -> Self {
        DetectSpec {
            eps_prime: 0.35,
            eps: 0.1,
            stride: 1,
            max_detections: 100,
            expand: true,
            max_flips: None,
            firewall_radii: Vec::new(),
            block_size: None,
            block_origin: Cell::new(0, 0),
            chemical_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadicalDetection {
    pub center: Cell,
    pub radical: ThresholdCheck,
    pub unhappy: ThresholdCheck,
    pub expand: Option<ExpandCheck>,
    pub firewalls: Vec<FirewallCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub block_size: usize,
    pub rows: usize,
    pub cols: usize,
    pub origin: Cell,
    pub good: usize,
    pub bad: usize,
    pub size_overridden: bool,
    pub bad_cluster_radii: Vec<usize>,
    pub chemical_path: Option<ChemicalPath>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectReport {
    pub spec: DetectSpec,
    pub centers_scanned: usize,
    pub radical_count: usize,
    pub eps_prime_below_f: bool,
    pub threshold: i64,
    pub radius: usize,
    pub detections: Vec<RadicalDetection>,
    pub blocks: Option<BlockSummary>,
    pub notes: Vec<String>,
}

/// Scan a state with every detector under one spec.
pub fn detect(state: &GridState, spec: &DetectSpec) -> Result<DetectReport> {
    let n = state.n();
    let stride = spec.stride.max(1);
    let prefix = state.plus_prefix();
    let centers: Vec<Cell> =
        (0..n).step_by(stride).flat_map(|r| (0..n).step_by(stride).map(move |c| Cell::new(r, c))).collect();
    let probe = RadicalSpec::new(Cell::new(0, 0), spec.eps_prime, spec.eps);
    let geometry = probe.geometry(state)?;
    let radical: Vec<(Cell, ThresholdCheck)> = centers
        .par_iter()
        .map(|&c| radical::radical_with_prefix(state, &prefix, &RadicalSpec { center: c, ..probe }).map(|chk| (c, chk)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, chk)| chk.verdict)
        .collect();
    let mut notes = Vec::new();
    if probe.below_f_tau(state) {
        notes.push("eps' <= f(tau): radical regions are not expected to expand".to_string());
    }
    if geometry.threshold <= 0 {
        notes.push("radical threshold is non-positive".to_string());
    }
    if geometry.unhappy_bound <= 0 {
        notes.push("unhappy-region bound is non-positive; those verdicts are vacuous".to_string());
    }
    if state.config().tau() > 0.5 {
        notes.push("tau > 1/2: a negative expandability verdict is not a proof".to_string());
    }
    let detections = radical
        .iter()
        .take(spec.max_detections)
        .map(|&(center, chk)| {
            let s = RadicalSpec { center, ..probe };
            Ok(RadicalDetection {
                center,
                radical: chk,
                unhappy: unhappy_check(state, &s)?,
                expand: if spec.expand { Some(is_expandable(state, &s, spec.max_flips)?) } else { None },
                firewalls: spec
                    .firewall_radii
                    .iter()
                    .map(|&r| firewall_check(state, center, r))
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let blocks = match spec.block_size {
        None => None,
        Some(m) => {
            let lat = renormalize(state, m, spec.eps, spec.block_origin);
            if lat.size_overridden {
                notes.push(format!("block size {m} overrides the default 6w^3 = {}", default_block_size(state.w())));
            }
            let chemical_path = match spec.chemical_radius {
                Some(r) => find_chemical_path(&lat, (lat.rows / 2, lat.cols / 2), r)?,
                None => None,
            };
            Some(BlockSummary {
                block_size: m,
                rows: lat.rows,
                cols: lat.cols,
                origin: lat.origin,
                good: lat.good_count(),
                bad: lat.labels.len() - lat.good_count(),
                size_overridden: lat.size_overridden,
                bad_cluster_radii: bad_cluster_radii(&lat),
                chemical_path,
            })
        }
    };
    Ok(DetectReport {
        spec: spec.clone(),
        centers_scanned: centers.len(),
        radical_count: radical.len(),
        eps_prime_below_f: probe.below_f_tau(state),
        threshold: geometry.threshold,
        radius: geometry.radius,
        detections,
        blocks,
        notes,
    })
}
