//! Site percolation and site first-passage utilities on planar lattices.

pub mod circuit;
pub(crate) mod cluster;
mod fpp;

use std::collections::VecDeque;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub use circuit::AnnulusWindow;
pub use cluster::{cluster_radii, cluster_radius_tail, log_linear_fit, origin_radius, LinearFit, TailPoint};
pub use fpp::{fpp_min_passage_time, fpp_reference};

pub type Site = (usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteLattice {
    pub rows: usize,
    pub cols: usize,
    pub open: Vec<bool>,
    pub p: f64,
    pub seed: u64,
}

impl SiteLattice {
    /// I.i.d. Bernoulli(p) sites drawn row-major from the seed's first stream.
    pub fn random(rows: usize, cols: usize, p: f64, seed: u64) -> Self {
        let mut rng = rng::stream_rng(seed, rng::INIT_STREAM);
        let open = (0..rows * cols).map(|_| rng.random_bool(p)).collect();
        SiteLattice { rows, cols, open, p, seed }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let open = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        SiteLattice { rows, cols, open, p: f64::NAN, seed: 0 }
    }

    #[inline]
    pub fn is_open(&self, s: Site) -> bool {
        self.open[s.0 * self.cols + s.1]
    }

    pub fn contains(&self, s: Site) -> bool {
        s.0 < self.rows && s.1 < self.cols
    }

    pub(crate) fn neighbors4(&self, s: Site) -> impl Iterator<Item = Site> + '_ {
        let (r, c) = (s.0 as i64, s.1 as i64);
        [(-1, 0), (1, 0), (0, -1), (0, 1)].into_iter().filter_map(move |(a, b)| {
            let (nr, nc) = (r + a, c + b);
            (nr >= 0 && nc >= 0 && (nr as usize) < self.rows && (nc as usize) < self.cols)
                .then_some((nr as usize, nc as usize))
        })
    }

    /// Window of offsets `<= outer` around `center`; sites off the lattice are closed.
    pub fn window(&self, center: Site, outer: usize) -> AnnulusWindow {
        AnnulusWindow::new(outer, |dr, dc| {
            let r = center.0 as i64 + dr;
            let c = center.1 as i64 + dc;
            r >= 0 && c >= 0 && (r as usize) < self.rows && (c as usize) < self.cols && self.open[r as usize * self.cols + c as usize]
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightDistribution {
    Exponential { mean: f64 },
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightLattice {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub distribution: WeightDistribution,
}

impl WeightLattice {
    pub fn exponential(rows: usize, cols: usize, mean: f64, seed: u64) -> Self {
        let mut rng = rng::stream_rng(seed, rng::INIT_STREAM);
        let weights = (0..rows * cols).map(|_| mean * rng.sample::<f64, _>(Exp1)).collect();
        WeightLattice { rows, cols, weights, distribution: WeightDistribution::Exponential { mean } }
    }

    pub fn constant(rows: usize, cols: usize, value: f64) -> Self {
        WeightLattice { rows, cols, weights: vec![value; rows * cols], distribution: WeightDistribution::Constant { value } }
    }

    #[inline]
    pub fn weight(&self, s: Site) -> f64 {
        self.weights[s.0 * self.cols + s.1]
    }
}

/// Vertex count of the shortest open 4-path from `a` to `b`.
pub fn chemical_distance(lattice: &SiteLattice, a: Site, b: Site) -> Option<usize> {
    if !lattice.is_open(a) || !lattice.is_open(b) {
        return None;
    }
    let cols = lattice.cols;
    let mut dist = vec![u32::MAX; lattice.rows * cols];
    dist[a.0 * cols + a.1] = 1;
    let mut queue = VecDeque::from([a]);
    while let Some(s) = queue.pop_front() {
        let d = dist[s.0 * cols + s.1];
        if s == b {
            return Some(d as usize);
        }
        for t in lattice.neighbors4(s) {
            let ti = t.0 * cols + t.1;
            if lattice.open[ti] && dist[ti] == u32::MAX {
                dist[ti] = d + 1;
                queue.push_back(t);
            }
        }
    }
    None
}

/// Whether an open 4-circuit inside the square annulus
/// `r_inner <= d_inf(center, .) <= r_outer` surrounds `center`.
pub fn surrounding_circuit_exists(lattice: &SiteLattice, center: Site, r_inner: usize, r_outer: usize) -> Result<bool> {
    if r_inner == 0 || r_inner > r_outer {
        return Err(Error::Domain(format!("annulus radii {r_inner}..{r_outer}")));
    }
    if center.0 < r_outer || center.1 < r_outer || center.0 + r_outer >= lattice.rows || center.1 + r_outer >= lattice.cols {
        return Err(Error::RegionTooLarge { radius: r_outer, n: lattice.rows.min(lattice.cols) });
    }
    Ok(lattice.window(center, r_outer).circuit_exists(r_inner))
}
