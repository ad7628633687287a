//! Monochromatic and almost-monochromatic square regions.
//!
//! Regions are `(2ρ+1)`-squares with `2ρ+1 <= n`, so a square never wraps
//! onto itself. The per-agent quantities are derived from per-center maps:
//! if `q(c)` is the largest qualifying radius centered on `c`, the largest
//! qualifying square containing `u` has radius `max { q(c) : d(u,c) <= q(c) }`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::{torus_linf, Cell, GridState, Spin};
use crate::prefix::{PlusPrefix, Rect};
use crate::rng::{self, SimRng};
use crate::unionfind::UnionFind;

pub const DEFAULT_EPSILON: f64 = 0.25;
pub const DEFAULT_SAMPLE_SIZE: usize = 1024;

pub fn max_radius(n: usize) -> usize {
    (n - 1) / 2
}

/// Per-center radius map on an `n x n` torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusMap {
    n: usize,
    radii: Vec<usize>,
}

impl RadiusMap {
    pub fn from_radii(n: usize, radii: Vec<usize>) -> Self {
        assert_eq!(radii.len(), n * n);
        RadiusMap { n, radii }
    }

    pub fn radius_at(&self, c: Cell) -> usize {
        self.radii[c.row * self.n + c.col]
    }

    pub fn radii(&self) -> &[usize] {
        &self.radii
    }

    pub fn max(&self) -> usize {
        self.radii.iter().copied().max().unwrap_or(0)
    }

    /// `max { r(c) : d(u,c) <= r(c) }` together with the first maximizing
    /// center in row-major order, scanning only centers within `max()` of `u`.
    pub fn containing(&self, u: Cell) -> (usize, Cell) {
        let n = self.n;
        let reach = self.max() as i64;
        let mut best = (self.radius_at(u), u);
        let mut best_key = (u.row, u.col);
        for dr in -reach..=reach {
            for dc in -reach..=reach {
                let c = u.offset(dr, dc, n);
                let r = self.radius_at(c);
                if r < best.0 || torus_linf(u, c, n) > r {
                    continue;
                }
                let key = (c.row, c.col);
                if r > best.0 || key < best_key {
                    best = (r, c);
                    best_key = key;
                }
            }
        }
        best
    }

    /// Exact containing radius for every agent: centers processed by
    /// descending radius, each cell stamped once (per-row next-free links).
    pub fn containing_all(&self) -> Vec<usize> {
        let n = self.n;
        let mut order: Vec<usize> = (0..n * n).collect();
        order.sort_by(|&a, &b| self.radii[b].cmp(&self.radii[a]).then(a.cmp(&b)));
        let mut out = vec![usize::MAX; n * n];
        // next[row][col] = smallest unstamped col >= col, n if none
        let mut next: Vec<u32> = (0..n).flat_map(|_| 0..=n as u32).collect();
        let stride = n + 1;
        fn find(next: &mut [u32], base: usize, mut x: usize) -> usize {
            while next[base + x] as usize != x {
                let nx = next[base + next[base + x] as usize];
                next[base + x] = nx;
                x = nx as usize;
            }
            x
        }
        let mut remaining = n * n;
        for idx in order {
            if remaining == 0 {
                break;
            }
            let r = self.radii[idx] as i64;
            let (row, col) = ((idx / n) as i64, (idx % n) as i64);
            let lo = (col - r).rem_euclid(n as i64) as usize;
            let width = (2 * r + 1) as usize;
            let spans: [(usize, usize); 2] = if lo + width <= n {
                [(lo, lo + width), (0, 0)]
            } else {
                [(lo, n), (0, lo + width - n)]
            };
            for dr in -r..=r {
                let rr = (row + dr).rem_euclid(n as i64) as usize;
                let base = rr * stride;
                for &(a, b) in &spans {
                    let mut x = find(&mut next, base, a);
                    while x < b {
                        out[rr * n + x] = r as usize;
                        remaining -= 1;
                        next[base + x] = (x + 1) as u32;
                        x = find(&mut next, base, x + 1);
                    }
                }
            }
        }
        out
    }
}

fn is_mono(prefix: &PlusPrefix, c: Cell, r: usize) -> bool {
    let rect = Rect::square(c, r);
    let plus = prefix.count(rect) as usize;
    plus == 0 || plus == rect.area()
}

/// `r(c)` for every center: largest radius whose square is single-type.
pub fn center_radius_map(state: &GridState) -> RadiusMap {
    let n = state.n();
    let prefix = state.plus_prefix();
    let rmax = max_radius(n);
    let radii = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let c = Cell::new(idx / n, idx % n);
            // monotone predicate: largest r in [0, rmax] with is_mono
            let (mut lo, mut hi) = (0usize, rmax);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if is_mono(&prefix, c, mid) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            lo
        })
        .collect();
    RadiusMap { n, radii }
}

/// Radius and size of the largest monochromatic square containing `u`.
pub fn mono_region_of(state: &GridState, u: Cell) -> (usize, usize) {
    let (r, _) = center_radius_map(state).containing(u);
    (r, (2 * r + 1) * (2 * r + 1))
}

/// `e^{-N^eps}` with `N` the agents' neighborhood size.
pub fn almost_mono_threshold(big_n: usize, epsilon: f64) -> f64 {
    (-(big_n as f64).powf(epsilon)).exp()
}

/// Minority/majority ratio of two counts; zero minority gives 0.
pub fn minority_ratio(plus: usize, minus: usize) -> f64 {
    let (lo, hi) = if plus < minus { (plus, minus) } else { (minus, plus) };
    if lo == 0 {
        0.0
    } else {
        lo as f64 / hi as f64
    }
}

fn qualifies(prefix: &PlusPrefix, c: Cell, r: usize, threshold: f64) -> bool {
    let rect = Rect::square(c, r);
    let plus = prefix.count(rect) as usize;
    minority_ratio(plus, rect.area() - plus) <= threshold
}

/// `q(c)` for every center: the largest radius whose square has
/// minority/majority ratio at most `e^{-N^eps}`. Not monotone in the
/// radius, so every radius is examined from the top down.
pub fn almost_mono_center_map(state: &GridState, epsilon: f64) -> RadiusMap {
    let n = state.n();
    let prefix = state.plus_prefix();
    let threshold = almost_mono_threshold(state.neighborhood_size(), epsilon);
    let rmax = max_radius(n);
    let radii = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let c = Cell::new(idx / n, idx % n);
            (0..=rmax).rev().find(|&r| qualifies(&prefix, c, r, threshold)).unwrap_or(0)
        })
        .collect();
    RadiusMap { n, radii }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlmostMono {
    pub radius: usize,
    pub size: usize,
    pub minority_ratio: f64,
}

fn almost_from_map(prefix: &PlusPrefix, map: &RadiusMap, u: Cell) -> AlmostMono {
    let (radius, center) = map.containing(u);
    let rect = Rect::square(center, radius);
    let plus = prefix.count(rect) as usize;
    AlmostMono { radius, size: rect.area(), minority_ratio: minority_ratio(plus, rect.area() - plus) }
}

/// Largest almost-monochromatic square containing `u`.
pub fn almost_mono_radius_of(state: &GridState, u: Cell, epsilon: f64) -> AlmostMono {
    let map = almost_mono_center_map(state, epsilon);
    almost_from_map(&state.plus_prefix(), &map, u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargestRegion {
    pub center: Cell,
    pub radius: usize,
}

fn largest_in_map(state: &GridState, map: &RadiusMap, spin: Spin) -> Option<LargestRegion> {
    let mut best: Option<LargestRegion> = None;
    for (idx, &r) in map.radii().iter().enumerate() {
        if state.types()[idx] != spin {
            continue;
        }
        if best.is_none_or(|b| r > b.radius) {
            best = Some(LargestRegion { center: state.cell(idx), radius: r });
        }
    }
    best
}

/// Largest monochromatic square of the given type; ties go to the first
/// center in row-major order. `None` if no agent has that type.
pub fn largest_mono_region(state: &GridState, spin: Spin) -> Option<LargestRegion> {
    largest_in_map(state, &center_radius_map(state), spin)
}

/// Largest 4-connected same-type cluster per type. Auxiliary statistic;
/// the segregation measures above use squares only.
pub fn largest_clusters(state: &GridState) -> (usize, usize) {
    let n = state.n();
    let t = state.types();
    let mut uf = UnionFind::new(n * n);
    for idx in 0..n * n {
        let (r, c) = (idx / n, idx % n);
        let right = r * n + (c + 1) % n;
        let down = ((r + 1) % n) * n + c;
        if t[idx] == t[right] {
            uf.union(idx, right);
        }
        if t[idx] == t[down] {
            uf.union(idx, down);
        }
    }
    let mut plus = 0;
    let mut minus = 0;
    for (idx, spin) in t.iter().enumerate() {
        let s = uf.component_size(idx);
        match spin {
            Spin::Plus => plus = plus.max(s),
            Spin::Minus => minus = minus.max(s),
        }
    }
    (plus, minus)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSampling {
    pub sample_size: usize,
    pub epsilon: f64,
    /// Seed for the agent sample (drawn on the measurement stream).
    pub seed: u64,
}

impl RegionSampling {
    pub fn new(seed: u64) -> Self {
        RegionSampling { sample_size: DEFAULT_SAMPLE_SIZE, epsilon: DEFAULT_EPSILON, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledRegion {
    pub agent: Cell,
    pub m_radius: usize,
    pub m_size: usize,
    pub mprime_radius: usize,
    pub mprime_size: usize,
    pub mprime_minority_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub epsilon: f64,
    pub sample_size: usize,
    pub largest_plus: Option<LargestRegion>,
    pub largest_minus: Option<LargestRegion>,
    pub mean_m: f64,
    pub stderr_m: f64,
    pub mean_mprime: f64,
    pub stderr_mprime: f64,
    /// Sampled M sizes -> number of sampled agents.
    pub m_histogram: BTreeMap<usize, usize>,
    pub samples: Vec<SampledRegion>,
    /// Largest 4-connected clusters (auxiliary, not square regions).
    pub aux_largest_cluster_plus: usize,
    pub aux_largest_cluster_minus: usize,
}

pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample `sample_size` uniform agents plus the global argmax center and
/// measure M and M' for each.
pub fn summarize(state: &GridState, sampling: &RegionSampling) -> RegionSummary {
    let n = state.n();
    let prefix = state.plus_prefix();
    let mono = center_radius_map(state);
    let almost = almost_mono_center_map(state, sampling.epsilon);
    let largest_plus = largest_in_map(state, &mono, Spin::Plus);
    let largest_minus = largest_in_map(state, &mono, Spin::Minus);

    let mut rng: SimRng = rng::stream_rng(sampling.seed, rng::MEASURE_STREAM);
    let mut agents: Vec<Cell> = (0..sampling.sample_size)
        .map(|_| Cell::new(rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    let global = [largest_plus, largest_minus].into_iter().flatten().max_by(|a, b| {
        a.radius.cmp(&b.radius).then((b.center.row, b.center.col).cmp(&(a.center.row, a.center.col)))
    });
    if let Some(g) = global {
        agents.push(g.center);
    }

    let samples: Vec<SampledRegion> = agents
        .par_iter()
        .map(|&u| {
            let (m_radius, _) = mono.containing(u);
            let a = almost_from_map(&prefix, &almost, u);
            SampledRegion {
                agent: u,
                m_radius,
                m_size: (2 * m_radius + 1) * (2 * m_radius + 1),
                mprime_radius: a.radius,
                mprime_size: a.size,
                mprime_minority_ratio: a.minority_ratio,
            }
        })
        .collect();
    let m: Vec<f64> = samples.iter().map(|s| s.m_size as f64).collect();
    let mp: Vec<f64> = samples.iter().map(|s| s.mprime_size as f64).collect();
    let (mean_m, stderr_m) = mean_stderr(&m);
    let (mean_mprime, stderr_mprime) = mean_stderr(&mp);
    let mut m_histogram = BTreeMap::new();
    for s in &samples {
        *m_histogram.entry(s.m_size).or_insert(0) += 1;
    }
    let (aux_plus, aux_minus) = largest_clusters(state);
    RegionSummary {
        epsilon: sampling.epsilon,
        sample_size: sampling.sample_size,
        largest_plus,
        largest_minus,
        mean_m,
        stderr_m,
        mean_mprime,
        stderr_mprime,
        m_histogram,
        samples,
        aux_largest_cluster_plus: aux_plus,
        aux_largest_cluster_minus: aux_minus,
    }
}
