use serde::{Deserialize, Serialize};

use super::{Site, SiteLattice};
use crate::unionfind::UnionFind;

/// Extremes of `r + c` and `r - c` over one component, enough to get the
/// largest l1 distance from any point in O(1).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extents {
    max_sum: i64,
    min_sum: i64,
    max_diff: i64,
    min_diff: i64,
    pub(crate) root: usize,
}

impl Extents {
    fn new(r: i64, c: i64, idx: usize) -> Self {
        Extents { max_sum: r + c, min_sum: r + c, max_diff: r - c, min_diff: r - c, root: idx }
    }

    fn absorb(&mut self, o: &Extents) {
        self.max_sum = self.max_sum.max(o.max_sum);
        self.min_sum = self.min_sum.min(o.min_sum);
        self.max_diff = self.max_diff.max(o.max_diff);
        self.min_diff = self.min_diff.min(o.min_diff);
        self.root = self.root.min(o.root);
    }

    pub(crate) fn l1_radius_from(&self, r: i64, c: i64) -> usize {
        let (s, d) = (r + c, r - c);
        (self.max_sum - s).max(s - self.min_sum).max(self.max_diff - d).max(d - self.min_diff) as usize
    }
}

/// Components of the `true` sites of a planar mask; `diagonal` selects
/// 8-adjacency. Returns the component label of every site (`usize::MAX`
/// for `false` sites) and the extents indexed by label.
pub(crate) fn components(rows: usize, cols: usize, mask: &[bool], diagonal: bool) -> (Vec<usize>, Vec<Extents>) {
    let mut uf = UnionFind::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if !mask[i] {
                continue;
            }
            if c + 1 < cols && mask[i + 1] {
                uf.union(i, i + 1);
            }
            if r + 1 < rows {
                if mask[i + cols] {
                    uf.union(i, i + cols);
                }
                if diagonal {
                    if c + 1 < cols && mask[i + cols + 1] {
                        uf.union(i, i + cols + 1);
                    }
                    if c > 0 && mask[i + cols - 1] {
                        uf.union(i, i + cols - 1);
                    }
                }
            }
        }
    }
    let mut label = vec![usize::MAX; rows * cols];
    let mut root_label = vec![usize::MAX; rows * cols];
    let mut extents: Vec<Extents> = Vec::new();
    for i in 0..rows * cols {
        if !mask[i] {
            continue;
        }
        let root = uf.find(i);
        let (r, c) = ((i / cols) as i64, (i % cols) as i64);
        let e = Extents::new(r, c, i);
        if root_label[root] == usize::MAX {
            root_label[root] = extents.len();
            extents.push(e);
        } else {
            extents[root_label[root]].absorb(&e);
        }
        label[i] = root_label[root];
    }
    (label, extents)
}

/// Largest l1 distance from each open site to a site of its open 4-cluster;
/// `None` for closed sites.
pub fn cluster_radii(lattice: &SiteLattice) -> Vec<Option<usize>> {
    let (label, ext) = components(lattice.rows, lattice.cols, &lattice.open, false);
    (0..label.len())
        .map(|i| {
            (label[i] != usize::MAX)
                .then(|| ext[label[i]].l1_radius_from((i / lattice.cols) as i64, (i % lattice.cols) as i64))
        })
        .collect()
}

pub fn origin_radius(lattice: &SiteLattice, origin: Site) -> Option<usize> {
    cluster_radii(lattice)[origin.0 * lattice.cols + origin.1]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub k: usize,
    pub count: u64,
    pub prob: f64,
}

/// Empirical `P(radius >= k)` for `k = 0..=k_max`, every open site of every
/// lattice taken as an origin.
pub fn cluster_radius_tail(lattices: &[SiteLattice], k_max: usize) -> (u64, Vec<TailPoint>) {
    let mut hist = vec![0u64; k_max + 2];
    let mut origins = 0u64;
    for l in lattices {
        for r in cluster_radii(l).into_iter().flatten() {
            origins += 1;
            hist[r.min(k_max + 1)] += 1;
        }
    }
    let mut tail = vec![0u64; k_max + 2];
    let mut acc = 0;
    for k in (0..k_max + 2).rev() {
        acc += hist[k];
        tail[k] = acc;
    }
    let points = (0..=k_max)
        .map(|k| TailPoint { k, count: tail[k], prob: if origins == 0 { 0.0 } else { tail[k] as f64 / origins as f64 } })
        .collect();
    (origins, points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least squares of `ln prob` against `k` over points in `[k_lo, k_hi]`
/// whose count is at least `min_count`.
pub fn log_linear_fit(points: &[TailPoint], k_lo: usize, k_hi: usize, min_count: u64) -> Option<LinearFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.k >= k_lo && p.k <= k_hi && p.count >= min_count && p.prob > 0.0)
        .map(|p| (p.k as f64, p.prob.ln()))
        .collect();
    if xy.len() < 3 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r_squared, points: xy.len() })
}
