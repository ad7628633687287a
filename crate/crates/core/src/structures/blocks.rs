use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::{Cell, GridState};
use crate::percolation::cluster::components;
use crate::percolation::SiteLattice;
use crate::prefix::{PlusPrefix, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockLabel {
    Good,
    Bad,
}

/// Planar tiling of the torus by `m x m` blocks starting at `origin`;
/// blocks that would wrap past the last row or column are left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockLattice {
    pub block_size: usize,
    pub rows: usize,
    pub cols: usize,
    pub origin: Cell,
    pub eps: f64,
    /// `block_size` differs from the default `6 w^3`.
    pub size_overridden: bool,
    pub labels: Vec<BlockLabel>,
}

impl BlockLattice {
    pub fn label(&self, br: usize, bc: usize) -> BlockLabel {
        self.labels[br * self.cols + bc]
    }

    pub fn is_good(&self, br: usize, bc: usize) -> bool {
        self.label(br, bc) == BlockLabel::Good
    }

    pub fn top_left(&self, br: usize, bc: usize) -> Cell {
        Cell::new(self.origin.row + br * self.block_size, self.origin.col + bc * self.block_size)
    }

    pub fn good_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == BlockLabel::Good).count()
    }

    /// Good blocks as open sites.
    pub fn to_site_lattice(&self) -> SiteLattice {
        SiteLattice::from_fn(self.rows, self.cols, |r, c| self.is_good(r, c))
    }

    pub fn from_labels(rows: usize, cols: usize, good: impl Fn(usize, usize) -> bool) -> Self {
        BlockLattice {
            block_size: 1,
            rows,
            cols,
            origin: Cell::new(0, 0),
            eps: f64::NAN,
            size_overridden: true,
            labels: (0..rows * cols)
                .map(|i| if good(i / cols, i % cols) { BlockLabel::Good } else { BlockLabel::Bad })
                .collect(),
        }
    }
}

pub fn default_block_size(w: usize) -> usize {
    6 * w * w * w
}

fn block_good(prefix: &PlusPrefix, w: usize, big_n: usize, top_left: Cell, m: usize, eps: f64) -> bool {
    let bound = (big_n as f64).powf(0.5 + eps);
    let (top, left) = (top_left.row as i64, top_left.col as i64);
    let (wi, mi) = (w as i64, m as i64);
    // every (2w+1)-square whose center lies within w of the block
    for cr in -wi..mi + wi {
        let (r0, r1) = ((cr - wi).max(0), (cr + wi).min(mi - 1));
        for cc in -wi..mi + wi {
            let (c0, c1) = ((cc - wi).max(0), (cc + wi).min(mi - 1));
            let rect = Rect::new(top + r0, left + c0, (r1 - r0 + 1) as usize, (c1 - c0 + 1) as usize);
            let minus = prefix.minus_count(rect) as f64;
            if minus - rect.area() as f64 / 2.0 >= bound {
                return false;
            }
        }
    }
    true
}

/// Good iff `W_I - N_I/2 < N^{1/2+eps}` for every intersection `I` of the
/// `m`-block at `top_left` with a `(2w+1)`-square translate, where `W_I`
/// counts `-1` agents and `N_I` cells.
pub fn classify_block_good(state: &GridState, top_left: Cell, m: usize, eps: f64) -> bool {
    block_good(&state.plus_prefix(), state.w(), state.neighborhood_size(), top_left, m, eps)
}

pub fn renormalize(state: &GridState, m: usize, eps: f64, origin: Cell) -> BlockLattice {
    assert!(m >= 1);
    let n = state.n();
    let rows = (n - origin.row.min(n)) / m;
    let cols = (n - origin.col.min(n)) / m;
    let prefix = state.plus_prefix();
    let (w, big_n) = (state.w(), state.neighborhood_size());
    let labels = (0..rows * cols)
        .into_par_iter()
        .map(|i| {
            let tl = Cell::new(origin.row + (i / cols) * m, origin.col + (i % cols) * m);
            if block_good(&prefix, w, big_n, tl, m, eps) {
                BlockLabel::Good
            } else {
                BlockLabel::Bad
            }
        })
        .collect();
    BlockLattice { block_size: m, rows, cols, origin, eps, size_overridden: m != default_block_size(w), labels }
}

/// 8-connected clusters of Bad blocks, in row-major order of their first
/// block; each radius is the largest l1 distance from that first block.
pub fn bad_cluster_radii(blocks: &BlockLattice) -> Vec<usize> {
    let bad: Vec<bool> = blocks.labels.iter().map(|&l| l == BlockLabel::Bad).collect();
    let (_, ext) = components(blocks.rows, blocks.cols, &bad, true);
    ext.iter()
        .map(|e| e.l1_radius_from((e.root / blocks.cols) as i64, (e.root % blocks.cols) as i64))
        .collect()
}
