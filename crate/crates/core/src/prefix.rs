//! Summed-area table over the `+1` indicator of a torus grid.
//!
//! Queries take torus rectangles (origin anywhere, extent at most `n` per
//! axis) and split them into at most four non-wrapping pieces.

use crate::grid::{Cell, Spin};

/// Axis-aligned rectangle on the torus. `row`/`col` may be negative or
/// exceed `n`; they are reduced modulo `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub row: i64,
    pub col: i64,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub fn new(row: i64, col: i64, height: usize, width: usize) -> Self {
        Rect { row, col, height, width }
    }

    /// The `(2r+1)`-square centered on `center`.
    pub fn square(center: Cell, radius: usize) -> Self {
        let r = radius as i64;
        Rect {
            row: center.row as i64 - r,
            col: center.col as i64 - r,
            height: 2 * radius + 1,
            width: 2 * radius + 1,
        }
    }

    pub fn area(&self) -> usize {
        self.height * self.width
    }
}

#[derive(Debug, Clone)]
pub struct PlusPrefix {
    n: usize,
    // (n+1) x (n+1), sums[i][j] = #plus in rows < i, cols < j
    sums: Vec<u32>,
}

impl PlusPrefix {
    pub fn build(n: usize, types: &[Spin]) -> Self {
        let stride = n + 1;
        let mut sums = vec![0u32; stride * stride];
        for i in 0..n {
            let mut row_acc = 0u32;
            for j in 0..n {
                row_acc += (types[i * n + j] == Spin::Plus) as u32;
                sums[(i + 1) * stride + j + 1] = sums[i * stride + j + 1] + row_acc;
            }
        }
        PlusPrefix { n, sums }
    }

    pub fn side(&self) -> usize {
        self.n
    }

    #[inline]
    fn plain(&self, r0: usize, c0: usize, r1: usize, c1: usize) -> u32 {
        // half-open [r0, r1) x [c0, c1), no wrap
        let s = self.n + 1;
        self.sums[r1 * s + c1] + self.sums[r0 * s + c0] - self.sums[r0 * s + c1] - self.sums[r1 * s + c0]
    }

    /// Number of `+1` cells in `rect`. Panics if the rect is wider than the torus.
    pub fn count(&self, rect: Rect) -> u32 {
        let n = self.n;
        assert!(rect.height <= n && rect.width <= n, "rect {rect:?} exceeds torus side {n}");
        if rect.height == 0 || rect.width == 0 {
            return 0;
        }
        let r0 = rect.row.rem_euclid(n as i64) as usize;
        let c0 = rect.col.rem_euclid(n as i64) as usize;
        let rows: [(usize, usize); 2] = if r0 + rect.height <= n {
            [(r0, r0 + rect.height), (0, 0)]
        } else {
            [(r0, n), (0, r0 + rect.height - n)]
        };
        let cols: [(usize, usize); 2] = if c0 + rect.width <= n {
            [(c0, c0 + rect.width), (0, 0)]
        } else {
            [(c0, n), (0, c0 + rect.width - n)]
        };
        let mut total = 0;
        for &(a, b) in &rows {
            if a == b {
                continue;
            }
            for &(c, d) in &cols {
                if c == d {
                    continue;
                }
                total += self.plain(a, c, b, d);
            }
        }
        total
    }

    /// Number of `-1` cells in `rect`.
    pub fn minus_count(&self, rect: Rect) -> u32 {
        rect.area() as u32 - self.count(rect)
    }
}
