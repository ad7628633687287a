//! Surrounding circuits in a square annulus of a planar site lattice.
//!
//! Open circuits use 4-adjacency; the blocking dual uses 8-adjacency. A
//! window stores the sites at l-infinity offset `<= outer` from a center;
//! the annulus is `inner <= d <= outer` and the hole is `d < inner`.

use std::collections::VecDeque;

const N4: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
const N8: [(i64, i64); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

#[derive(Debug, Clone)]
pub struct AnnulusWindow {
    outer: usize,
    side: usize,
    open: Vec<bool>,
}

impl AnnulusWindow {
    /// `open(dr, dc)` is queried for every offset with `|dr|, |dc| <= outer`.
    pub fn new(outer: usize, mut open: impl FnMut(i64, i64) -> bool) -> Self {
        let side = 2 * outer + 1;
        let o = outer as i64;
        let mut v = Vec::with_capacity(side * side);
        for dr in -o..=o {
            for dc in -o..=o {
                v.push(open(dr, dc));
            }
        }
        AnnulusWindow { outer, side, open: v }
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    #[inline]
    fn idx(&self, dr: i64, dc: i64) -> Option<usize> {
        let o = self.outer as i64;
        if dr.abs() > o || dc.abs() > o {
            return None;
        }
        Some(((dr + o) as usize) * self.side + (dc + o) as usize)
    }

    #[inline]
    fn at(&self, i: usize) -> (i64, i64) {
        let o = self.outer as i64;
        ((i / self.side) as i64 - o, (i % self.side) as i64 - o)
    }

    pub fn is_open(&self, dr: i64, dc: i64) -> bool {
        self.idx(dr, dc).is_some_and(|i| self.open[i])
    }

    fn dist(dr: i64, dc: i64) -> usize {
        dr.unsigned_abs().max(dc.unsigned_abs()) as usize
    }

    /// Closed cells of the annulus 8-connected (through closed annulus
    /// cells) to its inner ring, plus whether they reach the outer ring.
    fn blocked_from_inner(&self, inner: usize) -> (Vec<bool>, bool) {
        let mut seen = vec![false; self.open.len()];
        let mut queue = VecDeque::new();
        for (i, &open) in self.open.iter().enumerate() {
            let (dr, dc) = self.at(i);
            if Self::dist(dr, dc) == inner && !open {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        let mut crossed = false;
        while let Some(i) = queue.pop_front() {
            let (dr, dc) = self.at(i);
            if Self::dist(dr, dc) == self.outer {
                crossed = true;
            }
            for (a, b) in N8 {
                if let Some(j) = self.idx(dr + a, dc + b) {
                    if !seen[j] && !self.open[j] && Self::dist(dr + a, dc + b) >= inner {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        (seen, crossed)
    }

    /// True iff a closed 8-connected path inside the annulus joins its
    /// inner and outer rings.
    pub fn crossing_exists(&self, inner: usize) -> bool {
        assert!(inner >= 1 && inner <= self.outer);
        self.blocked_from_inner(inner).1
    }

    pub fn circuit_exists(&self, inner: usize) -> bool {
        !self.crossing_exists(inner)
    }

    /// An ordered open 4-cycle inside the annulus winding once around the
    /// center, or `None` when a closed crossing blocks every such cycle.
    ///
    /// Candidates are the open cells bordering (8-adjacency) the hole
    /// together with the closed clusters attached to it; the shortest odd
    /// closed walk with respect to the ray `{row -1/2, col > 0}` is a simple
    /// cycle with winding number one.
    pub fn surrounding_cycle(&self, inner: usize) -> Option<Vec<(i64, i64)>> {
        let (blocked, crossed) = self.blocked_from_inner(inner);
        if crossed {
            return None;
        }
        let in_z = |i: usize| {
            let (dr, dc) = self.at(i);
            Self::dist(dr, dc) < inner || blocked[i]
        };
        // exterior: 4-flood through non-Z cells from the outer ring
        let mut ext = vec![false; self.open.len()];
        let mut queue = VecDeque::new();
        for (i, slot) in ext.iter_mut().enumerate() {
            let (dr, dc) = self.at(i);
            if Self::dist(dr, dc) == self.outer && !in_z(i) {
                *slot = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            let (dr, dc) = self.at(i);
            for (a, b) in N4 {
                if let Some(j) = self.idx(dr + a, dc + b) {
                    if !ext[j] && !in_z(j) {
                        ext[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        let border: Vec<bool> = (0..self.open.len())
            .map(|i| {
                let (dr, dc) = self.at(i);
                ext[i]
                    && self.open[i]
                    && N8.iter().any(|&(a, b)| self.idx(dr + a, dc + b).is_some_and(&in_z))
            })
            .collect();
        if let Some(c) = self.odd_cycle(&border) {
            return Some(c);
        }
        let annulus: Vec<bool> = (0..self.open.len())
            .map(|i| {
                let (dr, dc) = self.at(i);
                self.open[i] && Self::dist(dr, dc) >= inner
            })
            .collect();
        self.odd_cycle(&annulus)
    }

    fn odd_cycle(&self, allowed: &[bool]) -> Option<Vec<(i64, i64)>> {
        // crossing the cut flips parity: edges between rows 0 and -1 at col > 0
        let cuts = |r1: i64, c1: i64, r2: i64| c1 > 0 && r1.min(r2) == -1 && r1.max(r2) == 0;
        let total = self.open.len();
        let mut best: Option<Vec<(i64, i64)>> = None;
        let o = self.outer as i64;
        let mut dist = vec![u32::MAX; 2 * total];
        let mut parent = vec![u32::MAX; 2 * total];
        for start_col in 1..=o {
            let Some(s) = self.idx(0, start_col) else { continue };
            if !allowed[s] {
                continue;
            }
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            let limit = best.as_ref().map_or(u32::MAX, |b| b.len() as u32);
            dist[2 * s] = 0;
            let mut queue = VecDeque::from([2 * s]);
            let goal = 2 * s + 1;
            while let Some(node) = queue.pop_front() {
                if node == goal || dist[node] + 1 >= limit {
                    break;
                }
                let (i, par) = (node / 2, node % 2);
                let (dr, dc) = self.at(i);
                for (a, b) in N4 {
                    let Some(j) = self.idx(dr + a, dc + b) else { continue };
                    if !allowed[j] {
                        continue;
                    }
                    let np = par ^ cuts(dr, dc, dr + a) as usize;
                    let next = 2 * j + np;
                    if dist[next] == u32::MAX {
                        dist[next] = dist[node] + 1;
                        parent[next] = node as u32;
                        queue.push_back(next);
                    }
                }
            }
            if dist[goal] != u32::MAX && best.as_ref().is_none_or(|b| (dist[goal] as usize) < b.len()) {
                let mut cyc = Vec::with_capacity(dist[goal] as usize);
                let mut node = goal;
                while node != 2 * s {
                    node = parent[node] as usize;
                    cyc.push(self.at(node / 2));
                }
                cyc.reverse();
                best = Some(cyc);
            }
        }
        best
    }

    /// Shortest open 4-path (inclusive of both ends) from the center to any
    /// cell of `targets`.
    pub fn path_to(&self, targets: &[(i64, i64)]) -> Option<Vec<(i64, i64)>> {
        let start = self.idx(0, 0)?;
        if !self.open[start] {
            return None;
        }
        let mut is_target = vec![false; self.open.len()];
        for &(r, c) in targets {
            if let Some(i) = self.idx(r, c) {
                is_target[i] = true;
            }
        }
        let mut parent = vec![usize::MAX; self.open.len()];
        parent[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            if is_target[i] {
                let mut path = vec![self.at(i)];
                let mut cur = i;
                while cur != start {
                    cur = parent[cur];
                    path.push(self.at(cur));
                }
                path.reverse();
                return Some(path);
            }
            let (dr, dc) = self.at(i);
            for (a, b) in N4 {
                if let Some(j) = self.idx(dr + a, dc + b) {
                    if self.open[j] && parent[j] == usize::MAX {
                        parent[j] = i;
                        queue.push_back(j);
                    }
                }
            }
        }
        None
    }
}

/// Winding number of a closed lattice polygon around the point `(-1/2, 0)`
/// (between the center cell and the cell above it), by ray crossing.
pub fn winding_around_center(cycle: &[(i64, i64)]) -> i64 {
    let mut w = 0;
    for i in 0..cycle.len() {
        let (r1, c1) = cycle[i];
        let (r2, _) = cycle[(i + 1) % cycle.len()];
        if c1 > 0 && r1 == 0 && r2 == -1 {
            w += 1;
        } else if c1 > 0 && r1 == -1 && r2 == 0 {
            w -= 1;
        }
    }
    w
}
