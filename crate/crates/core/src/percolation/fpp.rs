use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Site, WeightLattice};
use crate::error::{Error, Result};

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_sets(w: &WeightLattice, sources: &[Site], targets: &[Site]) -> Result<()> {
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::Domain("source and target sets must be nonempty".into()));
    }
    if sources.iter().chain(targets).any(|s| s.0 >= w.rows || s.1 >= w.cols) {
        return Err(Error::Domain("site outside the lattice".into()));
    }
    if sources.iter().any(|s| targets.contains(s)) {
        return Err(Error::Domain("source and target sets must be disjoint".into()));
    }
    Ok(())
}

/// Minimum over 4-paths from a source to a target of the summed vertex
/// weights, both endpoints included (Dijkstra with vertex costs).
pub fn fpp_min_passage_time(w: &WeightLattice, sources: &[Site], targets: &[Site]) -> Result<f64> {
    check_sets(w, sources, targets)?;
    let cols = w.cols;
    let mut is_target = vec![false; w.rows * cols];
    for t in targets {
        is_target[t.0 * cols + t.1] = true;
    }
    let mut dist = vec![f64::INFINITY; w.rows * cols];
    let mut heap = BinaryHeap::new();
    for s in sources {
        let i = s.0 * cols + s.1;
        let d = w.weights[i];
        if d < dist[i] {
            dist[i] = d;
            heap.push(Entry(d, i));
        }
    }
    while let Some(Entry(d, i)) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        if is_target[i] {
            return Ok(d);
        }
        let (r, c) = (i / cols, i % cols);
        let mut relax = |j: usize| {
            let nd = d + w.weights[j];
            if nd < dist[j] {
                dist[j] = nd;
                heap.push(Entry(nd, j));
            }
        };
        if r > 0 {
            relax(i - cols);
        }
        if r + 1 < w.rows {
            relax(i + cols);
        }
        if c > 0 {
            relax(i - 1);
        }
        if c + 1 < cols {
            relax(i + 1);
        }
    }
    Ok(f64::INFINITY)
}

/// Independent reference: label-correcting sweeps until no distance
/// improves. Quadratic; intended for small instances.
pub fn fpp_reference(w: &WeightLattice, sources: &[Site], targets: &[Site]) -> Result<f64> {
    check_sets(w, sources, targets)?;
    let (rows, cols) = (w.rows, w.cols);
    let mut dist = vec![f64::INFINITY; rows * cols];
    for s in sources {
        dist[s.0 * cols + s.1] = w.weight(*s);
    }
    loop {
        let mut changed = false;
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                let mut best = dist[i];
                for (a, b) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                    let (nr, nc) = (r as i64 + a, c as i64 + b);
                    if nr < 0 || nc < 0 || nr as usize >= rows || nc as usize >= cols {
                        continue;
                    }
                    let cand = dist[nr as usize * cols + nc as usize] + w.weights[i];
                    if cand < best {
                        best = cand;
                    }
                }
                if best < dist[i] {
                    dist[i] = best;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(targets.iter().map(|t| dist[t.0 * cols + t.1]).fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_forced_paths() {
        let z = WeightLattice::constant(5, 5, 0.0);
        assert_eq!(fpp_min_passage_time(&z, &[(0, 0)], &[(4, 4)]).unwrap(), 0.0);
        let row = WeightLattice::constant(1, 37, 1.0);
        assert_eq!(fpp_min_passage_time(&row, &[(0, 0)], &[(0, 36)]).unwrap(), 37.0);
        assert!(fpp_min_passage_time(&row, &[(0, 0)], &[(0, 0)]).is_err());
        assert!(fpp_min_passage_time(&row, &[], &[(0, 3)]).is_err());
    }

    proptest! {
        #[test]
        fn matches_reference(seed in any::<u64>(), rows in 1usize..7, cols in 2usize..7) {
            let w = WeightLattice::exponential(rows, cols, 1.0, seed);
            let src = [(0, 0)];
            let dst = [(rows - 1, cols - 1)];
            let a = fpp_min_passage_time(&w, &src, &dst).unwrap();
            let b = fpp_reference(&w, &src, &dst).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn invariant_under_transpose(seed in any::<u64>()) {
            let w = WeightLattice::exponential(6, 9, 1.0, seed);
            let mut t = w.clone();
            t.rows = 9;
            t.cols = 6;
            for r in 0..6 { for c in 0..9 { t.weights[c * 6 + r] = w.weights[r * 9 + c]; } }
            let a = fpp_min_passage_time(&w, &[(0, 0), (5, 0)], &[(3, 8)]).unwrap();
            let b = fpp_min_passage_time(&t, &[(0, 0), (0, 5)], &[(8, 3)]).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn lowering_a_weight_never_increases_time(seed in any::<u64>(), site in 0usize..64) {
            let w = WeightLattice::exponential(8, 8, 1.0, seed);
            let mut lower = w.clone();
            lower.weights[site] = 0.0;
            let a = fpp_min_passage_time(&w, &[(0, 0)], &[(7, 7)]).unwrap();
            let b = fpp_min_passage_time(&lower, &[(0, 0)], &[(7, 7)]).unwrap();
            prop_assert!(b <= a);
        }
    }
}
