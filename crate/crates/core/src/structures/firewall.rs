use std::collections::VecDeque;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Cell, GridState, Spin};

fn check_fit(n: usize, w: usize, r: usize) -> Result<()> {
    if r < 3 * w || 2 * r >= n {
        return Err(Error::RegionTooLarge { radius: r, n });
    }
    Ok(())
}

/// Inner radius `r - sqrt(2) w` of the annulus.
fn inner_radius(r: usize, w: usize) -> f64 {
    r as f64 - SQRT_2 * w as f64
}

/// A cell belongs iff the Euclidean distance `d` of its center from `u`'s
/// satisfies `r - sqrt(2) w <= d <= r`.
fn in_annulus(dr: i64, dc: i64, r: usize, inner: f64) -> bool {
    let d2 = dr * dr + dc * dc;
    d2 <= (r * r) as i64 && (inner <= 0.0 || d2 as f64 >= inner * inner)
}

fn in_interior(dr: i64, dc: i64, inner: f64) -> bool {
    inner > 0.0 && ((dr * dr + dc * dc) as f64) < inner * inner
}

/// Offsets of the annulus around `u`, row-major.
pub fn annulus_offsets(r: usize, w: usize) -> Vec<(i64, i64)> {
    let inner = inner_radius(r, w);
    let ri = r as i64;
    (-ri..=ri)
        .flat_map(|dr| (-ri..=ri).map(move |dc| (dr, dc)))
        .filter(|&(dr, dc)| in_annulus(dr, dc, r, inner))
        .collect()
}

/// Cells with `r - sqrt(2) w <= ||c - u|| <= r`; requires `r >= 3w` and `2r < n`.
pub fn annulus_cells(n: usize, w: usize, u: Cell, r: usize) -> Result<Vec<Cell>> {
    check_fit(n, w, r)?;
    Ok(annulus_offsets(r, w).into_iter().map(|(dr, dc)| u.offset(dr, dc, n)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirewallCheck {
    pub center: Cell,
    pub radius: usize,
    pub annulus_size: usize,
    pub spin: Option<Spin>,
    pub stable: bool,
    /// Size of the self-sustaining same-type set left after pruning.
    pub stable_core_size: usize,
}

impl FirewallCheck {
    pub fn is_firewall(&self) -> bool {
        self.spin.is_some()
    }
}

/// Monochromatic check plus the sufficient stability test: start from the
/// annulus and the interior cells of its type, repeatedly drop cells with
/// fewer than `K` set members in their neighborhood; stable iff no annulus
/// cell is dropped. The surviving set keeps every member happy whatever
/// the remaining cells do, so it can never change.
pub fn firewall_check(state: &GridState, u: Cell, r: usize) -> Result<FirewallCheck> {
    let (n, w) = (state.n(), state.w());
    check_fit(n, w, r)?;
    let inner = inner_radius(r, w);
    let offsets = annulus_offsets(r, w);
    let first = state.spin(u.offset(offsets[0].0, offsets[0].1, n));
    let mono = offsets.iter().all(|&(dr, dc)| state.spin(u.offset(dr, dc, n)) == first);
    let mut check = FirewallCheck {
        center: u,
        radius: r,
        annulus_size: offsets.len(),
        spin: mono.then_some(first),
        stable: false,
        stable_core_size: 0,
    };
    if !mono {
        return Ok(check);
    }
    let ri = r as i64;
    let side = 2 * r + 1;
    let at = |dr: i64, dc: i64| ((dr + ri) as usize) * side + (dc + ri) as usize;
    let mut member = vec![false; side * side];
    for dr in -ri..=ri {
        for dc in -ri..=ri {
            member[at(dr, dc)] = in_annulus(dr, dc, r, inner)
                || (in_interior(dr, dc, inner) && state.spin(u.offset(dr, dc, n)) == first);
        }
    }
    // window offset of a torus displacement, if inside the window
    let ni = n as i64;
    let wrap = |x: i64| {
        let m = x.rem_euclid(ni);
        if m > ni / 2 {
            m - ni
        } else {
            m
        }
    };
    let wi = w as i64;
    let neighbors = |dr: i64, dc: i64| {
        (-wi..=wi).flat_map(move |a| (-wi..=wi).map(move |b| (wrap(dr + a), wrap(dc + b))))
    };
    let mut count = vec![0u32; side * side];
    for dr in -ri..=ri {
        for dc in -ri..=ri {
            if member[at(dr, dc)] {
                count[at(dr, dc)] = neighbors(dr, dc)
                    .filter(|&(a, b)| a.abs() <= ri && b.abs() <= ri && member[at(a, b)])
                    .count() as u32;
            }
        }
    }
    let k = state.k() as u32;
    let mut queue: VecDeque<(i64, i64)> = VecDeque::new();
    for dr in -ri..=ri {
        for dc in -ri..=ri {
            if member[at(dr, dc)] && count[at(dr, dc)] < k {
                member[at(dr, dc)] = false;
                queue.push_back((dr, dc));
            }
        }
    }
    while let Some((dr, dc)) = queue.pop_front() {
        for (a, b) in neighbors(dr, dc) {
            if a.abs() <= ri && b.abs() <= ri && member[at(a, b)] {
                let i = at(a, b);
                count[i] -= 1;
                if count[i] < k {
                    member[i] = false;
                    queue.push_back((a, b));
                }
            }
        }
    }
    check.stable = offsets.iter().all(|&(dr, dc)| member[at(dr, dc)]);
    check.stable_core_size = member.iter().filter(|&&m| m).count();
    Ok(check)
}

pub fn is_firewall(state: &GridState, u: Cell, r: usize) -> Result<bool> {
    Ok(firewall_check(state, u, r)?.is_firewall())
}

pub fn firewall_unconditionally_stable(state: &GridState, u: Cell, r: usize) -> Result<bool> {
    Ok(firewall_check(state, u, r)?.stable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridConfig;
    use proptest::prelude::*;

    fn state(n: usize, w: usize, tau: f64, f: impl FnMut(Cell) -> Spin) -> GridState {
        GridState::from_fn(GridConfig::new_unchecked_size(n, w, tau, 0.5, 0).unwrap(), f).unwrap()
    }

    #[test]
    fn small_annulus_matches_distance_test() {
        let got = annulus_offsets(3, 1);
        let mut want = Vec::new();
        for dr in -4i64..=4 {
            for dc in -4i64..=4 {
                let d = ((dr * dr + dc * dc) as f64).sqrt();
                if (1.5857864376269049..=3.0).contains(&d) {
                    want.push((dr, dc));
                }
            }
        }
        assert_eq!(got, want);
        assert_eq!(got.len(), 20);
        assert!(annulus_cells(6, 1, Cell::new(0, 0), 3).is_err());
        assert!(annulus_cells(7, 1, Cell::new(0, 0), 3).is_ok());
        assert!(annulus_cells(20, 2, Cell::new(0, 0), 5).is_err());
    }

    #[test]
    fn uniform_grid_is_stable() {
        let s = state(32, 2, 0.4, |_| Spin::Plus);
        let c = firewall_check(&s, Cell::new(3, 30), 8).unwrap();
        assert!(c.is_firewall() && c.stable);
        // rim cells such as offset (8, 0) see only 11 disk cells, below K = 12
        let strict = state(32, 2, 0.45, |_| Spin::Plus);
        let c = firewall_check(&strict, Cell::new(3, 30), 8).unwrap();
        assert!(c.is_firewall() && !c.stable);
        let mut broken = s.clone();
        broken.set_spin(Cell::new(3, 30).offset(8, 0, 32), Spin::Minus);
        assert!(!is_firewall(&broken, Cell::new(3, 30), 8).unwrap());
        assert!(!firewall_unconditionally_stable(&broken, Cell::new(3, 30), 8).unwrap());
    }

    #[test]
    fn matches_worst_case_count() {
        let (n, r, u) = (16, 6, Cell::new(8, 8));
        let ring = annulus_cells(n, 1, u, r).unwrap();
        for tau in [1.0 / 3.0, 4.0 / 9.0, 5.0 / 9.0] {
            let s = state(n, 1, tau, |c| if ring.contains(&c) { Spin::Plus } else { Spin::Minus });
            let brute = ring.iter().all(|&c| {
                let mut same = 0;
                for a in -1..=1 {
                    for b in -1..=1 {
                        same += ring.contains(&c.offset(a, b, n)) as usize;
                    }
                }
                same >= s.k()
            });
            let check = firewall_check(&s, u, r).unwrap();
            assert!(check.is_firewall());
            assert_eq!(check.stable, brute, "K = {}", s.k());
        }
    }

    proptest! {
        #[test]
        fn translation_commutes(dr in -20i64..20, dc in -20i64..20, seed in any::<u64>()) {
            let n = 40;
            let u = Cell::new(5, 37);
            let a: Vec<Cell> = annulus_cells(n, 2, u, 9).unwrap().iter().map(|c| c.offset(dr, dc, n)).collect();
            let b = annulus_cells(n, 2, u.offset(dr, dc, n), 9).unwrap();
            let sa: std::collections::BTreeSet<_> = a.into_iter().collect();
            let sb: std::collections::BTreeSet<_> = b.into_iter().collect();
            prop_assert_eq!(sa, sb);
            let cfg = GridConfig::new_unchecked_size(n, 2, 0.4, 0.5, seed).unwrap();
            let mut s = GridState::new_random(cfg).unwrap();
            for c in annulus_cells(n, 2, u, 9).unwrap() { s.set_spin(c, Spin::Plus); }
            let t = s.translated(dr, dc);
            prop_assert_eq!(firewall_check(&s, u, 9).unwrap().stable, firewall_check(&t, u.offset(dr, dc, n), 9).unwrap().stable);
        }
    }
}
