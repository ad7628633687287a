use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::Square;
use crate::grid::{Cell, GridState, Spin};
use crate::prefix::{PlusPrefix, Rect};
use crate::rng;
use crate::theory::round_half_up;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    All,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    pub verdict: bool,
    pub block_radius: usize,
    pub placements_checked: usize,
    /// Block center and boundary agent that stays happy.
    pub counterexample: Option<(Cell, Cell)>,
}

/// The first `-1` agent on the outer boundary ring of an all-`+1` block
/// `N_h(p)` that would still be happy, if any. Boundary agents outside
/// `region` are not examined.
fn happy_boundary_agent(state: &GridState, prefix: &PlusPrefix, region: Square, p: Cell, h: usize) -> Option<Cell> {
    let (n, w) = (state.n(), state.w() as i64);
    let ring = h as i64 + 1;
    let hi = h as i64;
    let k = state.k() as u32;
    for dr in -ring..=ring {
        for dc in -ring..=ring {
            if dr.abs().max(dc.abs()) != ring {
                continue;
            }
            let v = p.offset(dr, dc, n);
            if state.spin(v) != Spin::Minus || crate::grid::torus_linf(v, region.center, n) > region.radius {
                continue;
            }
            // -1 cells of the block inside v's neighborhood turn +1
            let (r0, r1) = ((dr - w).max(-hi), (dr + w).min(hi));
            let (c0, c1) = ((dc - w).max(-hi), (dc + w).min(hi));
            let lost = if r0 > r1 || c0 > c1 {
                0
            } else {
                prefix.minus_count(Rect::new(
                    p.row as i64 + r0,
                    p.col as i64 + c0,
                    (r1 - r0 + 1) as usize,
                    (c1 - c0 + 1) as usize,
                ))
            };
            if state.same_count(v) - lost >= k {
                return Some(v);
            }
        }
    }
    None
}

/// Region of expansion: wherever an all-`+1` block `N_{w/2}` is placed
/// inside `region`, every `-1` agent of the region on the block's outer
/// boundary ring is unhappy once the block is in place.
pub fn is_region_of_expansion(state: &GridState, region: Square, placement: Placement) -> ExpansionCheck {
    let n = state.n();
    let h = round_half_up(state.w() as f64 / 2.0);
    let prefix = state.plus_prefix();
    let mut check = ExpansionCheck { verdict: true, block_radius: h, placements_checked: 0, counterexample: None };
    if region.radius < h {
        return check;
    }
    let span = (region.radius - h) as i64;
    let probe = |p: Cell, check: &mut ExpansionCheck| {
        check.placements_checked += 1;
        if let Some(v) = happy_boundary_agent(state, &prefix, region, p, h) {
            check.verdict = false;
            check.counterexample = Some((p, v));
        }
    };
    match placement {
        Placement::All => {
            'outer: for dr in -span..=span {
                for dc in -span..=span {
                    probe(region.center.offset(dr, dc, n), &mut check);
                    if !check.verdict {
                        break 'outer;
                    }
                }
            }
        }
        Placement::Sample { count, seed } => {
            let mut rng = rng::stream_rng(seed, rng::MEASURE_STREAM);
            for _ in 0..count {
                let dr = rng.random_range(-span..=span);
                let dc = rng.random_range(-span..=span);
                probe(region.center.offset(dr, dc, n), &mut check);
                if !check.verdict {
                    break;
                }
            }
        }
    }
    check
}
