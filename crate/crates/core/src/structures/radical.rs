use serde::{Deserialize, Serialize};

use crate::dynamics::{cascade_closure, CascadeOrder, CascadeResult, Square};
use crate::error::{Error, Result};
use crate::grid::{Cell, GridState, Spin};
use crate::prefix::{PlusPrefix, Rect};
use crate::theory::{self, round_half_up, RadicalGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadicalSpec {
    pub center: Cell,
    pub eps_prime: f64,
    pub eps: f64,
}

impl RadicalSpec {
    pub fn new(center: Cell, eps_prime: f64, eps: f64) -> Self {
        RadicalSpec { center, eps_prime, eps }
    }

    pub fn geometry(&self, state: &GridState) -> Result<RadicalGeometry> {
        let g = theory::radical_geometry(state.w(), state.k(), self.eps_prime, self.eps)?;
        if 2 * g.radius + 1 > state.n() {
            return Err(Error::RegionTooLarge { radius: g.radius, n: state.n() });
        }
        Ok(g)
    }

    /// True when `tau` lies in `(tau2, 1/2)` and `eps' <= f(tau)`, outside
    /// the regime where radical regions are known to expand.
    pub fn below_f_tau(&self, state: &GridState) -> bool {
        let tau = state.config().tau();
        tau > theory::tau2() && tau < 0.5 && theory::f_tau(tau).is_ok_and(|f| self.eps_prime <= f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub verdict: bool,
    pub count: i64,
    pub threshold: i64,
    pub radius: usize,
    /// The bound is non-positive, so the verdict holds vacuously.
    pub degenerate: bool,
    pub eps_prime_below_f: bool,
}

pub(crate) fn radical_with_prefix(state: &GridState, prefix: &PlusPrefix, spec: &RadicalSpec) -> Result<ThresholdCheck> {
    let g = spec.geometry(state)?;
    let count = prefix.minus_count(Rect::square(spec.center, g.radius)) as i64;
    Ok(ThresholdCheck {
        verdict: count < g.threshold,
        count,
        threshold: g.threshold,
        radius: g.radius,
        degenerate: g.threshold <= 0,
        eps_prime_below_f: spec.below_f_tau(state),
    })
}

/// Radical iff the `-1` count of `N_{(1+eps')w}(center)` is strictly below
/// `floor(tau_hat (1+eps')^2 N)`.
pub fn radical_check(state: &GridState, spec: &RadicalSpec) -> Result<ThresholdCheck> {
    radical_with_prefix(state, &state.plus_prefix(), spec)
}

pub fn is_radical_region(state: &GridState, spec: &RadicalSpec) -> Result<bool> {
    Ok(radical_check(state, spec)?.verdict)
}

/// Unhappy `-1` agents in `N_{eps' w}(center)` against
/// `floor(tau eps'^2 N - N^{1/2+eps})`.
pub fn unhappy_check(state: &GridState, spec: &RadicalSpec) -> Result<ThresholdCheck> {
    let g = spec.geometry(state)?;
    let square = Square::new(spec.center, g.unhappy_radius);
    let count = square
        .cells(state.n())
        .filter(|&c| state.spin(c) == Spin::Minus && state.is_unhappy(c))
        .count() as i64;
    Ok(ThresholdCheck {
        verdict: count >= g.unhappy_bound,
        count,
        threshold: g.unhappy_bound,
        radius: g.unhappy_radius,
        degenerate: g.unhappy_bound <= 0,
        eps_prime_below_f: spec.below_f_tau(state),
    })
}

pub fn is_unhappy_region(state: &GridState, spec: &RadicalSpec) -> Result<bool> {
    Ok(unhappy_check(state, spec)?.verdict)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandCheck {
    pub cascade: CascadeResult,
    pub max_flips: usize,
    /// A negative verdict is final: `tau < 1/2` and the cascade stopped
    /// before exhausting the flip budget.
    pub negative_is_conclusive: bool,
}

impl ExpandCheck {
    pub fn expandable(&self) -> bool {
        self.cascade.target_made_monochromatic
    }
}

/// Restricted `-1 -> +1` cascade inside `N_{(1+eps')w}(center)` on a copy
/// of the state; expandable iff `N_{w/2}(center)` becomes all `+1` within
/// `max_flips` (default `(w+1)^2`). A positive verdict carries the witness
/// flip sequence.
pub fn is_expandable(state: &GridState, spec: &RadicalSpec, max_flips: Option<usize>) -> Result<ExpandCheck> {
    let g = spec.geometry(state)?;
    let w = state.w();
    let budget = max_flips.unwrap_or((w + 1) * (w + 1));
    let core = Square::new(spec.center, round_half_up(w as f64 / 2.0));
    let cascade = cascade_closure(
        state.clone(),
        Square::new(spec.center, g.radius),
        core,
        Spin::Plus,
        Some(budget),
        CascadeOrder::CenterFirst,
    );
    let negative_is_conclusive =
        !cascade.target_made_monochromatic && state.config().tau() < 0.5 && cascade.flips_used < budget;
    Ok(ExpandCheck { cascade, max_flips: budget, negative_is_conclusive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridConfig;

    fn uniform(n: usize, w: usize, tau: f64, spin: Spin) -> GridState {
        let cfg = GridConfig::new_unchecked_size(n, w, tau, 0.5, 0).unwrap();
        GridState::from_fn(cfg, |_| spin).unwrap()
    }

    /// `count` cells of type -1 placed row-major inside the square.
    fn with_minus_in_square(n: usize, w: usize, tau: f64, center: Cell, radius: usize, count: usize) -> GridState {
        let mut s = uniform(n, w, tau, Spin::Plus);
        let side = 2 * radius + 1;
        for i in 0..count {
            s.set_spin(center.offset((i / side) as i64 - radius as i64, (i % side) as i64 - radius as i64, n), Spin::Minus);
        }
        s
    }

    #[test]
    fn uniform_grids() {
        let spec = RadicalSpec::new(Cell::new(20, 20), 0.3, 0.1);
        assert!(is_radical_region(&uniform(80, 10, 0.45, Spin::Plus), &spec).unwrap());
        assert!(!is_radical_region(&uniform(80, 10, 0.45, Spin::Minus), &spec).unwrap());
        assert!(!is_unhappy_region(&uniform(80, 10, 0.45, Spin::Plus), &RadicalSpec::new(Cell::new(3, 3), 0.8, 0.05)).unwrap());
        assert!(matches!(
            radical_check(&uniform(25, 10, 0.45, Spin::Plus), &spec),
            Err(Error::RegionTooLarge { radius: 13, n: 25 })
        ));
    }

    #[test]
    fn radical_boundary() {
        // K = 199, tau_hat = 0.36370..., floor(tau_hat * 1.69 * 441) = 271, radius 13
        let center = Cell::new(40, 40);
        let spec = RadicalSpec::new(center, 0.3, 0.1);
        let below = with_minus_in_square(80, 10, 0.45, center, 13, 270);
        let at = with_minus_in_square(80, 10, 0.45, center, 13, 271);
        let c = radical_check(&below, &spec).unwrap();
        assert_eq!((c.threshold, c.radius, c.count), (271, 13, 270));
        assert!(c.verdict && !c.eps_prime_below_f);
        assert!(!is_radical_region(&at, &spec).unwrap());
        let flagged = RadicalSpec::new(center, 0.1, 0.1);
        assert!(radical_check(&below, &flagged).unwrap().eps_prime_below_f);
    }

    #[test]
    fn unhappy_boundary() {
        // floor(0.45125 * 0.64 * 441 - 441^0.55) = 98, radius round(8.0) = 8
        let center = Cell::new(40, 40);
        let spec = RadicalSpec::new(center, 0.8, 0.05);
        let exact = with_minus_in_square(80, 10, 0.45, center, 8, 98);
        let c = unhappy_check(&exact, &spec).unwrap();
        assert_eq!((c.threshold, c.radius, c.count), (98, 8, 98));
        assert!(c.verdict && !c.degenerate);
        let fewer = with_minus_in_square(80, 10, 0.45, center, 8, 97);
        assert!(!is_unhappy_region(&fewer, &spec).unwrap());
        let tiny = RadicalSpec::new(center, 0.3, 0.1);
        let d = unhappy_check(&uniform(80, 10, 0.45, Spin::Plus), &tiny).unwrap();
        assert!(d.degenerate && d.verdict);
    }

    #[test]
    fn expandability_trivial_cases() {
        let spec = RadicalSpec::new(Cell::new(40, 40), 0.35, 0.1);
        let plus = uniform(80, 10, 0.45, Spin::Plus);
        let e = is_expandable(&plus, &spec, None).unwrap();
        assert!(e.expandable() && e.cascade.flips_used == 0 && e.max_flips == 121);
        let minus = uniform(80, 10, 0.45, Spin::Minus);
        let e = is_expandable(&minus, &spec, None).unwrap();
        assert!(!e.expandable() && e.negative_is_conclusive);
    }

    #[test]
    fn expandable_witness_replays() {
        let center = Cell::new(40, 40);
        let s = with_minus_in_square(80, 10, 0.45, center, 5, 60);
        let spec = RadicalSpec::new(center, 0.35, 0.1);
        let e = is_expandable(&s, &spec, None).unwrap();
        assert!(e.expandable());
        assert_eq!(e.cascade.flips_used, 60);
        let mut replay = s.clone();
        for &c in &e.cascade.flipped {
            replay.apply_flip(c).unwrap();
        }
        assert!(Square::new(center, 5).cells(80).all(|c| replay.spin(c) == Spin::Plus));
    }
}
