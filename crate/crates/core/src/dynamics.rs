//! Asynchronous Glauber process: uniform choice over the eligible set with
//! rate-|eligible| exponential clock increments.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Cell, FlipEvent, GridConfig, GridState, Spin};
use crate::regions::{self, RegionSampling, RegionSummary};
use crate::rng::{SimRng, RNG_ID};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunLimits {
    /// Defaults to `4 n² N` when absent.
    pub max_flips: Option<u64>,
    pub max_continuous_time: Option<f64>,
    /// Flips between trace points; 0 disables tracing.
    pub record_interval: u64,
}

impl RunLimits {
    /// Limits must be positive when present.
    pub fn validate(&self) -> Result<()> {
        if self.max_flips == Some(0) {
            return Err(Error::InvalidConfig("max_flips must be positive".into()));
        }
        if self.max_continuous_time.is_some_and(|t| t.is_nan() || t <= 0.0) {
            return Err(Error::InvalidConfig("max_continuous_time must be positive".into()));
        }
        Ok(())
    }

    pub fn effective_max_flips(&self, config: &GridConfig) -> u64 {
        self.max_flips
            .unwrap_or(4 * (config.n * config.n) as u64 * config.big_n as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationReason {
    NoEligibleAgents,
    FlipLimit,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub flip_index: u64,
    pub continuous_time: f64,
    pub lyapunov: i64,
    pub eligible: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: GridConfig,
    pub rng_id: String,
    pub flips_total: u64,
    pub continuous_time_final: f64,
    pub lyapunov_initial: i64,
    pub lyapunov_final: i64,
    pub unhappy_initial_count: usize,
    pub termination_reason: TerminationReason,
    pub region_summary: Option<RegionSummary>,
    /// Left empty unless timing is requested, so reports stay byte-reproducible.
    pub wall_clock_seconds: Option<f64>,
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Flipped(FlipEvent),
    Terminated,
}

/// One event of the process: advance the clock by Exp(|eligible|), then
/// flip an eligible agent chosen uniformly.
pub fn step(state: &mut GridState, rng: &mut SimRng) -> StepOutcome {
    let len = state.eligible().len();
    if len == 0 {
        return StepOutcome::Terminated;
    }
    let e: f64 = rng.sample(Exp1);
    state.advance_time(e / len as f64);
    let idx = state.eligible().as_slice()[rng.random_range(0..len)] as usize;
    let c = state.cell(idx);
    StepOutcome::Flipped(state.apply_flip(c).expect("sampled from the eligible set"))
}

/// Sum of same-type counts over all agents.
pub fn lyapunov(state: &GridState) -> i64 {
    state.lyapunov()
}

/// Exact change of the Lyapunov function when an agent with same-type
/// count `pre_count` flips.
pub fn lyapunov_delta(big_n: usize, pre_count: u32) -> i64 {
    2 * (big_n as i64 - 2 * pre_count as i64 + 1)
}

pub fn run_to_termination(
    state: &mut GridState,
    rng: &mut SimRng,
    limits: &RunLimits,
    sampling: Option<&RegionSampling>,
) -> RunReport {
    let max_flips = limits.effective_max_flips(state.config());
    let big_n = state.neighborhood_size();
    let lyapunov_initial = state.lyapunov();
    let unhappy_initial_count = state.unhappy_count();
    let start_flips = state.flips();
    let mut phi = lyapunov_initial;
    let mut trace = Vec::new();
    let record = |trace: &mut Vec<TracePoint>, s: &GridState, phi: i64| {
        trace.push(TracePoint {
            flip_index: s.flips(),
            continuous_time: s.time(),
            lyapunov: phi,
            eligible: s.eligible().len(),
        })
    };
    if limits.record_interval > 0 {
        record(&mut trace, state, phi);
    }
    let reason = loop {
        if state.eligible().is_empty() {
            break TerminationReason::NoEligibleAgents;
        }
        if state.flips() - start_flips >= max_flips {
            break TerminationReason::FlipLimit;
        }
        if limits.max_continuous_time.is_some_and(|t| state.time() >= t) {
            break TerminationReason::TimeLimit;
        }
        if let StepOutcome::Flipped(ev) = step(state, rng) {
            phi += lyapunov_delta(big_n, ev.pre_count);
            if limits.record_interval > 0 && (state.flips() - start_flips).is_multiple_of(limits.record_interval) {
                record(&mut trace, state, phi);
            }
        }
    };
    if limits.record_interval > 0 && trace.last().map(|t| t.flip_index) != Some(state.flips()) {
        record(&mut trace, state, phi);
    }
    let region_summary = sampling.map(|s| regions::summarize(state, s));
    RunReport {
        config: state.config().clone(),
        rng_id: RNG_ID.to_string(),
        flips_total: state.flips() - start_flips,
        continuous_time_final: state.time(),
        lyapunov_initial,
        lyapunov_final: state.lyapunov(),
        unhappy_initial_count,
        termination_reason: reason,
        region_summary,
        wall_clock_seconds: None,
        trace,
    }
}

/// Square region on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    pub center: Cell,
    pub radius: usize,
}

impl Square {
    pub fn new(center: Cell, radius: usize) -> Self {
        Square { center, radius }
    }

    pub fn cells(&self, n: usize) -> impl Iterator<Item = Cell> + '_ {
        let r = self.radius as i64;
        (-r..=r).flat_map(move |dr| (-r..=r).map(move |dc| self.center.offset(dr, dc, n)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeResult {
    pub flipped: Vec<Cell>,
    pub target_made_monochromatic: bool,
    pub flips_used: usize,
}

/// Choice rule among simultaneously flippable agents.
pub enum CascadeOrder<'a> {
    /// Closest to the region center first (l-infinity, then row-major offset).
    CenterFirst,
    /// Uniformly random among the currently flippable agents.
    Random(&'a mut SimRng),
}

/// Greedy restricted cascade on a private copy of the state: only agents
/// inside `allowed` whose type differs from `target` may flip, and only
/// when eligible. Reports whether the `core` square became all `target`.
pub fn cascade_closure(
    mut state: GridState,
    allowed: Square,
    core: Square,
    target: Spin,
    max_flips: Option<usize>,
    mut order: CascadeOrder<'_>,
) -> CascadeResult {
    let n = state.n();
    let r = allowed.radius as i64;
    let offsets: Vec<(i64, i64)> = {
        let mut v: Vec<(i64, i64)> = (-r..=r).flat_map(|dr| (-r..=r).map(move |dc| (dr, dc))).collect();
        v.sort_by_key(|&(dr, dc)| (dr.abs().max(dc.abs()), dr, dc));
        v
    };
    let mut flipped = Vec::new();
    let mut candidates = Vec::new();
    loop {
        if max_flips.is_some_and(|m| flipped.len() >= m) {
            break;
        }
        let next = match &mut order {
            CascadeOrder::CenterFirst => offsets
                .iter()
                .map(|&(dr, dc)| allowed.center.offset(dr, dc, n))
                .find(|&c| state.spin(c) != target && state.is_eligible(c)),
            CascadeOrder::Random(rng) => {
                candidates.clear();
                candidates.extend(
                    offsets
                        .iter()
                        .map(|&(dr, dc)| allowed.center.offset(dr, dc, n))
                        .filter(|&c| state.spin(c) != target && state.is_eligible(c)),
                );
                candidates.choose(rng).copied()
            }
        };
        let Some(c) = next else { break };
        state.apply_flip(c).expect("candidate is eligible");
        flipped.push(c);
    }
    let target_made_monochromatic = core.cells(n).all(|c| state.spin(c) == target);
    CascadeResult { flips_used: flipped.len(), flipped, target_made_monochromatic }
}
