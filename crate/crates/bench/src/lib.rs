//! Fixtures shared by the benchmarks.

use schelling_core::{rng, run_to_termination, GridConfig, GridState, RunLimits};

/// Fair-coin grid; panics on an invalid configuration.
pub fn random_state(n: usize, w: usize, tau: f64, seed: u64) -> GridState {
    GridState::new_random(GridConfig::new_unchecked_size(n, w, tau, 0.5, seed).unwrap()).unwrap()
}

/// Grid after the dynamics stopped, as seen by the region detectors.
pub fn terminated_state(n: usize, w: usize, tau: f64, seed: u64) -> GridState {
    let mut s = random_state(n, w, tau, seed);
    let mut r = rng::stream_rng(seed, rng::DYNAMICS_STREAM);
    run_to_termination(&mut s, &mut r, &RunLimits::default(), None);
    s
}
