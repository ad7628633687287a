//! Glauber-type segregation dynamics on the torus with the detectors,
//! percolation utilities and closed-form quantities used to study them.

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod percolation;
pub mod prefix;
pub mod regions;
pub mod report;
pub mod rng;
pub mod snapshot;
pub mod stats;
pub mod structures;
pub mod sweep;
pub mod theory;
pub mod unionfind;

pub use dynamics::{
    cascade_closure, run_to_termination, step, CascadeOrder, CascadeResult, RunLimits, RunReport, Square,
    StepOutcome, TerminationReason,
};
pub use error::{Error, Result};
pub use grid::{threshold_count, Cell, FlipEvent, GridConfig, GridState, Happiness, Spin};
pub use regions::{RadiusMap, RegionSampling, RegionSummary};
pub use rng::{derive_seed, stream_rng, SimRng, RNG_ID};
