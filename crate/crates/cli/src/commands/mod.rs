pub mod detect;
pub mod percolation;
pub mod run;
pub mod stats;
pub mod sweep;
pub mod theory;
