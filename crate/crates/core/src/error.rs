use thiserror::Error;

use crate::grid::Cell;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("agent {0:?} is not eligible to flip")]
    NotEligible(Cell),
    #[error("region of radius {radius} does not fit in a torus of side {n}")]
    RegionTooLarge { radius: usize, n: usize },
    #[error("parameter out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
