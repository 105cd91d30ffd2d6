//! Reference computations used to cross-check `qw-core`.
//!
//! Nothing here shares Bessel or convolution code with the core crate:
//! kicks are applied as pointwise phases on a position grid, Bessel values
//! come from quadrature of their integral representation, and the classical
//! walk is an exact binomial.

mod bessel;
mod classical;
mod grid;

pub use bessel::bessel_quadrature;
pub use classical::{classical_walk_distribution, ClassicalDistribution, ClassicalWalkSpec};
pub use grid::{propagate_position_grid, PositionGrid, DEFAULT_GRID_POINTS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{name} = {value} is outside the oracle domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("grid of {points} points cannot resolve {needed} momentum components: {detail}")]
    Resolution {
        points: usize,
        needed: usize,
        detail: String,
    },

    #[error(transparent)]
    Walk(#[from] qw_core::WalkError),
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;
