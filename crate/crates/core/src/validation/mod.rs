//! Independent checks on the closed forms: grid-evaluated posterior,
//! posterior predictive checks and frequentist coverage.

pub mod coverage;
pub mod grid;
pub mod ppc;

pub use coverage::{coverage_experiment, CoverageResult};
pub use grid::{grid_cell_masses, grid_posterior_oracle, Axis, GridOracle, GridSpec, ParameterCheck, Spacing};
pub use ppc::{
    posterior_predictive_check, prediction_band_coverage, simulate_replicate, PPCResult, PPCRow, ReplicateStats,
};
