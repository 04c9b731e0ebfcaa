//! Radial Gross-Pitaevskii problem for an order-n vortex in a hard-walled
//! cylinder, solved by shooting with an independent relaxation solver as a
//! cross-check.

pub mod bessel;
mod grid;
mod profile;
mod relax;
mod shooting;

pub use bessel::{bessel_j, bessel_zero, first_zero};
pub use grid::{RadialGrid, DEFAULT_POINTS, DEFAULT_XI_MIN, MIN_POINTS};
pub use profile::{density_derivative, CondensateProfile, SolverTag};
pub use relax::relax_profile;
pub use shooting::solve_profile;

/// Default solver tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
