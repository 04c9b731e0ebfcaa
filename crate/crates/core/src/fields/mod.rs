//! Fields and potentials of the monopole distribution.
//!
//! Inside an infinite cylinder Gauss's law gives the radial field in closed
//! form. For the finite cylinder the scalar potential (H = −∇Φ, or E = −∇Φ
//! in the electric case) is a double integral of the Coulomb kernel over the
//! density; see [`potential_at`].

mod grid;
mod infinite;
mod potential;

pub use grid::{field_from_potential, potential_grid, FieldSamples, GridSpec, PotentialGrid};
pub use infinite::{gauss_field, h_field_infinite};
pub use potential::{potential_at, potential_estimate, PotentialValue, Weighting, DEFAULT_QUAD_TOL, RIM_OFFSET};
