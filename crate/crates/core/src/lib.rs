//! Electromagnetic signatures of vortex states in dipolar Bose-Einstein
//! condensates held in a hard-walled cylinder.
//!
//! The crate solves the radial Gross-Pitaevskii equation for an order-n
//! vortex, turns the density profile into the globally neutral monopole
//! charge distribution induced by the rotating dipoles, and evaluates the
//! resulting fields and potentials for infinite and finite cylinders.

pub mod cli;
pub mod error;
pub mod fields;
pub mod gp_radial;
pub mod io;
pub mod monopole;
pub mod numerics;
pub mod quadrature;
pub mod quantities;

pub use error::{Error, Result};
