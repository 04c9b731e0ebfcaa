use serde::{Deserialize, Serialize};

use super::grid::RadialGrid;
use crate::numerics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverTag {
    Shooting,
    Relaxation,
    /// Built directly from samples (imported CSV or synthetic input).
    External,
}

/// A solved radial vortex profile ψ(ξ) with ∫₀¹ ξψ² dξ = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondensateProfile {
    pub grid: RadialGrid,
    pub psi: Vec<f64>,
    /// ε = 2MER₀²/ħ².
    pub eigenvalue: f64,
    pub vortex_order: u32,
    pub n1d_a: f64,
    pub solver: SolverTag,
    /// Solver-specific convergence residual (L∞).
    pub residual: f64,
}

impl CondensateProfile {
    /// Wraps externally supplied samples without solving anything.
    pub fn from_samples(grid: RadialGrid, psi: Vec<f64>, vortex_order: u32, n1d_a: f64, eigenvalue: f64) -> Self {
        assert_eq!(grid.len(), psi.len(), "one sample per grid point");
        CondensateProfile {
            grid,
            psi,
            eigenvalue,
            vortex_order,
            n1d_a,
            solver: SolverTag::External,
            residual: f64::NAN,
        }
    }

    pub fn xi(&self) -> &[f64] {
        self.grid.points()
    }

    /// |ψ(ξ)|² on the grid.
    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p * p).collect()
    }

    /// |ψ(ξ)|² at arbitrary ξ; zero outside the cylinder.
    pub fn density_at(&self, xi: f64) -> f64 {
        if xi >= 1.0 {
            return 0.0;
        }
        if xi <= self.grid.xi_min() {
            // ψ ~ C ξⁿ below the first grid point
            let p0 = self.psi[0];
            let ratio = if self.vortex_order == 0 {
                1.0
            } else {
                (xi / self.grid.xi_min()).powi(self.vortex_order as i32)
            };
            return (p0 * ratio).powi(2);
        }
        let p = self.grid.interpolate(&self.psi, xi);
        p * p
    }

    pub fn norm(&self) -> f64 {
        self.grid.radial_norm(&self.psi)
    }

    /// Number of sign changes strictly inside (ξ_min, 1).
    pub fn interior_nodes(&self) -> usize {
        count_nodes(&self.psi[..self.psi.len() - 1])
    }

    /// ψ(ξ=1/2)² by interpolation.
    pub fn density_at_half(&self) -> f64 {
        self.density_at(0.5)
    }
}

pub(crate) fn count_nodes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in values {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
    }
    nodes
}

/// d|ψ|²/dξ on the profile grid: centred differences inside, one-sided at the ends.
pub fn density_derivative(p: &CondensateProfile) -> Vec<f64> {
    numerics::gradient(p.xi(), &p.density())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_density_has_zero_derivative() {
        let grid = RadialGrid::uniform(128, 1e-6).unwrap();
        let p = CondensateProfile::from_samples(grid, vec![0.7; 128], 1, 0.0, 0.0);
        assert!(density_derivative(&p).iter().all(|d| d.abs() < 1e-12));
    }

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[1.0, 0.5, 0.0, -0.2, -0.1, 0.3]), 2);
        assert_eq!(count_nodes(&[1.0, 2.0, 3.0]), 0);
    }
}
