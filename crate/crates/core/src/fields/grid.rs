use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::potential::{potential_estimate, PotentialValue, Weighting, DEFAULT_QUAD_TOL, RIM_OFFSET};
use crate::error::{Error, Result};
use crate::gp_radial::CondensateProfile;
use crate::monopole::check_consistency;
use crate::numerics::gradient;
use crate::quantities::DerivedScenario;

/// Sampling of the (ξ, z) half-plane, z ≥ 0 in units of z₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xi_max: f64,
    pub z_max: f64,
    pub nxi: usize,
    pub nz: usize,
    pub quad_tol: f64,
    pub weighting: Weighting,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            xi_max: 2.0,
            z_max: 2.0,
            nxi: 101,
            nz: 101,
            quad_tol: DEFAULT_QUAD_TOL,
            weighting: Weighting::Density,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialGrid {
    pub xi_values: Vec<f64>,
    pub z_values: Vec<f64>,
    /// Φ/Φ₀, ξ-major: entry (i, j) at `i * nz + j`.
    pub phi_over_phi0: Vec<f64>,
    pub f_aspect: f64,
    pub quad_tol: f64,
    pub weighting: Weighting,
    /// Φ₀ in `phi0_unit`.
    pub phi0: f64,
    pub phi0_unit: String,
    /// Grid nodes on the rim, evaluated at (1 − 1e-6, ±(1 − 1e-6)) instead.
    pub rim_points: Vec<(f64, f64)>,
    /// Nodes whose quadrature missed the tolerance.
    pub failed_points: usize,
    pub max_error: f64,
}

impl PotentialGrid {
    pub fn nxi(&self) -> usize {
        self.xi_values.len()
    }

    pub fn nz(&self) -> usize {
        self.z_values.len()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.phi_over_phi0[i * self.nz() + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.phi_over_phi0.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

fn linspace(end: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| end * k as f64 / (count - 1) as f64).collect()
}

/// Φ/Φ₀ on a uniform grid; nodes are evaluated in parallel on the current rayon pool.
///
/// With [`Weighting::Unweighted`] the axis column is NaN, where that kernel diverges.
pub fn potential_grid(p: &CondensateProfile, ds: &DerivedScenario, spec: &GridSpec) -> Result<PotentialGrid> {
    check_consistency(p, ds)?;
    if spec.nxi < 16 || spec.nz < 16 {
        return Err(Error::InvalidArgument(format!(
            "grid needs nxi, nz >= 16, got {} x {}",
            spec.nxi, spec.nz
        )));
    }
    if !(spec.xi_max >= 1.0 && spec.xi_max.is_finite() && spec.z_max > 0.0 && spec.z_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need xi_max >= 1 and z_max > 0, got {} and {}",
            spec.xi_max, spec.z_max
        )));
    }
    let xi_values = linspace(spec.xi_max, spec.nxi);
    let z_values = linspace(spec.z_max, spec.nz);
    let nodes: Vec<(f64, f64)> = xi_values.iter().flat_map(|&x| z_values.iter().map(move |&z| (x, z))).collect();
    let on_rim = |x: f64, z: f64| (x - 1.0).abs() < RIM_OFFSET && (z.abs() - 1.0).abs() < RIM_OFFSET;
    let results: Vec<_> = nodes
        .par_iter()
        .map(|&(x, z)| {
            if x == 0.0 && spec.weighting == Weighting::Unweighted && ds.phi0 != 0.0 {
                return Ok(PotentialValue {
                    value: f64::NAN,
                    error: 0.0,
                    converged: true,
                });
            }
            let (x, z) = if on_rim(x, z) {
                (1.0 - RIM_OFFSET, z.signum() * (1.0 - RIM_OFFSET))
            } else {
                (x, z)
            };
            potential_estimate(p, ds, x, z, spec.quad_tol, spec.weighting)
        })
        .collect::<Result<_>>()?;
    let rim_points = nodes.iter().copied().filter(|&(x, z)| on_rim(x, z)).collect();
    Ok(PotentialGrid {
        phi_over_phi0: results.iter().map(|r| r.value).collect(),
        failed_points: results.iter().filter(|r| !r.converged).count(),
        max_error: results.iter().fold(0.0f64, |a, r| a.max(r.error)),
        xi_values,
        z_values,
        f_aspect: ds.aspect,
        quad_tol: spec.quad_tol,
        weighting: spec.weighting,
        phi0: ds.phi0,
        phi0_unit: ds.kind().potential_unit().to_string(),
        rim_points,
    })
}

/// −∇(Φ/Φ₀) on the grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSamples {
    pub xi_values: Vec<f64>,
    pub z_values: Vec<f64>,
    /// Radial component in units of Φ₀/R₀, same layout as the potential.
    pub radial: Vec<f64>,
    /// Axial component in units of Φ₀/z₀.
    pub axial: Vec<f64>,
}

fn uniform(values: &[f64]) -> bool {
    let h = values[1] - values[0];
    h > 0.0 && values.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
}

/// Field from the potential by centred differences, one-sided at the outer edges.
///
/// Φ is even in ξ and in z, so the mirrored centred difference on the axis
/// and on the mid-plane is exactly zero.
pub fn field_from_potential(pg: &PotentialGrid) -> Result<FieldSamples> {
    let (nxi, nz) = (pg.nxi(), pg.nz());
    if nxi < 3 || nz < 3 || !uniform(&pg.xi_values) || !uniform(&pg.z_values) {
        return Err(Error::InvalidArgument(
            "field recovery needs a uniform grid of at least 3 x 3 nodes".into(),
        ));
    }
    let mut radial = vec![0.0; nxi * nz];
    let mut axial = vec![0.0; nxi * nz];
    for j in 0..nz {
        let column: Vec<f64> = (0..nxi).map(|i| pg.at(i, j)).collect();
        for (i, d) in gradient(&pg.xi_values, &column).into_iter().enumerate() {
            radial[i * nz + j] = if i == 0 && pg.xi_values[0] == 0.0 { 0.0 } else { -d };
        }
    }
    for i in 0..nxi {
        let row = &pg.phi_over_phi0[i * nz..(i + 1) * nz];
        for (j, d) in gradient(&pg.z_values, row).into_iter().enumerate() {
            axial[i * nz + j] = if j == 0 && pg.z_values[0] == 0.0 { 0.0 } else { -d };
        }
    }
    Ok(FieldSamples {
        xi_values: pg.xi_values.clone(),
        z_values: pg.z_values.clone(),
        radial,
        axial,
    })
}
