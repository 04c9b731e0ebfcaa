//! Potential of the finite cylinder.
//!
//! Integrating the charge density against 1/|r − r′| by parts in ξ′ (the
//! boundary terms vanish because the enclosed charge is zero at the axis and
//! at the wall) and integrating z′ over [−z₀, z₀] in closed form gives
//!
//! ```text
//! Φ/Φ₀ = ∫₀¹dξ′ ∫₀^{2π}dφ′ |ψ(ξ′)|² (ξ′ − ξcosφ′)/h² · B(h, z),
//! h² = ξ² + ξ′² − 2ξξ′cosφ′,
//! B  = (1−z)/√(h²f² + (1−z)²) + (1+z)/√(h²f² + (1+z)²),
//! ```
//!
//! with z in units of z₀ and f = R₀/z₀. The kernel behaves like x/(x² + y²)
//! near (ξ′, φ′) = (ξ, 0). Over φ′ it integrates in closed form,
//!
//! ```text
//! ∫₀^π (ξ′ − ξcosφ′)/h² dφ′ = π/ξ′ for ξ′ > ξ, 0 for ξ′ < ξ,
//! ```
//!
//! so the angular integral is split as B(|ξ′−ξ|)·(that) plus a bounded
//! remainder ∫ (ξ′ − ξcosφ′)/h² · [B(h) − B(|ξ′−ξ|)] dφ′. Both the angular
//! and the radial integral are done with adaptive Gauss–Kronrod; the radial
//! one breaks at ξ′ = ξ where the angular integral jumps.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp_radial::CondensateProfile;
use crate::monopole::check_consistency;
use crate::quadrature::integrate;
use crate::quantities::DerivedScenario;

pub const DEFAULT_QUAD_TOL: f64 = 1e-6;
/// Minimum distance from the rim (ξ = 1, |z| = 1) at which the potential is evaluated.
pub const RIM_OFFSET: f64 = 1e-6;

const OUTER_INTERVALS: usize = 400;
const INNER_INTERVALS: usize = 200;
// share of the tolerance given to each angular integral
const INNER_SHARE: f64 = 0.01;

/// Weight of the source in the kernel integral.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// |ψ(ξ′)|², as required by the charge density.
    #[default]
    Density,
    /// Unit weight: the kernel alone, for comparison only.
    Unweighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialValue {
    /// Φ/Φ₀.
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn bracket(h2: f64, z: f64, f2: f64) -> f64 {
    let term = |c: f64| {
        let d = (h2 * f2 + c * c).sqrt();
        if d == 0.0 {
            0.0
        } else {
            c / d
        }
    };
    term(1.0 - z) + term(1.0 + z)
}

struct Angular {
    xi: f64,
    z: f64,
    f2: f64,
    tol: f64,
}

impl Angular {
    /// ∫₀^π (ξ′ − ξcosφ′)/h² · B dφ′ and its error estimate.
    fn integral(&self, xp: f64) -> (f64, f64, bool) {
        let Angular { xi, z, f2, tol } = *self;
        let u = xp - xi;
        let base = bracket(u * u, z, f2);
        let closed = if xi == 0.0 || u > 0.0 {
            PI / xp
        } else if u == 0.0 {
            0.5 * PI / xp
        } else {
            0.0
        };
        if xi == 0.0 {
            return (base * closed, 0.0, true);
        }
        let remainder = |phi: f64| {
            let s = (0.5 * phi).sin();
            let s2 = 2.0 * s * s;
            let h2 = u * u + 2.0 * xi * xp * s2;
            if h2 == 0.0 {
                return 0.0;
            }
            (u + xi * s2) / h2 * (bracket(h2, z, f2) - base)
        };
        // angular scales on which h and the bracket change
        let root = (xi * xp).sqrt();
        let mut points = vec![0.0];
        let mut scales = [u.abs() / root, (1.0 - z.abs()).abs() / (f2.sqrt() * root)];
        scales.sort_by(f64::total_cmp);
        for s in scales {
            if s > 1e-9 && s < 0.5 * PI && s > 2.0 * points.last().unwrap() {
                points.push(s);
            }
        }
        points.push(PI);
        let q = integrate(remainder, &points, tol, tol, INNER_INTERVALS);
        (base * closed + q.value, q.error, q.converged)
    }
}

fn validate(xi: f64, z: f64, quad_tol: f64) -> Result<()> {
    if !(1e-10..=1e-3).contains(&quad_tol) {
        return Err(Error::InvalidArgument(format!(
            "quad_tol must lie in [1e-10, 1e-3], got {quad_tol}"
        )));
    }
    if !(xi >= 0.0 && xi.is_finite() && z.is_finite()) {
        return Err(Error::InvalidArgument(format!("need finite xi >= 0 and finite z, got ({xi}, {z})")));
    }
    if (xi - 1.0).abs() < 0.5 * RIM_OFFSET && (z.abs() - 1.0).abs() < 0.5 * RIM_OFFSET {
        return Err(Error::RimSingularity { xi, z });
    }
    Ok(())
}

/// Φ/Φ₀ at (ξ, z) with its error estimate.
///
/// A scenario without a source (Φ₀ = 0) gives exactly zero.
pub fn potential_estimate(
    p: &CondensateProfile,
    ds: &DerivedScenario,
    xi: f64,
    z: f64,
    quad_tol: f64,
    weighting: Weighting,
) -> Result<PotentialValue> {
    check_consistency(p, ds)?;
    validate(xi, z, quad_tol)?;
    if ds.phi0 == 0.0 {
        return Ok(PotentialValue {
            value: 0.0,
            error: 0.0,
            converged: true,
        });
    }
    if weighting == Weighting::Unweighted && xi == 0.0 {
        return Err(Error::InvalidArgument("the unweighted kernel diverges on the axis".into()));
    }
    let angular = Angular {
        xi,
        z,
        f2: ds.aspect * ds.aspect,
        tol: INNER_SHARE * quad_tol,
    };
    let mut inner_error = 0.0f64;
    let mut inner_ok = true;
    let radial = |xp: f64| {
        let w = match weighting {
            Weighting::Density => p.density_at(xp),
            Weighting::Unweighted => 1.0,
        };
        if w == 0.0 {
            return 0.0;
        }
        let (v, e, ok) = angular.integral(xp);
        inner_error = inner_error.max(2.0 * w * e);
        inner_ok &= ok;
        2.0 * w * v
    };
    let points: Vec<f64> = if xi > 0.0 && xi < 1.0 { vec![0.0, xi, 1.0] } else { vec![0.0, 1.0] };
    let q = integrate(radial, &points, 0.5 * quad_tol, 0.5 * quad_tol, OUTER_INTERVALS);
    Ok(PotentialValue {
        value: q.value,
        error: q.error + inner_error,
        converged: q.converged && inner_ok,
    })
}

/// Dimensionless potential Φ/Φ₀ at (ξ, z), z in units of z₀.
pub fn potential_at(p: &CondensateProfile, ds: &DerivedScenario, xi: f64, z: f64, quad_tol: f64) -> Result<f64> {
    let v = potential_estimate(p, ds, xi, z, quad_tol, Weighting::Density)?;
    if !v.converged {
        return Err(Error::NonConvergence {
            solver: "potential quadrature",
            iterations: OUTER_INTERVALS,
            boundary_residual: v.error,
            norm_residual: f64::NAN,
        });
    }
    Ok(v.value)
}
