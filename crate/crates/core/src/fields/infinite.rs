use std::f64::consts::PI;

use crate::error::Result;
use crate::gp_radial::CondensateProfile;
use crate::monopole::{check_consistency, cumulative_charge, ChargeProfile};
use crate::quantities::DerivedScenario;

/// Radial field inside an infinite cylinder, (ħ n n₁d d / 2π M R₀³)·|ψ(ξ)|²/ξ.
///
/// A/m for magnetic charge, V/m for electric charge. Zero outside the
/// cylinder and on the axis.
pub fn h_field_infinite(p: &CondensateProfile, ds: &DerivedScenario, xi: f64) -> Result<f64> {
    check_consistency(p, ds)?;
    let prefactor = ds.field_prefactor();
    if !(xi > 0.0 && xi < 1.0) || prefactor == 0.0 {
        return Ok(0.0);
    }
    Ok(prefactor * p.density_at(xi) / xi)
}

/// The same field from the enclosed charge: Q(ξ) / (κ · 2πr · 2z₀).
pub fn gauss_field(cp: &ChargeProfile, ds: &DerivedScenario, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Ok(0.0);
    }
    let s = &ds.underlying;
    let q = cumulative_charge(cp, xi)?;
    Ok(q / (cp.charge_constant * 2.0 * PI * xi * s.radius * 2.0 * s.half_height))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp_radial::{solve_profile, RadialGrid, DEFAULT_TOL};
    use crate::monopole::areal_density;
    use crate::quantities::{derive_geometry, Scenario};

    #[test]
    fn gauss_law_matches_closed_form() {
        let p = solve_profile(1, 100.0, &RadialGrid::default(), DEFAULT_TOL).unwrap();
        let ds = derive_geometry(&Scenario::rb87()).unwrap();
        let cp = areal_density(&p, &ds).unwrap();
        for k in 1..20 {
            let xi = f64::from(k) / 20.0;
            let closed = h_field_infinite(&p, &ds, xi).unwrap();
            let gauss = gauss_field(&cp, &ds, xi).unwrap();
            assert!(((closed - gauss) / closed).abs() < 1e-6, "xi={xi}");
        }
        let half = h_field_infinite(&p, &ds, 0.5).unwrap();
        assert_eq!(half, ds.field_prefactor() * p.density_at(0.5) / 0.5);
    }

    #[test]
    fn no_field_outside_or_on_axis() {
        let p = solve_profile(1, 10.0, &RadialGrid::default(), DEFAULT_TOL).unwrap();
        let mut s = Scenario::rb87();
        s.n1d_a = 10.0;
        let ds = derive_geometry(&s).unwrap();
        for xi in [0.0, 1.0, 1.5, 7.0] {
            assert_eq!(h_field_infinite(&p, &ds, xi).unwrap(), 0.0);
        }
        assert!(h_field_infinite(&p, &ds, 1e-9).unwrap().abs() < 1e-6 * h_field_infinite(&p, &ds, 0.3).unwrap());
    }
}
