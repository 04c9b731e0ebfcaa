//! Monopole charge induced by a rotating polarised condensate.
//!
//! A vortex of order n moving the polarisation 𝒫 = s|ψ|²/(2πR₀²) ẑ
//! (s the line polarisation of the scenario) sources ∇·H = −∇·(Ṙ×𝒫) with
//! Ṙ = (nħ/Mr) φ̂. The axial delta term cancels against the boundary term
//! of the radial integral, so the enclosed charge is
//!
//! ```text
//! Q(ξ) = Q_coef · |ψ(ξ)|²,
//! ```
//!
//! which vanishes at the wall: the distribution is globally neutral.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp_radial::{density_derivative, CondensateProfile, RadialGrid};
use crate::quantities::{DerivedScenario, DipoleKind, SI};

/// Relative threshold used by [`neutrality_report`].
pub const NEUTRALITY_TOL: f64 = 1e-8;

// 3-point Gauss–Legendre on [0, 1]: exact for the quintic 2ψψ′ of a cubic ψ.
const GL_NODES: [f64; 3] = [0.112_701_665_379_258_3, 0.5, 0.887_298_334_620_741_7];
const GL_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeProfile {
    pub grid: RadialGrid,
    pub kind: DipoleKind,
    /// 2πξρ(ξ): V·s/m³ for magnetic charge, C/m³ for electric charge.
    pub areal_density: Vec<f64>,
    /// Charge enclosed within ξ over the full cylinder height: V·s or C.
    pub cumulative: Vec<f64>,
    /// Q(1).
    pub total: f64,
    /// Q(ξ)/|ψ(ξ)|².
    pub coefficient: f64,
    /// 2πξρ / (d|ψ|²/dξ).
    pub areal_prefactor: f64,
    /// μ₀ or ε₀; charge divided by this is the source of H or E.
    pub charge_constant: f64,
    psi: Vec<f64>,
}

impl ChargeProfile {
    pub fn xi(&self) -> &[f64] {
        self.grid.points()
    }

    /// Largest |Q(ξ)| on the grid.
    pub fn max_abs_cumulative(&self) -> f64 {
        self.cumulative.iter().fold(0.0f64, |a, q| a.max(q.abs()))
    }
}

/// Checks that a profile was solved for the scenario's vortex order and interaction.
pub fn check_consistency(p: &CondensateProfile, ds: &DerivedScenario) -> Result<()> {
    let s = &ds.underlying;
    if p.vortex_order != s.vortex_order {
        return Err(Error::KindMismatch(format!(
            "profile has vortex order {}, scenario '{}' has {}",
            p.vortex_order, s.name, s.vortex_order
        )));
    }
    if (p.n1d_a - s.n1d_a).abs() > 1e-9 * s.n1d_a.abs().max(1.0) {
        return Err(Error::KindMismatch(format!(
            "profile was solved for n1d_a = {}, scenario '{}' has {}",
            p.n1d_a, s.name, s.n1d_a
        )));
    }
    Ok(())
}

/// ∫ d|ψ|²/dξ over [a, b] inside one grid cell, using the cubic interpolant of ψ.
fn cell_increment(grid: &RadialGrid, psi: &[f64], a: f64, b: f64) -> f64 {
    let h = b - a;
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(&t, w)| {
            let (v, dv) = grid.interpolate_with_slope(psi, a + t * h);
            w * 2.0 * v * dv
        })
        .sum::<f64>()
        * h
}

/// ∫₀^ξ d|ψ|²/dξ′ dξ′ plus the axial delta weight, on the grid.
///
/// The stretch [0, ξ_min] and the delta term together contribute |ψ(ξ_min)|².
fn enclosed_density(grid: &RadialGrid, psi: &[f64]) -> Vec<f64> {
    let xs = grid.points();
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = psi[0] * psi[0];
    out.push(acc);
    for w in xs.windows(2) {
        acc += cell_increment(grid, psi, w[0], w[1]);
        out.push(acc);
    }
    out
}

/// Areal charge density 2πξρ(ξ) and the enclosed charge Q(ξ).
pub fn areal_density(p: &CondensateProfile, ds: &DerivedScenario) -> Result<ChargeProfile> {
    check_consistency(p, ds)?;
    let areal_prefactor = ds.areal_prefactor();
    let coefficient = ds.charge_coefficient;
    let areal_density = density_derivative(p).into_iter().map(|d| areal_prefactor * d).collect();
    let cumulative: Vec<f64> = enclosed_density(&p.grid, &p.psi).into_iter().map(|q| coefficient * q).collect();
    Ok(ChargeProfile {
        grid: p.grid.clone(),
        kind: ds.kind(),
        total: *cumulative.last().unwrap(),
        areal_density,
        cumulative,
        coefficient,
        areal_prefactor,
        charge_constant: ds.charge_constant(),
        psi: p.psi.clone(),
    })
}

/// Q(ξ_cut): charge enclosed within ξ_cut.
pub fn cumulative_charge(cp: &ChargeProfile, xi_cut: f64) -> Result<f64> {
    let xs = cp.xi();
    if !(xi_cut >= xs[0] && xi_cut <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "xi_cut = {xi_cut} outside the grid range [{}, 1]",
            xs[0]
        )));
    }
    let i = match xs.partition_point(|&x| x <= xi_cut) {
        0 => 0,
        k => k - 1,
    };
    if xs[i] == xi_cut {
        return Ok(cp.cumulative[i]);
    }
    let partial = cell_increment(&cp.grid, &cp.psi, xs[i], xi_cut);
    Ok(cp.cumulative[i] + cp.coefficient * partial)
}

/// Diagnostics of global neutrality, all relative to max |ψ|² (equivalently max |Q|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralityReport {
    /// |ψ(0)|², the weight of the axial delta term, extrapolated linearly from the first two points.
    pub delta_weight: f64,
    /// |Q(1)| / max|Q|.
    pub total_residual: f64,
    /// |Q₊ + Q₋| / Q₊ over the positively and negatively charged cells.
    pub shell_imbalance: f64,
    pub delta_weight_ok: bool,
    pub total_ok: bool,
    pub shell_ok: bool,
}

impl NeutralityReport {
    pub fn passed(&self) -> bool {
        self.delta_weight_ok && self.total_ok && self.shell_ok
    }
}

pub fn neutrality_report(p: &CondensateProfile, ds: &DerivedScenario) -> Result<NeutralityReport> {
    check_consistency(p, ds)?;
    if p.vortex_order == 0 {
        return Err(Error::InvalidArgument("neutrality report needs a vortex (n >= 1)".into()));
    }
    let xs = p.xi();
    let psi = &p.psi;
    let peak = psi.iter().fold(0.0f64, |a, v| a.max(v * v));
    if peak == 0.0 {
        return Err(Error::InvalidArgument("profile is identically zero".into()));
    }
    let axis = psi[0] - xs[0] * (psi[1] - psi[0]) / (xs[1] - xs[0]);
    let delta_weight = axis * axis / peak;

    let enclosed = enclosed_density(&p.grid, psi);
    let q_max = enclosed.iter().fold(0.0f64, |a, q| a.max(q.abs()));
    let total_residual = enclosed.last().unwrap().abs() / q_max;

    let (mut positive, mut negative) = (enclosed[0].max(0.0), enclosed[0].min(0.0));
    for w in enclosed.windows(2) {
        let dq = w[1] - w[0];
        if dq > 0.0 {
            positive += dq;
        } else {
            negative += dq;
        }
    }
    let shell_imbalance = (positive + negative).abs() / positive;

    Ok(NeutralityReport {
        delta_weight,
        total_residual,
        shell_imbalance,
        delta_weight_ok: delta_weight < NEUTRALITY_TOL,
        total_ok: total_residual < NEUTRALITY_TOL,
        shell_ok: shell_imbalance < NEUTRALITY_TOL,
    })
}

/// Polar grid on an annulus ξ ∈ [inner, outer] excluding the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
    /// Radial intervals.
    pub radial: usize,
    /// Angular intervals over 2π.
    pub angular: usize,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64, radial: usize, angular: usize) -> Self {
        Annulus {
            inner,
            outer,
            radial,
            angular,
        }
    }

    /// Same annulus with both spacings halved.
    pub fn refined(&self) -> Self {
        Annulus::new(self.inner, self.outer, 2 * self.radial, 2 * self.angular)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCheck {
    /// max |discrete − closed form| divided by `scale`.
    pub max_residual: f64,
    /// max |closed form|, or max |V_r|/r when the closed form vanishes.
    pub scale: f64,
}

/// Compares the discrete divergence of V = Ṙ×𝒫 with (ħn/Mr) d𝒫/dr.
///
/// V is sampled as Cartesian components on the polar nodes and
/// differentiated with centred differences in r and φ, so the residual
/// falls as h² under refinement.
pub fn divergence_identity_check(p: &CondensateProfile, ds: &DerivedScenario, annulus: &Annulus) -> Result<DivergenceCheck> {
    check_consistency(p, ds)?;
    let Annulus {
        inner,
        outer,
        radial,
        angular,
    } = *annulus;
    if !(inner >= 0.05 && outer > inner && outer <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "annulus [{inner}, {outer}] must satisfy 0.05 <= inner < outer <= 1"
        )));
    }
    if radial < 4 || angular < 8 {
        return Err(Error::InvalidArgument(
            "annulus needs >= 4 radial and >= 8 angular intervals".into(),
        ));
    }
    let s = &ds.underlying;
    let r0 = s.radius;
    // 𝒫 = polarisation·|ψ|², V_r = circulation·𝒫/r
    let polarisation = ds.line_polarisation() / (2.0 * PI * r0 * r0);
    let circulation = SI.hbar * f64::from(s.vortex_order) / s.mass;

    let dxi = (outer - inner) / radial as f64;
    let dr = dxi * r0;
    let dphi = 2.0 * PI / angular as f64;
    let radii: Vec<f64> = (0..=radial).map(|i| (inner + i as f64 * dxi) * r0).collect();
    let v_r: Vec<f64> = radii
        .iter()
        .map(|&r| circulation * polarisation * p.density_at(r / r0) / r)
        .collect();
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..angular)
        .map(|j| (j as f64 * dphi).cos())
        .zip((0..angular).map(|j| (j as f64 * dphi).sin()))
        .unzip();
    let vx = |i: usize, j: usize| v_r[i] * cos[j % angular];
    let vy = |i: usize, j: usize| v_r[i] * sin[j % angular];

    let density = p.density();
    let mut worst = 0.0f64;
    let mut exact_scale = 0.0f64;
    let mut term_scale = 0.0f64;
    for i in 1..radial {
        let r = radii[i];
        let slope = p.grid.derivative(&density, r / r0) / r0;
        let exact = circulation * polarisation * slope / r;
        exact_scale = exact_scale.max(exact.abs());
        term_scale = term_scale.max((v_r[i] / r).abs());
        for j in 0..angular {
            let (jp, jm) = (j + 1, j + angular - 1);
            let dvx_dr = (vx(i + 1, j) - vx(i - 1, j)) / (2.0 * dr);
            let dvy_dr = (vy(i + 1, j) - vy(i - 1, j)) / (2.0 * dr);
            let dvx_dphi = (vx(i, jp) - vx(i, jm)) / (2.0 * dphi);
            let dvy_dphi = (vy(i, jp) - vy(i, jm)) / (2.0 * dphi);
            let div = cos[j] * dvx_dr - sin[j] / r * dvx_dphi + sin[j] * dvy_dr + cos[j] / r * dvy_dphi;
            worst = worst.max((div - exact).abs());
        }
    }
    // a closed form at rounding level (uniform density) counts as zero
    let scale = if exact_scale > 1e-10 * term_scale {
        exact_scale
    } else {
        term_scale
    };
    Ok(DivergenceCheck {
        max_residual: if scale > 0.0 { worst / scale } else { worst },
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp_radial::{solve_profile, DEFAULT_TOL};
    use crate::quantities::{derive_geometry, Scenario, Source};

    fn rb87_with(n: u32, n1d_a: f64) -> DerivedScenario {
        let mut s = Scenario::rb87();
        s.vortex_order = n;
        s.n1d_a = n1d_a;
        derive_geometry(&s).unwrap()
    }

    fn solved(n: u32, n1d_a: f64) -> CondensateProfile {
        solve_profile(n, n1d_a, &RadialGrid::default(), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn enclosed_charge_telescopes() {
        let p = solved(1, 100.0);
        let ds = rb87_with(1, 100.0);
        let cp = areal_density(&p, &ds).unwrap();
        for xi in [0.01, 0.1, 0.25, 0.5, 0.731, 0.99] {
            let q = cumulative_charge(&cp, xi).unwrap();
            let want = ds.charge_coefficient * p.density_at(xi);
            assert!(((q - want) / want).abs() < 1e-6, "xi={xi}: {q} vs {want}");
        }
        assert!(cp.total.abs() < 1e-8 * cp.max_abs_cumulative());
        assert_eq!(cumulative_charge(&cp, 1.0).unwrap(), cp.total);
    }

    #[test]
    fn sign_structure_follows_density() {
        let p = solved(1, 100.0);
        let cp = areal_density(&p, &rb87_with(1, 100.0)).unwrap();
        let m = cp.areal_density.len();
        assert!(cp.areal_density[m / 20] > 0.0);
        assert!(cp.areal_density[m - 2] < 0.0);
        assert!(cp.cumulative.iter().all(|&q| q >= -1e-12 * cp.max_abs_cumulative()));
    }

    #[test]
    fn no_vortex_no_charge() {
        let p = solved(0, 10.0);
        let cp = areal_density(&p, &rb87_with(0, 10.0)).unwrap();
        assert!(cp.areal_density.iter().chain(&cp.cumulative).all(|&v| v == 0.0));
        assert!(neutrality_report(&p, &rb87_with(0, 10.0)).is_err());
    }

    #[test]
    fn electric_and_magnetic_sources_are_negatives() {
        let p = solved(1, 10.0);
        let electric = rb87_with(1, 10.0);
        let mut s = electric.underlying.clone();
        let d = match s.source {
            Source::ElectricDipole { dipole } => dipole,
            _ => unreachable!(),
        };
        s.source = Source::MagneticDipole { moment: d / SI.mu0 };
        let magnetic = derive_geometry(&s).unwrap();
        let a = areal_density(&p, &electric).unwrap();
        let b = areal_density(&p, &magnetic).unwrap();
        assert_eq!(a.kind, DipoleKind::ElectricDipole);
        for (x, y) in a.areal_density.iter().zip(&b.areal_density) {
            let (x, y) = (x / a.charge_constant, y / b.charge_constant);
            assert!((x + y).abs() <= 1e-14 * x.abs().max(1e-300));
        }
        let (qa, qb) = (a.coefficient / a.charge_constant, b.coefficient / b.charge_constant);
        assert!((qa + qb).abs() < 1e-14 * qa.abs());
    }

    #[test]
    fn mismatched_profile_is_rejected() {
        let p = solved(1, 10.0);
        assert!(matches!(areal_density(&p, &rb87_with(2, 10.0)), Err(Error::KindMismatch(_))));
        assert!(matches!(areal_density(&p, &rb87_with(1, 100.0)), Err(Error::KindMismatch(_))));
    }

    #[test]
    fn cut_outside_grid_is_rejected() {
        let p = solved(1, 10.0);
        let cp = areal_density(&p, &rb87_with(1, 10.0)).unwrap();
        assert!(cumulative_charge(&cp, 0.0).is_err());
        assert!(cumulative_charge(&cp, 1.5).is_err());
    }

    #[test]
    fn neutral_profiles_pass() {
        for a in [0.0, 10.0, 100.0] {
            let r = neutrality_report(&solved(1, a), &rb87_with(1, a)).unwrap();
            assert!(r.passed(), "{a}: {r:?}");
            assert!(r.delta_weight < 1e-12);
        }
    }

    #[test]
    fn wall_leak_is_flagged() {
        let grid = RadialGrid::default();
        let psi: Vec<f64> = grid.points().iter().map(|&x| x * (1.5 - x)).collect();
        let p = CondensateProfile::from_samples(grid, psi, 1, 100.0, 0.0);
        let r = neutrality_report(&p, &rb87_with(1, 100.0)).unwrap();
        assert!(!r.total_ok && !r.passed());
        assert!(r.delta_weight_ok);
    }

    #[test]
    fn divergence_identity_converges_at_second_order() {
        let p = solved(1, 0.0);
        let ds = rb87_with(1, 0.0);
        // n1d_a = 0 leaves no polarisation in the Rb scenario; use the helium source instead.
        let mut s = Scenario::helium();
        s.vortex_order = 1;
        s.n1d_a = 0.0;
        let ds_induced = derive_geometry(&s).unwrap();
        assert_eq!(
            divergence_identity_check(&p, &ds, &Annulus::new(0.05, 0.95, 16, 32)).unwrap().scale,
            0.0
        );

        let mut annulus = Annulus::new(0.05, 0.95, 32, 64);
        let mut residuals = Vec::new();
        for _ in 0..3 {
            residuals.push(divergence_identity_check(&p, &ds_induced, &annulus).unwrap().max_residual);
            annulus = annulus.refined();
        }
        for w in residuals.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 4.0).abs() < 0.5, "{residuals:?}");
        }
    }

    #[test]
    fn divergence_identity_holds_for_magnetic_moments() {
        let p = solved(1, 100.0);
        let ds = derive_geometry(&Scenario::hydrogen()).unwrap();
        assert_eq!(ds.kind(), DipoleKind::MagneticDipole);
        let coarse = divergence_identity_check(&p, &ds, &Annulus::new(0.05, 0.95, 64, 64)).unwrap();
        let fine = divergence_identity_check(&p, &ds, &Annulus::new(0.05, 0.95, 128, 128)).unwrap();
        assert!(fine.max_residual < 0.3 * coarse.max_residual);
        assert!(fine.max_residual < 1e-2);
    }

    #[test]
    fn divergence_of_constant_density_vanishes() {
        let grid = RadialGrid::default();
        let n = grid.len();
        let p = CondensateProfile::from_samples(grid, vec![1.0; n], 1, 100.0, 0.0);
        let ds = rb87_with(1, 100.0);
        let coarse = divergence_identity_check(&p, &ds, &Annulus::new(0.1, 0.9, 32, 64)).unwrap();
        let fine = divergence_identity_check(&p, &ds, &Annulus::new(0.1, 0.9, 64, 128)).unwrap();
        assert!(coarse.max_residual < 0.1, "{coarse:?}");
        assert!(fine.max_residual < 0.3 * coarse.max_residual);
    }

    #[test]
    fn annulus_must_avoid_axis() {
        let p = solved(1, 0.0);
        let ds = rb87_with(1, 0.0);
        assert!(divergence_identity_check(&p, &ds, &Annulus::new(0.01, 0.9, 16, 32)).is_err());
    }
}
