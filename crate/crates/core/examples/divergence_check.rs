//! Discrete divergence of R_dot x P against its closed radial form.

use vortexem::gp_radial::{solve_profile, RadialGrid, DEFAULT_TOL};
use vortexem::monopole::{divergence_identity_check, Annulus};
use vortexem::quantities::{derive_geometry, Scenario};

fn main() -> vortexem::Result<()> {
    let ds = derive_geometry(&Scenario::rb87())?;
    let p = solve_profile(1, 100.0, &RadialGrid::default(), DEFAULT_TOL)?;
    let mut annulus = Annulus::new(0.05, 0.95, 32, 64);
    let mut last: Option<f64> = None;
    for _ in 0..4 {
        let c = divergence_identity_check(&p, &ds, &annulus)?;
        let ratio = last.map(|l| format!("{:.2}", l / c.max_residual)).unwrap_or_default();
        println!(
            "{:>4} x {:<4} residual {:.3e} {ratio}",
            annulus.radial, annulus.angular, c.max_residual
        );
        last = Some(c.max_residual);
        annulus = annulus.refined();
    }
    Ok(())
}
