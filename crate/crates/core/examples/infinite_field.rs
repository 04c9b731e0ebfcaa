//! Field inside an infinitely long cylinder: closed form against Gauss's law.

use vortexem::fields::{gauss_field, h_field_infinite};
use vortexem::gp_radial::{solve_profile, RadialGrid, DEFAULT_TOL};
use vortexem::monopole::areal_density;
use vortexem::quantities::{derive_geometry, Scenario};

fn main() -> vortexem::Result<()> {
    let ds = derive_geometry(&Scenario::rb87())?;
    let p = solve_profile(1, 100.0, &RadialGrid::default(), DEFAULT_TOL)?;
    let cp = areal_density(&p, &ds)?;
    let unit = ds.kind().field_unit();
    println!("prefactor {:.4e} {unit}", ds.field_prefactor());
    println!("{:>6} {:>14} {:>14}", "xi", "H", "gauss");
    for k in 1..=12 {
        let xi = k as f64 / 10.0;
        let h = h_field_infinite(&p, &ds, xi)?;
        let g = if xi < 1.0 { gauss_field(&cp, &ds, xi)? } else { 0.0 };
        println!("{xi:>6.2} {h:>14.6e} {g:>14.6e}");
    }
    Ok(())
}
