//! Potential of a finite cylinder (z0 = R0) on a coarse grid, and the field from it.
//!
//! Pass an output path to also write the CSV and JSON sidecar:
//! cargo run --release --example potential_grid -- /tmp/phi.csv

use std::path::PathBuf;

use vortexem::fields::{field_from_potential, potential_grid, GridSpec};
use vortexem::gp_radial::{solve_profile, RadialGrid, DEFAULT_TOL};
use vortexem::io::write_potential;
use vortexem::quantities::{derive_geometry, Scenario};

fn main() -> vortexem::Result<()> {
    let ds = derive_geometry(&Scenario::rb87())?;
    let p = solve_profile(1, 100.0, &RadialGrid::default(), DEFAULT_TOL)?;
    let spec = GridSpec {
        nxi: 21,
        nz: 21,
        ..GridSpec::default()
    };
    let pg = potential_grid(&p, &ds, &spec)?;
    println!("phi0 = {:.4e} {}, f = {}", pg.phi0, pg.phi0_unit, pg.f_aspect);

    // rows: z from top to bottom, columns: xi
    for j in (0..pg.nz()).rev().step_by(4) {
        let row: Vec<String> = (0..pg.nxi()).step_by(2).map(|i| format!("{:6.2}", pg.at(i, j))).collect();
        println!("z = {:4.1} | {}", pg.z_values[j], row.join(" "));
    }

    let field = field_from_potential(&pg)?;
    let mid = pg.nz() / 4;
    println!("radial field at z = {:.1} (units of phi0/R0):", pg.z_values[mid]);
    for i in (0..pg.nxi()).step_by(4) {
        println!("  xi = {:.1}: {:+.3}", pg.xi_values[i], field.radial[i * pg.nz() + mid]);
    }

    if let Some(path) = std::env::args_os().nth(1).map(PathBuf::from) {
        write_potential(&path, &pg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
