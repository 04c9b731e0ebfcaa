//! Monopole charge of the Rb-87 vortex and the neutrality diagnostics.

use vortexem::gp_radial::{solve_profile, RadialGrid, DEFAULT_TOL};
use vortexem::monopole::{areal_density, cumulative_charge, neutrality_report};
use vortexem::quantities::{derive_geometry, Scenario};

fn main() -> vortexem::Result<()> {
    let ds = derive_geometry(&Scenario::rb87())?;
    let p = solve_profile(1, 100.0, &RadialGrid::default(), DEFAULT_TOL)?;
    let cp = areal_density(&p, &ds)?;
    let unit = cp.kind.charge_unit();

    println!("Q(xi) = {:.4e} {unit} * |psi(xi)|^2", cp.coefficient);
    for xi in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        println!("  Q({xi:<4}) = {:+.4e} {unit}", cumulative_charge(&cp, xi)?);
    }

    let r = neutrality_report(&p, &ds)?;
    println!("delta weight      {:.2e}", r.delta_weight);
    println!("Q(1) / max|Q|     {:.2e}", r.total_residual);
    println!("shell imbalance   {:.2e}", r.shell_imbalance);
    println!("neutral: {}", r.passed());
    Ok(())
}
