//! Scaling potentials and charge coefficients of the built-in scenarios.

use vortexem::quantities::{derive_geometry, Scenario};

fn main() -> vortexem::Result<()> {
    for name in Scenario::PRESETS {
        let s = Scenario::preset(name).expect("preset");
        let ds = derive_geometry(&s)?;
        let kind = ds.kind();
        println!("{name} ({kind})");
        println!("  n1d = {:.3e} /m, N = {:.3e}, f = {}", ds.n1d, ds.atom_count, ds.aspect);
        println!("  phi0 = {:.3e} {}", ds.phi0, kind.potential_unit());
        println!("  Q coefficient = {:.3e} {}", ds.charge_coefficient, kind.charge_unit());
        for a in &s.assumptions {
            println!("  assumes: {a}");
        }
    }
    Ok(())
}
