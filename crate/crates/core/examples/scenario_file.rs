//! Custom scenarios in the flat `key = value` format.

use std::path::Path;

use vortexem::quantities::{derive_geometry, Scenario};

const SODIUM: &str = "\
# sodium in a wider trap, dipole in debye
kind = electric_dipole
n = 2
mass_amu = 22.98977
dipole_debye = 0.5
scattering_a_angstrom = 27.5
n1d_a = 50
R0_m = 5e-6
z0_m = 10e-6
";

fn main() -> vortexem::Result<()> {
    let s = Scenario::parse(SODIUM, "sodium", Path::new("<inline>"))?;
    let ds = derive_geometry(&s)?;
    println!(
        "f = {}, N = {:.3e}, phi0 = {:.3e} {}",
        ds.aspect,
        ds.atom_count,
        ds.phi0,
        ds.kind().potential_unit()
    );

    // round trip through the file format
    let again = Scenario::parse(&s.to_file_format(), "sodium", Path::new("<roundtrip>"))?;
    assert_eq!(again.source, s.source);
    print!("{}", s.to_file_format());

    let bad = "kind = electric_dipole\nn = 1\nmass_amu = 87\n";
    if let Err(e) = Scenario::parse(bad, "bad", Path::new("bad.scenario")) {
        println!("rejected: {e}");
    }
    Ok(())
}
