//! Radial vortex profiles for a few interaction strengths.
//!
//! cargo run --release --example solve_profile

use vortexem::gp_radial::{first_zero, solve_profile, RadialGrid, DEFAULT_TOL};

fn main() -> vortexem::Result<()> {
    let grid = RadialGrid::default();
    let j = first_zero(1);
    println!("bessel limit: eps = j_1,1^2 = {:.6}", j * j);
    for n1d_a in [0.0, 0.1, 10.0, 100.0] {
        let p = solve_profile(1, n1d_a, &grid, DEFAULT_TOL)?;
        let peak = p
            .xi()
            .iter()
            .zip(p.density())
            .fold((0.0, 0.0), |best, (&x, d)| if d > best.1 { (x, d) } else { best });
        println!(
            "n1d*a = {n1d_a:>5}: eps = {:>12.6}  |psi(1/2)|^2 = {:.5}  peak {:.4} at xi = {:.3}",
            p.eigenvalue,
            p.density_at_half(),
            peak.1,
            peak.0
        );
    }
    Ok(())
}
