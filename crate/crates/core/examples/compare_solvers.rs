//! Shooting against finite-difference relaxation on the same grid.

use std::time::Instant;

use vortexem::gp_radial::{relax_profile, solve_profile, RadialGrid, DEFAULT_TOL};

fn main() -> vortexem::Result<()> {
    let grid = RadialGrid::default();
    for n in [1, 2] {
        for n1d_a in [0.0, 0.1, 10.0, 100.0] {
            let t = Instant::now();
            let a = solve_profile(n, n1d_a, &grid, DEFAULT_TOL)?;
            let ta = t.elapsed();
            let t = Instant::now();
            let b = relax_profile(n, n1d_a, &grid, DEFAULT_TOL)?;
            let tb = t.elapsed();
            let diff: f64 = a.psi.iter().zip(&b.psi).map(|(x, y)| (x - y).powi(2)).sum();
            let norm: f64 = a.psi.iter().map(|x| x * x).sum();
            println!(
                "n = {n}, n1d*a = {n1d_a:>5}: rel L2 {:.1e}, d(eps) {:.1e}  ({ta:.1?} / {tb:.1?})",
                (diff / norm).sqrt(),
                (a.eigenvalue - b.eigenvalue).abs(),
            );
        }
    }
    Ok(())
}
