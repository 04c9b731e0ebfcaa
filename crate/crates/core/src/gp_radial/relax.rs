//! Relaxation solver used as an independent check on the shooting solver.
//!
//! The radial equation is discretised with three-point differences,
//!
//! ```text
//! (ψᵢ₊₁ − 2ψᵢ + ψᵢ₋₁)/h² + (ψᵢ₊₁ − ψᵢ₋₁)/(2hξᵢ) − n²ψᵢ/ξᵢ² + εψᵢ − gψᵢ³ = 0,
//! ```
//!
//! with ψ(ξ_min) ∝ ξ_minⁿ and ψ(1) = 0 as boundary rows and the trapezoid
//! normalisation as the bordering row for the unknown ε. Damped Newton
//! with continuation in g solves the system. Each Jacobian is tridiagonal
//! plus one dense row and column, eliminated directly in O(N). The
//! system is solved on the grid and on two successive bisections of it,
//! and the three results are Richardson-extrapolated back to the grid
//! points to cancel the h² and h⁴ error terms. The eigenvalue is the
//! Rayleigh quotient of the discrete operator, extrapolated the same way.

use super::bessel::first_zero;
use super::grid::RadialGrid;
use super::profile::{CondensateProfile, SolverTag};
use super::shooting::{bessel_profile, validate_inputs};
use crate::error::{Error, Result};

const MAX_NEWTON: usize = 60;
const REFINEMENTS: [usize; 3] = [1, 2, 4];

struct Discretisation {
    xs: Vec<f64>,
    weights: Vec<f64>,
    n: u32,
    /// Off-diagonal and diagonal stencil coefficients of the linear operator
    /// (excluding ε) for rows 1..m.
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    /// ψ₀ = axis_ratio · ψ₁ for n ≥ 1.
    axis_ratio: f64,
}

impl Discretisation {
    fn new(xs: Vec<f64>, n: u32) -> Self {
        let len = xs.len();
        let mut weights = vec![0.0; len];
        for i in 0..len - 1 {
            let h = xs[i + 1] - xs[i];
            weights[i] += 0.5 * h;
            weights[i + 1] += 0.5 * h;
        }
        let n2 = f64::from(n * n);
        let mut lower = vec![0.0; len];
        let mut diag = vec![0.0; len];
        let mut upper = vec![0.0; len];
        for i in 1..len - 1 {
            let (hm, hp) = (xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
            let x = xs[i];
            // second derivative and first derivative on a (possibly) non-uniform stencil
            let d2m = 2.0 / (hm * (hm + hp));
            let d2p = 2.0 / (hp * (hm + hp));
            let d1m = -hp / (hm * (hm + hp));
            let d1p = hm / (hp * (hm + hp));
            let d1c = (hp - hm) / (hm * hp);
            lower[i] = d2m + d1m / x;
            upper[i] = d2p + d1p / x;
            diag[i] = -(d2m + d2p) + d1c / x - n2 / (x * x);
        }
        let axis_ratio = if n == 0 { 1.0 } else { (xs[0] / xs[1]).powi(n as i32) };
        Discretisation {
            xs,
            weights,
            n,
            lower,
            diag,
            upper,
            axis_ratio,
        }
    }

    /// Number of unknown ψ values (ψ at ξ = 1 is fixed to zero).
    fn unknowns(&self) -> usize {
        self.xs.len() - 1
    }

    fn psi_at(&self, psi: &[f64], i: usize) -> f64 {
        if i < psi.len() {
            psi[i]
        } else {
            0.0
        }
    }

    /// Axis row for n = 0: ψ'' + ψ'/ξ → 2ψ'' with a mirrored ghost point.
    fn axis_row_n0(&self, psi: &[f64], eps: f64, g: f64) -> (f64, f64, f64) {
        let h = self.xs[1] - self.xs[0];
        let c = 4.0 / (h * h);
        let p0 = psi[0];
        let r = c * (psi[1] - p0) + (eps - g * p0 * p0) * p0;
        (r, -c + eps - 3.0 * g * p0 * p0, c)
    }

    fn residual(&self, psi: &[f64], eps: f64, g: f64) -> (Vec<f64>, f64) {
        let m = self.unknowns();
        let mut r = vec![0.0; m];
        r[0] = if self.n == 0 {
            self.axis_row_n0(psi, eps, g).0
        } else {
            psi[0] - self.axis_ratio * psi[1]
        };
        for i in 1..m {
            let p = psi[i];
            r[i] = self.lower[i] * psi[i - 1] + self.diag[i] * p + self.upper[i] * self.psi_at(psi, i + 1) + eps * p - g * p * p * p;
        }
        let norm: f64 = (0..m).map(|i| self.weights[i] * self.xs[i] * psi[i] * psi[i]).sum();
        (r, norm - 1.0)
    }

    /// Newton step for the bordered system
    /// ```text
    /// [T  b] [δψ]   [−F]
    /// [cᵀ 0] [δε] = [−G]
    /// ```
    /// by elimination along the tridiagonal T carrying the dense row and column.
    fn newton_step(&self, psi: &[f64], eps: f64, g: f64, f: &[f64], gn: f64) -> Option<(Vec<f64>, f64)> {
        let m = self.unknowns();
        let mut lo = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut up = vec![0.0; m];
        let mut col = vec![0.0; m];
        let mut rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        if self.n == 0 {
            let (_, dd, uu) = self.axis_row_n0(psi, eps, g);
            d[0] = dd;
            up[0] = uu;
            col[0] = psi[0];
        } else {
            d[0] = 1.0;
            up[0] = -self.axis_ratio;
        }
        for i in 1..m {
            lo[i] = self.lower[i];
            d[i] = self.diag[i] + eps - 3.0 * g * psi[i] * psi[i];
            up[i] = if i + 1 < m { self.upper[i] } else { 0.0 };
            col[i] = psi[i];
        }
        let mut row: Vec<f64> = (0..m).map(|i| 2.0 * self.weights[i] * self.xs[i] * psi[i]).collect();
        let mut corner = 0.0;
        let mut row_rhs = -gn;

        for k in 0..m - 1 {
            if d[k] == 0.0 {
                return None;
            }
            let f1 = lo[k + 1] / d[k];
            d[k + 1] -= f1 * up[k];
            col[k + 1] -= f1 * col[k];
            rhs[k + 1] -= f1 * rhs[k];
            let f2 = row[k] / d[k];
            row[k + 1] -= f2 * up[k];
            corner -= f2 * col[k];
            row_rhs -= f2 * rhs[k];
        }
        // 2×2 system in (ψ_{m−1}, ε)
        let (a11, a12, a21, a22) = (d[m - 1], col[m - 1], row[m - 1], corner);
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut dpsi = vec![0.0; m];
        let deps = (a11 * row_rhs - a21 * rhs[m - 1]) / det;
        dpsi[m - 1] = (rhs[m - 1] * a22 - a12 * row_rhs) / det;
        for k in (0..m - 1).rev() {
            dpsi[k] = (rhs[k] - up[k] * dpsi[k + 1] - col[k] * deps) / d[k];
        }
        Some((dpsi, deps))
    }

    fn newton(&self, mut psi: Vec<f64>, mut eps: f64, g: f64, tol: f64) -> Option<(Vec<f64>, f64, f64)> {
        let merit = |r: &[f64], gn: f64| r.iter().fold(gn.abs(), |a, v| a.max(v.abs()));
        let stencil = self.diag.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let (mut f, mut gn) = self.residual(&psi, eps, g);
        let mut current = merit(&f, gn);
        let mut previous_step = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let amplitude = psi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let scale = (stencil + eps.abs() + g * amplitude * amplitude) * amplitude;
            // rounding floor of the residual rows
            let noise = 1e3 * f64::EPSILON * scale;
            let (dpsi, deps) = self.newton_step(&psi, eps, g, &f, gn)?;
            let mut lambda = 1.0;
            loop {
                let trial: Vec<f64> = psi.iter().zip(&dpsi).map(|(p, d)| p + lambda * d).collect();
                let trial_eps = eps + lambda * deps;
                let (tf, tg) = self.residual(&trial, trial_eps, g);
                let tm = merit(&tf, tg);
                if tm.is_finite() && (tm < current || tm <= noise) {
                    psi = trial;
                    eps = trial_eps;
                    f = tf;
                    gn = tg;
                    current = tm;
                    break;
                }
                lambda *= 0.5;
                if lambda < 1e-4 {
                    return (current <= noise).then_some((psi, eps, current / scale));
                }
            }
            let step = dpsi.iter().fold(0.0f64, |a, v| a.max(v.abs())) * lambda / amplitude;
            let converged = step < 1e-2 * tol && (deps * lambda).abs() < tol * eps.abs().max(1.0);
            let stagnated = current <= noise && step > 0.5 * previous_step;
            if converged || stagnated {
                // residual relative to the size of the operator terms
                return Some((psi, eps, current / scale));
            }
            previous_step = step;
        }
        None
    }

    /// Rayleigh quotient ε = ⟨ψ, −Lψ + gψ³⟩ / ⟨ψ, ψ⟩ with weights ξ on the interior rows.
    fn rayleigh_quotient(&self, psi: &[f64], g: f64) -> f64 {
        let m = self.unknowns();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 1..m {
            let p = psi[i];
            let lp = self.lower[i] * psi[i - 1] + self.diag[i] * p + self.upper[i] * self.psi_at(psi, i + 1);
            let w = self.weights[i] * self.xs[i];
            num += w * p * (-lp + g * p * p * p);
            den += w * p * p;
        }
        num / den
    }
}

fn refine(points: &[f64], factor: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity((points.len() - 1) * factor + 1);
    for w in points.windows(2) {
        for k in 0..factor {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / factor as f64);
        }
    }
    out.push(*points.last().unwrap());
    out
}

struct RelaxedSolution {
    psi: Vec<f64>,
    eigenvalue: f64,
    residual: f64,
}

fn solve_on(xs: Vec<f64>, n: u32, g_target: f64, tol: f64, start: Option<(&[f64], &[f64], f64)>) -> Result<RelaxedSolution> {
    let disc = Discretisation::new(xs, n);
    let m = disc.unknowns();
    let fail = |residual: f64| Error::NonConvergence {
        solver: "relaxation",
        iterations: MAX_NEWTON,
        boundary_residual: residual,
        norm_residual: f64::NAN,
    };

    // Warm start from a coarser solution (linear interpolation), else the Bessel profile.
    let (mut psi, mut eps, mut g) = match start {
        Some((coarse_x, coarse_psi, eps)) => {
            let psi: Vec<f64> = disc.xs[..m]
                .iter()
                .map(|&x| {
                    let k = coarse_x.partition_point(|&c| c <= x).clamp(1, coarse_x.len() - 1);
                    let t = (x - coarse_x[k - 1]) / (coarse_x[k] - coarse_x[k - 1]);
                    coarse_psi[k - 1] + t * (coarse_psi[k] - coarse_psi[k - 1])
                })
                .collect();
            (psi, eps, g_target)
        }
        None => {
            let bessel = bessel_profile(n);
            let j = first_zero(n);
            (disc.xs[..m].iter().map(|&x| bessel(x).0).collect(), j * j, 0.0)
        }
    };
    let (p, e, mut residual) = disc.newton(psi, eps, g, tol).ok_or_else(|| fail(f64::NAN))?;
    psi = p;
    eps = e;

    let mut step = g_target.min(4.0);
    let mut attempts = 0;
    while g < g_target {
        attempts += 1;
        let next = (g + step).min(g_target);
        let mean_psi4: f64 = (0..m).map(|i| disc.weights[i] * disc.xs[i] * psi[i].powi(4)).sum();
        match disc.newton(psi.clone(), eps + (next - g) * mean_psi4, next, tol) {
            Some((p, e, r)) => {
                psi = p;
                eps = e;
                residual = r;
                g = next;
                step *= 2.0;
            }
            None => {
                step *= 0.25;
                if step < 1e-6 * g_target || attempts > 200 {
                    return Err(fail(residual));
                }
            }
        }
    }
    let eigenvalue = disc.rayleigh_quotient(&psi, g_target);
    psi.push(0.0);
    Ok(RelaxedSolution { psi, eigenvalue, residual })
}

/// Ground radial vortex state by finite-difference relaxation.
pub fn relax_profile(n: u32, n1d_a: f64, grid: &RadialGrid, tol: f64) -> Result<CondensateProfile> {
    validate_inputs(grid, n1d_a, tol)?;
    let g = 4.0 * n1d_a;
    let mut levels: Vec<RelaxedSolution> = Vec::with_capacity(REFINEMENTS.len());
    let mut previous: Option<(Vec<f64>, usize)> = None;
    for &factor in &REFINEMENTS {
        let xs = refine(grid.points(), factor);
        let solution = match &previous {
            None => solve_on(xs.clone(), n, g, tol, None)?,
            Some((coarse_x, idx)) => {
                let prev = &levels[*idx];
                solve_on(xs.clone(), n, g, tol, Some((coarse_x, &prev.psi, prev.eigenvalue)))?
            }
        };
        levels.push(solution);
        previous = Some((xs, levels.len() - 1));
    }

    // Romberg: h², h⁴ elimination with spacings h, h/2, h/4.
    let extrapolate = |a: f64, b: f64, c: f64| (64.0 * c - 20.0 * b + a) / 45.0;
    let count = grid.len();
    let mut psi: Vec<f64> = (0..count)
        .map(|i| extrapolate(levels[0].psi[i], levels[1].psi[2 * i], levels[2].psi[4 * i]))
        .collect();
    let eigenvalue = extrapolate(levels[0].eigenvalue, levels[1].eigenvalue, levels[2].eigenvalue);
    let norm = grid.radial_norm(&psi);
    let scale = norm.sqrt();
    psi.iter_mut().for_each(|p| *p /= scale);
    psi[count - 1] = 0.0;
    let residual = levels.iter().fold(0.0f64, |a, l| a.max(l.residual));

    let profile = CondensateProfile {
        grid: grid.clone(),
        psi,
        eigenvalue,
        vortex_order: n,
        n1d_a,
        solver: SolverTag::Relaxation,
        residual,
    };
    match profile.interior_nodes() {
        0 => Ok(profile),
        nodes => Err(Error::NodeDetected { nodes }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp_radial::solve_profile;

    fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    #[test]
    fn bordered_step_solves_linearised_system() {
        // One Newton step on a linear problem lands on the discrete eigenpair.
        let grid = RadialGrid::uniform(200, 1e-6).unwrap();
        let disc = Discretisation::new(grid.points().to_vec(), 1);
        let bessel = bessel_profile(1);
        let psi: Vec<f64> = grid.points()[..199].iter().map(|&x| bessel(x).0).collect();
        let (p, e, r) = disc.newton(psi, 14.0, 0.0, 1e-12).unwrap();
        assert!(r < 1e-9);
        assert!((e - first_zero(1).powi(2)).abs() < 0.01);
        assert!((disc.rayleigh_quotient(&p, 0.0) - e).abs() < 1e-8);
    }

    #[test]
    fn agrees_with_shooting() {
        let grid = RadialGrid::default();
        for n in [0, 1, 2] {
            for a in [0.0, 0.1, 10.0, 100.0] {
                let r = relax_profile(n, a, &grid, 1e-10).unwrap();
                let s = solve_profile(n, a, &grid, 1e-10).unwrap();
                assert!(rel_l2(&r.psi, &s.psi) < 1e-6, "n={n} a={a}");
                assert!(((r.eigenvalue - s.eigenvalue) / s.eigenvalue).abs() < 1e-6, "n={n} a={a}");
                assert!(r.residual < 1e-9, "n={n} a={a}: {}", r.residual);
            }
        }
    }

    #[test]
    fn bessel_eigenvalues() {
        let grid = RadialGrid::default();
        let e1 = relax_profile(1, 0.0, &grid, 1e-10).unwrap().eigenvalue;
        assert!((e1 - 14.681970642123895).abs() < 1e-4);
        let e2 = relax_profile(2, 0.0, &grid, 1e-10).unwrap().eigenvalue;
        assert!((e2 - 26.374616427163392).abs() < 1e-4);
    }
}
