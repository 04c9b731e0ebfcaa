//! Shooting solver for the radial vortex equation
//!
//! ```text
//! ψ'' + ψ'/ξ − n²ψ/ξ² + εψ − g ψ³ = 0,   g = 4·n₁d·a,
//! ```
//!
//! with ψ(1) = 0 and ∫₀¹ ξψ² dξ = 1 (trapezoid rule on the grid).
//!
//! Integration starts at ξ_min from the regular series ψ ≈ Cξⁿ(1 + αξ²)
//! and proceeds outward with classical RK4, sub-stepping geometrically
//! towards the axis. On the flat Thomas–Fermi plateau perturbations grow
//! like exp(√(2ε)·ξ), so a single shot loses all precision for large
//! n₁d·a. The interval is therefore cut into segments whose lengths keep
//! that growth small, and the unknowns (C, ε, ψ and ψ' at each segment
//! start) are found by Newton's method on the matching conditions, the
//! wall condition and the normalisation. Jacobians come from the
//! variational equations integrated alongside ψ. The interaction strength
//! is ramped up from the exact Bessel solution at g = 0.

use super::bessel::{bessel_j, first_zero};
use super::grid::RadialGrid;
use super::profile::{CondensateProfile, SolverTag};
use crate::error::{Error, Result};
use crate::numerics::solve_dense;

/// Sub-steps per grid interval away from the axis.
const SUBSTEPS: usize = 2;
/// Near the axis the step is capped at this fraction of ξ.
const AXIS_STEP_FRACTION: f64 = 0.05;
/// Target exponential growth √(2ε)·(segment length) per segment.
const SEGMENT_GROWTH: f64 = 2.5;
const MAX_SEGMENTS: usize = 96;
const MAX_NEWTON: usize = 40;
const BLOWUP: f64 = 1e12;
// Matching residual reachable in double precision when ε is large.
const ROUNDING_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
struct Equation {
    n: u32,
    eps: f64,
    g: f64,
}

/// ψ, ψ', ∂(ψ,ψ')/∂(ψ₀,ψ'₀) and ∂(ψ,ψ')/∂ε.
#[derive(Debug, Clone, Copy)]
struct State {
    p: f64,
    q: f64,
    phi: [[f64; 2]; 2],
    s: [f64; 2],
}

impl State {
    fn start(p: f64, q: f64) -> Self {
        State {
            p,
            q,
            phi: [[1.0, 0.0], [0.0, 1.0]],
            s: [0.0, 0.0],
        }
    }

    fn axpy(&self, h: f64, k: &State) -> State {
        State {
            p: self.p + h * k.p,
            q: self.q + h * k.q,
            phi: [
                [self.phi[0][0] + h * k.phi[0][0], self.phi[0][1] + h * k.phi[0][1]],
                [self.phi[1][0] + h * k.phi[1][0], self.phi[1][1] + h * k.phi[1][1]],
            ],
            s: [self.s[0] + h * k.s[0], self.s[1] + h * k.s[1]],
        }
    }
}

impl Equation {
    #[inline]
    fn deriv(&self, x: f64, y: &State) -> State {
        let n2 = f64::from(self.n * self.n);
        let inv = 1.0 / x;
        let a = n2 * inv * inv - self.eps;
        let dq = -y.q * inv + a * y.p + self.g * y.p * y.p * y.p;
        // Linearisation: δq' = (n²/ξ² − ε + 3gψ²) δp − δq/ξ
        let j10 = a + 3.0 * self.g * y.p * y.p;
        let row = |p: f64, q: f64| j10 * p - q * inv;
        State {
            p: y.q,
            q: dq,
            phi: [
                [y.phi[1][0], y.phi[1][1]],
                [row(y.phi[0][0], y.phi[1][0]), row(y.phi[0][1], y.phi[1][1])],
            ],
            s: [y.s[1], row(y.s[0], y.s[1]) - y.p],
        }
    }

    fn rk4(&self, x: f64, h: f64, y: &State) -> State {
        let k1 = self.deriv(x, y);
        let k2 = self.deriv(x + 0.5 * h, &y.axpy(0.5 * h, &k1));
        let k3 = self.deriv(x + 0.5 * h, &y.axpy(0.5 * h, &k2));
        let k4 = self.deriv(x + h, &y.axpy(h, &k3));
        let mut out = *y;
        let w = h / 6.0;
        out.p += w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
        out.q += w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
        for r in 0..2 {
            for c in 0..2 {
                out.phi[r][c] += w * (k1.phi[r][c] + 2.0 * k2.phi[r][c] + 2.0 * k3.phi[r][c] + k4.phi[r][c]);
            }
            out.s[r] += w * (k1.s[r] + 2.0 * k2.s[r] + 2.0 * k3.s[r] + k4.s[r]);
        }
        out
    }

    /// Regular series start at ξ: (ψ, ψ') and their derivatives in C and ε.
    fn series_start(&self, x: f64, c: f64) -> SeriesStart {
        let n = f64::from(self.n);
        let denom = 4.0 * (n + 1.0);
        let nonlinear = if self.n == 0 { self.g * c * c } else { 0.0 };
        let alpha = -(self.eps - nonlinear) / denom;
        let da_de = -1.0 / denom;
        let da_dc = if self.n == 0 { 2.0 * self.g * c / denom } else { 0.0 };
        let xn = x.powi(self.n as i32);
        let lead_q = if self.n == 0 { 0.0 } else { n * xn / x };
        let tail_q = (n + 2.0) * xn * x;
        let p = c * xn * (1.0 + alpha * x * x);
        let q = c * (lead_q + alpha * tail_q);
        SeriesStart {
            p,
            q,
            dp_dc: xn * (1.0 + alpha * x * x) + c * xn * x * x * da_dc,
            dq_dc: lead_q + alpha * tail_q + c * tail_q * da_dc,
            dp_de: c * xn * x * x * da_de,
            dq_de: c * tail_q * da_de,
        }
    }
}

struct SeriesStart {
    p: f64,
    q: f64,
    dp_dc: f64,
    dq_dc: f64,
    dp_de: f64,
    dq_de: f64,
}

/// One integrated segment: samples at its grid points (the end point excluded
/// except for the last segment) with normalisation contributions.
struct Segment {
    psi: Vec<f64>,
    end: State,
    /// Σ wξψ² over the owned points and its gradient in (ψ₀, ψ'₀, ε).
    norm: f64,
    norm_grad: [f64; 3],
}

fn integrate_segment(eq: Equation, xs: &[f64], weights: &[f64], start: State, include_end: bool) -> Option<Segment> {
    let owned = if include_end { xs.len() } else { xs.len() - 1 };
    let mut psi = Vec::with_capacity(owned);
    let mut norm = 0.0;
    let mut grad = [0.0; 3];
    let mut y = start;
    let mut accumulate = |i: usize, y: &State, psi: &mut Vec<f64>| {
        let w = weights[i] * xs[i];
        psi.push(y.p);
        norm += w * y.p * y.p;
        grad[0] += 2.0 * w * y.p * y.phi[0][0];
        grad[1] += 2.0 * w * y.p * y.phi[0][1];
        grad[2] += 2.0 * w * y.p * y.s[0];
    };
    accumulate(0, &y, &mut psi);
    let mut x = xs[0];
    for i in 1..xs.len() {
        let x_end = xs[i];
        let base = (x_end - xs[i - 1]) / SUBSTEPS as f64;
        while x < x_end {
            let mut h = base.min(AXIS_STEP_FRACTION * x);
            let last = x + 1.000_001 * h >= x_end;
            if last {
                h = x_end - x;
            }
            y = eq.rk4(x, h, &y);
            x = if last { x_end } else { x + h };
            if !y.p.is_finite() || y.p.abs() > BLOWUP {
                return None;
            }
        }
        if i < owned {
            accumulate(i, &y, &mut psi);
        }
    }
    Some(Segment {
        psi,
        end: y,
        norm,
        norm_grad: grad,
    })
}

/// Unknowns: [C, ε, p₁, q₁, …, p_{K−1}, q_{K−1}].
struct MultipleShooting<'a> {
    n: u32,
    xs: &'a [f64],
    weights: Vec<f64>,
    /// Grid indices of segment boundaries, first 0, last len − 1.
    nodes: Vec<usize>,
}

struct Evaluation {
    residual: Vec<f64>,
    jacobian: Vec<f64>,
    psi: Vec<f64>,
}

impl<'a> MultipleShooting<'a> {
    fn new(n: u32, grid: &'a RadialGrid, segments: usize) -> Self {
        let xs = grid.points();
        let last = xs.len() - 1;
        let mut nodes: Vec<usize> = (0..=segments).map(|k| k * last / segments).collect();
        nodes.dedup();
        MultipleShooting {
            n,
            xs,
            weights: grid.trapezoid_weights(),
            nodes,
        }
    }

    fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    fn size(&self) -> usize {
        2 * self.segments()
    }

    fn evaluate(&self, g: f64, u: &[f64]) -> Option<Evaluation> {
        let k = self.segments();
        let m = self.size();
        let (c, eps) = (u[0], u[1]);
        let eq = Equation { n: self.n, eps, g };
        let mut residual = vec![0.0; m];
        let mut jac = vec![0.0; m * m];
        let mut psi = Vec::with_capacity(self.xs.len());
        let mut norm = -1.0;
        let norm_row = m - 1;
        let wall_row = m - 2;

        for seg in 0..k {
            let (a, b) = (self.nodes[seg], self.nodes[seg + 1]);
            let last = seg + 1 == k;
            let (start, series) = if seg == 0 {
                let st = eq.series_start(self.xs[0], c);
                (State::start(st.p, st.q), Some(st))
            } else {
                (State::start(u[2 * seg], u[2 * seg + 1]), None)
            };
            let out = integrate_segment(eq, &self.xs[a..=b], &self.weights[a..=b], start, last)?;
            psi.extend_from_slice(&out.psi);
            norm += out.norm;

            // Columns of this segment's own start values.
            let (col_p, col_q) = if seg == 0 { (0, usize::MAX) } else { (2 * seg, 2 * seg + 1) };
            let end = &out.end;
            // d(end)/d(start unknowns) as (column, dp, dq) triples.
            let mut partials: Vec<(usize, f64, f64)> = Vec::with_capacity(3);
            let mut norm_partials: Vec<(usize, f64)> = Vec::with_capacity(3);
            if let Some(st) = &series {
                let dpc = end.phi[0][0] * st.dp_dc + end.phi[0][1] * st.dq_dc;
                let dqc = end.phi[1][0] * st.dp_dc + end.phi[1][1] * st.dq_dc;
                let dpe = end.phi[0][0] * st.dp_de + end.phi[0][1] * st.dq_de + end.s[0];
                let dqe = end.phi[1][0] * st.dp_de + end.phi[1][1] * st.dq_de + end.s[1];
                partials.push((col_p, dpc, dqc));
                partials.push((1, dpe, dqe));
                let ng = out.norm_grad;
                norm_partials.push((0, ng[0] * st.dp_dc + ng[1] * st.dq_dc));
                norm_partials.push((1, ng[0] * st.dp_de + ng[1] * st.dq_de + ng[2]));
            } else {
                partials.push((col_p, end.phi[0][0], end.phi[1][0]));
                partials.push((col_q, end.phi[0][1], end.phi[1][1]));
                partials.push((1, end.s[0], end.s[1]));
                norm_partials.push((col_p, out.norm_grad[0]));
                norm_partials.push((col_q, out.norm_grad[1]));
                norm_partials.push((1, out.norm_grad[2]));
            }
            for (col, v) in norm_partials {
                jac[norm_row * m + col] += v;
            }

            if last {
                residual[wall_row] = end.p;
                for &(col, dp, _) in &partials {
                    jac[wall_row * m + col] += dp;
                }
            } else {
                // Matching rows 2·seg, 2·seg + 1: end − next start.
                let (rp, rq) = (2 * seg, 2 * seg + 1);
                let (np, nq) = (2 * (seg + 1), 2 * (seg + 1) + 1);
                residual[rp] = end.p - u[np];
                residual[rq] = end.q - u[nq];
                for &(col, dp, dq) in &partials {
                    jac[rp * m + col] += dp;
                    jac[rq * m + col] += dq;
                }
                jac[rp * m + np] -= 1.0;
                jac[rq * m + nq] -= 1.0;
            }
        }
        residual[norm_row] = norm;
        Some(Evaluation {
            residual,
            jacobian: jac,
            psi,
        })
    }

    /// Unknown vector sampled from a full profile guess.
    fn unknowns_from(&self, c: f64, eps: f64, psi: impl Fn(f64) -> (f64, f64)) -> Vec<f64> {
        let mut u = vec![c, eps];
        for &i in &self.nodes[1..self.nodes.len() - 1] {
            let (p, q) = psi(self.xs[i]);
            u.push(p);
            u.push(q);
        }
        u
    }

    /// Damped Newton from `u`; returns the converged unknowns and samples.
    /// Newton iteration on the matching conditions; on failure returns the last residual.
    fn newton(&self, g: f64, mut u: Vec<f64>, tol: f64) -> std::result::Result<(Vec<f64>, Vec<f64>, f64), f64> {
        let mut eval = self.evaluate(g, &u).ok_or(f64::INFINITY)?;
        let mut rnorm = max_abs(&eval.residual);
        for _ in 0..MAX_NEWTON {
            let rhs: Vec<f64> = eval.residual.iter().map(|r| -r).collect();
            let delta = solve_dense(eval.jacobian.clone(), rhs).ok_or(rnorm)?;
            let mut lambda = 1.0;
            let accepted = loop {
                let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a + lambda * d).collect();
                if let Some(e) = self.evaluate(g, &trial) {
                    let r = max_abs(&e.residual);
                    if r < rnorm || r < 1e-13 {
                        break Some((trial, e, r));
                    }
                }
                lambda *= 0.5;
                if lambda < 1e-4 {
                    break None;
                }
            };
            let Some((trial, e, r)) = accepted else {
                // no descent left: accept if the full step is already below tolerance
                let full = delta[1].abs() / u[1].abs().max(1.0);
                if full < tol && rnorm < ROUNDING_FLOOR {
                    return Ok((u, eval.psi, rnorm));
                }
                return Err(rnorm);
            };
            let step = lambda * delta[1].abs() / u[1].abs().max(1.0);
            u = trial;
            eval = e;
            rnorm = r;
            if rnorm < 1e-3 * tol && step < tol {
                return Ok((u, eval.psi, rnorm));
            }
            if rnorm < 1e-14 {
                return Ok((u, eval.psi, rnorm));
            }
        }
        Err(rnorm)
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn non_convergence(iterations: usize, boundary: f64, norm: f64) -> Error {
    Error::NonConvergence {
        solver: "shooting",
        iterations,
        boundary_residual: boundary,
        norm_residual: norm,
    }
}

pub(crate) fn validate_inputs(grid: &RadialGrid, n1d_a: f64, tol: f64) -> Result<()> {
    if !(n1d_a >= 0.0 && n1d_a.is_finite()) {
        return Err(Error::InvalidArgument(format!("n1d_a must be finite and >= 0, got {n1d_a}")));
    }
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::InvalidArgument(format!("tol must lie in [1e-12, 1e-4], got {tol}")));
    }
    // re-validate in case the grid was deserialised
    RadialGrid::from_points(grid.points().to_vec()).map(|_| ())
}

/// Normalised Bessel profile ψ = A·Jₙ(jξ) and its derivative, with ∫₀¹ξψ² = 1.
pub(crate) fn bessel_profile(n: u32) -> impl Fn(f64) -> (f64, f64) {
    let j = first_zero(n);
    let jn1 = bessel_j(n + 1, j);
    let amp = 1.0 / (0.5 * jn1 * jn1).sqrt();
    move |x: f64| {
        let p = amp * bessel_j(n, j * x);
        // Jₙ' = Jₙ₋₁ − (n/x)Jₙ, J₀' = −J₁
        let dj = if n == 0 {
            -bessel_j(1, j * x)
        } else {
            bessel_j(n - 1, j * x) - f64::from(n) / (j * x) * bessel_j(n, j * x)
        };
        (p, amp * j * dj)
    }
}

/// Axis coefficient C of the normalised Bessel profile, ψ ≈ Cξⁿ.
pub(crate) fn bessel_axis_coefficient(n: u32) -> f64 {
    let j = first_zero(n);
    let jn1 = bessel_j(n + 1, j);
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= 0.5 * j / f64::from(k);
    }
    lead / (0.5 * jn1 * jn1).sqrt()
}

/// Ground radial vortex state by multiple shooting.
pub fn solve_profile(n: u32, n1d_a: f64, grid: &RadialGrid, tol: f64) -> Result<CondensateProfile> {
    validate_inputs(grid, n1d_a, tol)?;
    let g_target = 4.0 * n1d_a;
    let j = first_zero(n);
    // Thomas–Fermi estimate of ε sets the segment count.
    let eps_estimate = j * j + 2.0 * g_target;
    let segments = (((2.0 * eps_estimate).sqrt() / SEGMENT_GROWTH).ceil() as usize).clamp(2, MAX_SEGMENTS);
    let solver = MultipleShooting::new(n, grid, segments);

    let mut u = solver.unknowns_from(bessel_axis_coefficient(n), j * j, bessel_profile(n));
    let mut solved = solver
        .newton(0.0, u.clone(), tol)
        .map_err(|r| non_convergence(MAX_NEWTON, r, f64::NAN))?;
    u = solved.0.clone();

    // Continuation in g with adaptive steps.
    let mut g = 0.0;
    let mut step = if g_target > 0.0 { g_target.min(4.0) } else { 0.0 };
    let mut attempts = 0;
    while g < g_target {
        attempts += 1;
        let next = (g + step).min(g_target);
        let mut guess = u.clone();
        // Predictor: raise ε by the mean interaction energy Σwξψ⁴·Δg.
        let mean_psi4: f64 = solver
            .weights
            .iter()
            .zip(solver.xs)
            .zip(&solved.1)
            .map(|((w, x), p)| w * x * p.powi(4))
            .sum();
        guess[1] += (next - g) * mean_psi4;
        match solver.newton(next, guess, tol) {
            Ok(s) => {
                g = next;
                u = s.0.clone();
                solved = s;
                step *= 2.0;
            }
            Err(r) => {
                step *= 0.25;
                if step < 1e-6 * g_target.max(1.0) || attempts > 200 {
                    return Err(non_convergence(attempts, r, f64::NAN));
                }
            }
        }
    }

    let (u, psi, rnorm) = solved;
    let norm = grid.radial_norm(&psi);
    let scale = norm.sqrt();
    let psi: Vec<f64> = psi.iter().map(|p| p / scale).collect();
    let boundary = psi.last().unwrap().abs();
    if boundary > 1e-10 || (norm - 1.0).abs() > 1e-8 {
        return Err(non_convergence(attempts, boundary, norm - 1.0));
    }
    let profile = CondensateProfile {
        grid: grid.clone(),
        psi,
        eigenvalue: u[1],
        vortex_order: n,
        n1d_a,
        solver: SolverTag::Shooting,
        residual: rnorm,
    };
    match profile.interior_nodes() {
        0 => Ok(profile),
        nodes => Err(Error::NodeDetected { nodes }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_start_matches_bessel_expansion() {
        let eq = Equation { n: 1, eps: 14.7, g: 0.0 };
        let x = 1e-3;
        let st = eq.series_start(x, 2.0);
        let k = eq.eps.sqrt();
        assert!((st.p - 2.0 * bessel_j(1, k * x) * 2.0 / k).abs() < 1e-12);
        assert!((st.q - 2.0 * (1.0 - 3.0 * eq.eps * x * x / 8.0)).abs() < 1e-10);
    }

    #[test]
    fn sensitivities_match_finite_differences() {
        let grid = RadialGrid::uniform(256, 1e-6).unwrap();
        let ms = MultipleShooting::new(1, &grid, 4);
        let g = 4.0;
        let u = ms.unknowns_from(bessel_axis_coefficient(1), 20.0, bessel_profile(1));
        let base = ms.evaluate(g, &u).unwrap();
        let m = ms.size();
        for col in 0..m {
            let h = 1e-6 * u[col].abs().max(1e-3);
            let mut up = u.clone();
            up[col] += h;
            let mut dn = u.clone();
            dn[col] -= h;
            let rp = ms.evaluate(g, &up).unwrap().residual;
            let rm = ms.evaluate(g, &dn).unwrap().residual;
            for row in 0..m {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                let an = base.jacobian[row * m + col];
                assert!((fd - an).abs() < 1e-5 * (1.0 + an.abs()), "J[{row}][{col}]: fd {fd} vs {an}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let grid = RadialGrid::uniform(128, 1e-6).unwrap();
        assert!(matches!(solve_profile(1, 0.0, &grid, 1e-2), Err(Error::InvalidArgument(_))));
        assert!(matches!(solve_profile(1, -1.0, &grid, 1e-10), Err(Error::InvalidArgument(_))));
        assert!(matches!(solve_profile(1, f64::NAN, &grid, 1e-10), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn bessel_limit_eigenvalues() {
        let grid = RadialGrid::default();
        for n in 0..3 {
            let p = solve_profile(n, 0.0, &grid, 1e-10).unwrap();
            let j = first_zero(n);
            assert!((p.eigenvalue - j * j).abs() < 1e-8, "n={n}: {}", p.eigenvalue);
            assert!((p.norm() - 1.0).abs() < 1e-12);
            assert!(p.psi.last().unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn strong_interaction_profile_is_normalised() {
        let grid = RadialGrid::default();
        let p = solve_profile(1, 100.0, &grid, 1e-10).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-8);
        assert!(p.psi.last().unwrap().abs() < 1e-10);
        assert_eq!(p.interior_nodes(), 0);
        assert!(p.eigenvalue > first_zero(1).powi(2));
    }

    #[test]
    fn bessel_limit_profile_pointwise() {
        let grid = RadialGrid::default();
        let p = solve_profile(1, 0.0, &grid, 1e-10).unwrap();
        let exact = bessel_profile(1);
        let worst = p.xi().iter().zip(&p.psi).fold(0.0f64, |a, (&x, &v)| a.max((v - exact(x).0).abs()));
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn eigenvalue_rises_and_profile_broadens_with_interaction() {
        let grid = RadialGrid::default();
        let profiles: Vec<_> = [0.0, 0.1, 10.0, 100.0]
            .iter()
            .map(|&a| solve_profile(1, a, &grid, 1e-10).unwrap())
            .collect();
        let peak = |p: &CondensateProfile| {
            let d = p.density();
            let k = (0..d.len()).max_by(|&i, &j| d[i].total_cmp(&d[j])).unwrap();
            p.xi()[k]
        };
        for w in profiles.windows(2) {
            assert!(w[1].eigenvalue > w[0].eigenvalue);
            assert!(peak(&w[1]) >= peak(&w[0]));
        }
        let mid: Vec<f64> = profiles.iter().map(|p| p.density_at_half()).collect();
        let rising = mid.windows(2).all(|w| w[1] >= w[0]);
        let falling = mid.windows(2).all(|w| w[1] <= w[0]);
        assert!(rising || falling, "{mid:?}");
    }

    #[test]
    fn eigenvalue_converged_in_grid() {
        let coarse = solve_profile(1, 100.0, &RadialGrid::uniform(2048, 1e-6).unwrap(), 1e-10).unwrap();
        let fine = solve_profile(1, 100.0, &RadialGrid::uniform(4096, 1e-6).unwrap(), 1e-10).unwrap();
        assert!(((fine.eigenvalue - coarse.eigenvalue) / fine.eigenvalue).abs() < 1e-6);
    }

    #[test]
    fn axis_power_law() {
        let grid = RadialGrid::default();
        for n in 1..=3 {
            let p = solve_profile(n, 100.0, &grid, 1e-10).unwrap();
            let xs = p.xi();
            // first decade of the grid: ξ_min up to 10·ξ_min of the first interior step
            let (a, b) = (1, 10);
            let slope = (p.psi[b] / p.psi[a]).ln() / (xs[b] / xs[a]).ln();
            assert!((slope - f64::from(n)).abs() < 0.02 * f64::from(n), "n={n}: {slope}");
            assert!(p.residual < 1e-9);
        }
    }
}
