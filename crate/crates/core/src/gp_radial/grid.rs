use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 2048;
pub const DEFAULT_XI_MIN: f64 = 1e-6;
pub const MIN_POINTS: usize = 64;

/// Radial sample points ξ = r/R₀ on (0, 1], axis excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    points: Vec<f64>,
}

impl RadialGrid {
    /// Uniform grid from `xi_min` to exactly 1.
    pub fn uniform(count: usize, xi_min: f64) -> Result<Self> {
        if count < MIN_POINTS {
            return Err(Error::InvalidGrid(format!("need at least {MIN_POINTS} points, got {count}")));
        }
        let step = (1.0 - xi_min) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| xi_min + i as f64 * step).collect();
        points[count - 1] = 1.0;
        Self::from_points(points)
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {}",
                points.len()
            )));
        }
        let first = points[0];
        if !(1e-8..=1e-3).contains(&first) {
            return Err(Error::InvalidGrid(format!("first point {first} outside [1e-8, 1e-3]")));
        }
        if *points.last().unwrap() != 1.0 {
            return Err(Error::InvalidGrid("last point must be exactly 1".into()));
        }
        if points
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::InvalidGrid("points must be strictly increasing".into()));
        }
        Ok(RadialGrid { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xi_min(&self) -> f64 {
        self.points[0]
    }

    /// Constant spacing if the grid is uniform to rounding.
    pub fn uniform_step(&self) -> Option<f64> {
        let h = (1.0 - self.points[0]) / (self.len() - 1) as f64;
        self.points.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h).then_some(h)
    }

    /// Trapezoid weights for ∫ f dξ over the grid.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let p = &self.points;
        let mut w = vec![0.0; p.len()];
        for i in 0..p.len() - 1 {
            let h = p[i + 1] - p[i];
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        }
        w
    }

    /// ∫₀¹ ξ f(ξ)² dξ by the trapezoid rule.
    pub fn radial_norm(&self, f: &[f64]) -> f64 {
        self.trapezoid_weights()
            .iter()
            .zip(&self.points)
            .zip(f)
            .map(|((w, x), v)| w * x * v * v)
            .sum()
    }

    /// Index of the last grid point ≤ xi (clamped).
    pub(crate) fn locate(&self, xi: f64) -> usize {
        match self.points.partition_point(|&p| p <= xi) {
            0 => 0,
            k => (k - 1).min(self.len() - 2),
        }
    }

    /// Cubic Lagrange interpolation of grid samples at `xi`.
    pub fn interpolate(&self, values: &[f64], xi: f64) -> f64 {
        self.interpolate_with_slope(values, xi).0
    }

    /// Value and slope of the same cubic interpolant used by [`interpolate`](Self::interpolate).
    pub fn interpolate_with_slope(&self, values: &[f64], xi: f64) -> (f64, f64) {
        let start = self.stencil_start(xi, 4);
        lagrange(&self.points[start..start + 4], &values[start..start + 4], xi)
    }

    /// Slope of a quintic interpolant through the six nearest samples.
    pub fn derivative(&self, values: &[f64], xi: f64) -> f64 {
        let start = self.stencil_start(xi, 6);
        lagrange(&self.points[start..start + 6], &values[start..start + 6], xi).1
    }

    /// First index of a `width`-point stencil roughly centred on the cell containing `xi`.
    fn stencil_start(&self, xi: f64, width: usize) -> usize {
        let i = self.locate(xi);
        i.saturating_sub(width / 2 - 1).min(self.len() - width)
    }
}

fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> (f64, f64) {
    let k = xs.len();
    let (mut value, mut slope) = (0.0, 0.0);
    for j in 0..k {
        let mut l = 1.0;
        let mut dl = 0.0;
        for m in (0..k).filter(|&m| m != j) {
            let w = 1.0 / (xs[j] - xs[m]);
            dl = dl * (x - xs[m]) * w + l * w;
            l *= (x - xs[m]) * w;
        }
        value += l * ys[j];
        slope += dl * ys[j];
    }
    (value, slope)
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_POINTS, DEFAULT_XI_MIN).expect("default grid is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_invariants() {
        let g = RadialGrid::default();
        assert_eq!(g.len(), 2048);
        assert_eq!(g.xi_min(), 1e-6);
        assert_eq!(*g.points().last().unwrap(), 1.0);
        assert!(g.uniform_step().is_some());
    }

    #[test]
    fn rejects_invalid_grids() {
        assert!(RadialGrid::uniform(32, 1e-6).is_err());
        assert!(RadialGrid::uniform(128, 0.0).is_err());
        assert!(RadialGrid::uniform(128, 1e-2).is_err());
        let mut pts: Vec<f64> = RadialGrid::uniform(128, 1e-6).unwrap().points().to_vec();
        pts.swap(3, 4);
        assert!(RadialGrid::from_points(pts).is_err());
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = RadialGrid::uniform(101, 1e-4).unwrap();
        let s: f64 = g.trapezoid_weights().iter().zip(g.points()).map(|(w, x)| w * x).sum();
        assert!((s - 0.5 * (1.0 - 1e-8)).abs() < 1e-14);
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let g = RadialGrid::uniform(64, 1e-5).unwrap();
        let f = |x: f64| 1.0 - 2.0 * x + x.powi(3);
        let v: Vec<f64> = g.points().iter().map(|&x| f(x)).collect();
        for xi in [1e-5, 0.013, 0.5, 0.77777, 0.999, 1.0] {
            assert!((g.interpolate(&v, xi) - f(xi)).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolant_slopes_are_exact_on_polynomials() {
        let g = RadialGrid::uniform(64, 1e-5).unwrap();
        let cubic: Vec<f64> = g.points().iter().map(|&x| x.powi(3) - x).collect();
        let quintic: Vec<f64> = g.points().iter().map(|&x| x.powi(5) + 2.0 * x * x).collect();
        for xi in [1e-5, 0.021, 0.5, 0.93, 1.0] {
            assert!((g.interpolate_with_slope(&cubic, xi).1 - (3.0 * xi * xi - 1.0)).abs() < 1e-10);
            assert!((g.derivative(&quintic, xi) - (5.0 * xi.powi(4) + 4.0 * xi)).abs() < 1e-9);
        }
    }
}
