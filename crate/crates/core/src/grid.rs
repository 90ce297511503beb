//! Sampled functions on uniform 1D grids.

use crate::error::{Error, Result};

/// A real function sampled on a uniform grid, with optional compact-support
/// metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    /// Left endpoint of the grid.
    pub x0: f64,
    /// Grid spacing, > 0.
    pub dx: f64,
    /// Sample values, at least two.
    pub values: Vec<f64>,
    /// Support radius: values outside [−r, r] are (numerically) zero.
    pub support_radius: Option<f64>,
}

impl GridFunction {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParams(
                "grid function needs at least 2 samples".into(),
            ));
        }
        if !(dx > 0.0) {
            return Err(Error::InvalidParams(format!("dx = {dx} must be > 0")));
        }
        Ok(Self {
            x0,
            dx,
            values,
            support_radius: None,
        })
    }

    pub fn with_support_radius(mut self, r: f64) -> Self {
        self.support_radius = Some(r);
        self
    }

    /// Sample f on n points starting at x0.
    pub fn from_fn(x0: f64, dx: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..n).map(|i| f(x0 + i as f64 * dx)).collect();
        Self::new(x0, dx, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn x_end(&self) -> f64 {
        self.x(self.len() - 1)
    }

    /// Cubic (4-point Lagrange) interpolation; zero outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let s = (x - self.x0) / self.dx;
        if s < 0.0 || s > (n - 1) as f64 {
            return 0.0;
        }
        if n < 4 {
            // fall back to linear
            let i = (s.floor() as usize).min(n - 2);
            let t = s - i as f64;
            return self.values[i] * (1.0 - t) + self.values[i + 1] * t;
        }
        // Center a 4-point stencil at the interval containing x.
        let i = (s.floor() as usize).saturating_sub(1).min(n - 4);
        let t = s - i as f64; // in [0, 3] relative to stencil start
        let v = &self.values[i..i + 4];
        // Lagrange basis on nodes 0,1,2,3.
        let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
    }

    /// Trapezoid-rule integral over the whole grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.dx)
    }

    /// Discrete L^p norm (trapezoid rule on |f|^p, then the p-th root).
    pub fn lp_norm(&self, p: f64) -> f64 {
        let powered: Vec<f64> = self.values.iter().map(|v| v.abs().powf(p)).collect();
        trapezoid(&powered, self.dx).powf(1.0 / p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Check the support metadata: samples outside [−r, r] must vanish to
    /// within `tol`.
    pub fn support_respected(&self, tol: f64) -> bool {
        match self.support_radius {
            None => true,
            Some(r) => self
                .values
                .iter()
                .enumerate()
                .all(|(i, v)| self.x(i).abs() <= r || v.abs() <= tol),
        }
    }
}

/// Trapezoid rule for uniformly spaced samples.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    dx * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}
