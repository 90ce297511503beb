//! The 1D linear Cauchy problem
//!
//! ```text
//! ∂²ₜu − t^{2ℓ} ∂²ₓu + μ t⁻¹ ∂ₜu + ν² t⁻² u = g(t, x),   u(1) = u₀, ∂ₜu(1) = u₁,
//! ```
//!
//! solved two independent ways: exactly, through the representation formula
//!
//! ```text
//! u(t,x) = ½ t^{−(μ+ℓ)/2} [u₀(x+A_ℓ(t)) + u₀(x−A_ℓ(t))]
//!        + ∫ u₀ K₀ dy + ∫ u₁ K₁ dy + ∬ g E dy db
//! ```
//!
//! with adaptive quadrature over the exact cone domains, and numerically by
//! a second-order leapfrog discretization that serves as a cross-validation
//! oracle.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::kernel::{kernel_e, kernel_k0, kernel_k1, KernelPoint};
use crate::model::{amplitude, ModelParams};
use crate::quad;

/// A spatial data profile: the Cauchy data u₀, u₁ are supplied either as a
/// closed form or as grid samples (interpolated cubically).
#[derive(Clone)]
pub enum SpaceProfile {
    Zero,
    /// amplitude · (1 − (x/radius)²)^power on |x| ≤ radius; C² for power ≥ 3.
    Bump {
        radius: f64,
        amplitude: f64,
        power: i32,
    },
    Grid(GridFunction),
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        support_radius: f64,
    },
}

impl SpaceProfile {
    pub fn bump(radius: f64, amplitude: f64) -> Self {
        SpaceProfile::Bump {
            radius,
            amplitude,
            power: 3,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SpaceProfile::Zero => 0.0,
            SpaceProfile::Bump {
                radius,
                amplitude,
                power,
            } => {
                let s = x / radius;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - s * s).powi(*power)
                }
            }
            SpaceProfile::Grid(g) => g.eval(x),
            SpaceProfile::Custom { f, .. } => f(x),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            SpaceProfile::Zero => 0.0,
            SpaceProfile::Bump { radius, .. } => *radius,
            SpaceProfile::Grid(g) => g
                .support_radius
                .unwrap_or_else(|| g.x0.abs().max(g.x_end().abs())),
            SpaceProfile::Custom { support_radius, .. } => *support_radius,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SpaceProfile::Zero)
    }
}

/// Source term g(t, x) with compact spatial support.
#[derive(Clone)]
pub enum SourceTerm {
    Zero,
    Custom {
        f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        support_radius: f64,
    },
}

impl SourceTerm {
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            SourceTerm::Zero => 0.0,
            SourceTerm::Custom { f, .. } => f(t, x),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            SourceTerm::Zero => 0.0,
            SourceTerm::Custom { support_radius, .. } => *support_radius,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SourceTerm::Zero)
    }
}

/// A linear 1D Cauchy problem (n is forced to 1).
#[derive(Clone)]
pub struct LinearProblem {
    pub params: ModelParams,
    pub u0: SpaceProfile,
    pub u1: SpaceProfile,
    pub g: SourceTerm,
    pub t_end: f64,
}

impl LinearProblem {
    pub fn new(
        params: ModelParams,
        u0: SpaceProfile,
        u1: SpaceProfile,
        g: SourceTerm,
        t_end: f64,
    ) -> Result<Self> {
        if params.n != 1 {
            return Err(Error::InvalidParams(
                "linear representation solver is 1D only".into(),
            ));
        }
        if params.delta() < 0.0 {
            return Err(Error::NegativeDelta(params.delta()));
        }
        if !(t_end > 1.0) {
            return Err(Error::InvalidParams(format!("t_end = {t_end} must be > 1")));
        }
        Ok(Self {
            params,
            u0,
            u1,
            g,
            t_end,
        })
    }

    fn data_radius(&self) -> f64 {
        self.u0
            .support_radius()
            .max(self.u1.support_radius())
            .max(self.g.support_radius())
    }
}

/// Absolute quadrature tolerance for each 1D data integral.
const DATA_TOL: f64 = 1e-9;
/// Per-level tolerance inside the iterated Duhamel integral.
const DUHAMEL_TOL: f64 = 1e-10;

/// Evaluate the representation formula at (t, x).
pub fn solve_representation(prob: &LinearProblem, t: f64, x: f64) -> Result<f64> {
    if !(1.0 <= t && t <= prob.t_end) {
        return Err(Error::Domain(format!(
            "t = {t} outside [1, t_end = {}]",
            prob.t_end
        )));
    }
    let params = &prob.params;
    let a_t = amplitude(t, params.ell)?;
    let mut u = 0.5
        * t.powf(-0.5 * (params.mu + params.ell))
        * (prob.u0.eval(x + a_t) + prob.u0.eval(x - a_t));

    // The integrands vanish outside the data supports, so the quadrature
    // intervals are clipped to them: any edge discontinuity of the data
    // then sits exactly on an endpoint, where the open Kronrod rule never
    // samples it.
    if !prob.u0.is_zero() && a_t > 0.0 {
        let u0 = &prob.u0;
        let r0 = u0.support_radius();
        let (lo, hi) = ((x - a_t).max(-r0), (x + a_t).min(r0));
        if lo < hi {
            u += quad::integrate(
                |y| u0.eval(y) * kernel_k0(t, x, y, params).unwrap_or(f64::NAN),
                lo,
                hi,
                DATA_TOL,
            )?;
        }
    }
    if !prob.u1.is_zero() && a_t > 0.0 {
        let u1 = &prob.u1;
        let r1 = u1.support_radius();
        let (lo, hi) = ((x - a_t).max(-r1), (x + a_t).min(r1));
        if lo < hi {
            u += quad::integrate(
                |y| u1.eval(y) * kernel_k1(t, x, y, params).unwrap_or(f64::NAN),
                lo,
                hi,
                DATA_TOL,
            )?;
        }
    }
    if !prob.g.is_zero() && t > 1.0 {
        let g = &prob.g;
        let rg = g.support_radius();
        u += quad::integrate(
            |b| {
                let a_b = amplitude(b, params.ell).unwrap_or(0.0);
                let half_width = a_t - a_b;
                if half_width <= 0.0 {
                    return 0.0;
                }
                let (lo, hi) = ((x - half_width).max(-rg), (x + half_width).min(rg));
                if lo >= hi {
                    return 0.0;
                }
                quad::integrate(
                    |y| {
                        let pt = match KernelPoint::new(t, x, b, y) {
                            Ok(pt) => pt,
                            Err(_) => return f64::NAN,
                        };
                        g.eval(b, y) * kernel_e(&pt, params).unwrap_or(f64::NAN)
                    },
                    lo,
                    hi,
                    DUHAMEL_TOL,
                )
                .unwrap_or(f64::NAN)
            },
            1.0,
            t,
            DUHAMEL_TOL,
        )?;
    }
    if !u.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "nonfinite representation value at (t, x) = ({t}, {x})"
        )));
    }
    Ok(u)
}

/// One-sided finite difference of the representation in t at t = 1,
/// compared against u₁ on a sample grid; returns the max absolute
/// deviation.
pub fn check_initial_velocity(prob: &LinearProblem) -> Result<f64> {
    let h = 1e-4;
    let r = prob.data_radius().max(1.0);
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let x = -1.2 * r + 2.4 * r * i as f64 / 20.0;
        let u_h = solve_representation(prob, 1.0 + h, x)?;
        let u_0 = solve_representation(prob, 1.0, x)?;
        let dev = ((u_h - u_0) / h - prob.u1.eval(x)).abs();
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Finite-difference solution snapshots at the requested times (the final
/// time is always included).
pub struct FdSolution {
    pub snapshots: Vec<(f64, GridFunction)>,
    pub dt: f64,
}

/// Second-order leapfrog oracle for the same problem, on a fixed domain
/// wide enough that the boundaries stay outside the light cone of the data.
///
/// The damping term is centered (u^{n+1} − u^{n−1})/(2Δt), which keeps the
/// update explicit, and the first step is seeded by the Taylor expansion
/// u(1+Δt) ≈ u₀ + Δt u₁ + Δt²/2 (u₀″ − μu₁ − ν²u₀ + g(1,·)).
pub fn solve_fd_oracle(
    prob: &LinearProblem,
    dx: f64,
    dt: f64,
    snapshot_times: &[f64],
) -> Result<FdSolution> {
    let params = &prob.params;
    let ell = params.ell;
    let t_end = prob.t_end;
    let max_speed = if ell >= 0.0 { t_end.powf(ell) } else { 1.0 };
    if dt > 0.5 * dx / max_speed {
        return Err(Error::CflViolation(format!(
            "dt = {dt} exceeds 0.5 dx / max speed = {}",
            0.5 * dx / max_speed
        )));
    }

    // Pad beyond the exact cone: leapfrog dispersion sends tiny precursor
    // ripples slightly ahead of the physical front.
    let half_width = prob.data_radius() + amplitude(t_end, ell)? + 0.1 + 5.0 * dx;
    let n = (2.0 * half_width / dx).ceil() as usize + 1;
    let x0 = -half_width;
    let xs: Vec<f64> = (0..n).map(|i| x0 + i as f64 * dx).collect();

    let mut prev: Vec<f64> = xs.iter().map(|&x| prob.u0.eval(x)).collect();
    // Taylor first step at t = 1 (where t^{2l} = 1).
    let mut curr = vec![0.0; n];
    for i in 1..n - 1 {
        let lap = (prev[i + 1] - 2.0 * prev[i] + prev[i - 1]) / (dx * dx);
        let v1 = prob.u1.eval(xs[i]);
        curr[i] = prev[i]
            + dt * v1
            + 0.5 * dt * dt * (lap - params.mu * v1 - params.nu2 * prev[i] + prob.g.eval(1.0, xs[i]));
    }

    let mut snapshots = Vec::new();
    let mut wanted: Vec<f64> = snapshot_times.to_vec();
    wanted.sort_by(f64::total_cmp);

    let mut t = 1.0 + dt;
    let mut next = vec![0.0; n];
    let steps = ((t_end - 1.0) / dt).round() as usize;
    for step in 1..steps {
        while let Some(&t_req) = wanted.first() {
            if t_req <= t + 0.5 * dt {
                snapshots.push((t, grid_from(&curr, x0, dx)));
                wanted.remove(0);
            } else {
                break;
            }
        }
        let speed2 = t.powf(2.0 * ell);
        let damping = params.mu / t;
        let mass = params.nu2 / (t * t);
        for i in 1..n - 1 {
            let lap = (curr[i + 1] - 2.0 * curr[i] + curr[i - 1]) / (dx * dx);
            let rhs = speed2 * lap - mass * curr[i] + prob.g.eval(t, xs[i]);
            next[i] = (2.0 * curr[i] - (1.0 - 0.5 * damping * dt) * prev[i] + dt * dt * rhs)
                / (1.0 + 0.5 * damping * dt);
        }
        next[0] = 0.0;
        next[n - 1] = 0.0;
        std::mem::swap(&mut prev, &mut curr);
        std::mem::swap(&mut curr, &mut next);
        t = 1.0 + (step + 1) as f64 * dt;
        if curr[1].abs() > 1e-6 || curr[n - 2].abs() > 1e-6 {
            return Err(Error::DomainTooSmall(format!(
                "light cone reached the FD boundary at t = {t}"
            )));
        }
        if !curr[n / 2].is_finite() {
            return Err(Error::NonfiniteState(t));
        }
    }
    snapshots.push((t, grid_from(&curr, x0, dx)));
    Ok(FdSolution { snapshots, dt })
}

fn grid_from(values: &[f64], x0: f64, dx: f64) -> GridFunction {
    GridFunction::new(x0, dx, values.to_vec()).expect("solver grids always valid")
}

/// Relative L∞ distance between the representation and an FD snapshot,
/// sampled at `n_samples` points across the cone of the data.
pub fn representation_vs_fd_error(
    prob: &LinearProblem,
    fd: &GridFunction,
    t: f64,
    n_samples: usize,
) -> Result<f64> {
    let reach = prob.data_radius() + amplitude(t, prob.params.ell)?;
    let mut max_ref = 0.0f64;
    let mut max_diff = 0.0f64;
    for i in 0..n_samples {
        let x = -reach + 2.0 * reach * i as f64 / (n_samples - 1) as f64;
        let u_rep = solve_representation(prob, t, x)?;
        let u_fd = fd.eval(x);
        max_ref = max_ref.max(u_fd.abs());
        max_diff = max_diff.max((u_rep - u_fd).abs());
    }
    if max_ref == 0.0 {
        return Ok(max_diff);
    }
    Ok(max_diff / max_ref)
}
