//! Finite-difference solver for the full semilinear problem
//!
//! ```text
//! ∂²ₜu − t^{2ℓ} Δu + μ t⁻¹ ∂ₜu + ν² t⁻² u = |u|^p,
//! u(1) = ε u₀,  ∂ₜu(1) = ε u₁,
//! ```
//!
//! in one dimension or radially symmetric in n ≥ 2, with blow-up detection,
//! lifespan measurement and the residual checks that tie the runs back to
//! the exact identities: the ODE for the spatial average U(t), the Duhamel
//! representation of U, the weak formulation, and the iteration-frame
//! inequality for ‖u(t)‖_p^p.
//!
//! Time stepping is an explicit three-level scheme with the damping term
//! centered, on a grid that grows with the light cone. The step size tracks
//! both the CFL bound (speed t^ℓ) and the local nonlinear timescale
//! 1/√(p |u|^{p−1}), so threshold crossings are resolved even though the
//! amplitude is doubly-exponential near blow-up.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::grid::{trapezoid, GridFunction};
use crate::linear1d::SpaceProfile;
use crate::model::{amplitude, amplitude_inv, phi_ell, ModelParams};
use crate::quad;
use crate::radon::sphere_surface;

/// A semilinear Cauchy problem. Data are radial profiles for n ≥ 2.
#[derive(Clone)]
pub struct SemilinearProblem {
    pub params: ModelParams,
    /// Nonlinearity power p > 1.
    pub p: f64,
    /// Data size ε ≥ 0.
    pub eps: f64,
    pub u0: SpaceProfile,
    pub u1: SpaceProfile,
    /// When set, `validate` enforces the blow-up theorem's sign conditions
    /// on the data: u₀, u₁ ≥ 0 supported in B_R, u₁ + r₂ u₀ ≥ 0 pointwise
    /// and ∫(u₁ + r₁ u₀) > 0.
    pub enforce_sign_conditions: bool,
}

impl SemilinearProblem {
    pub fn new(
        params: ModelParams,
        p: f64,
        eps: f64,
        u0: SpaceProfile,
        u1: SpaceProfile,
    ) -> Result<Self> {
        let prob = Self {
            params,
            p,
            eps,
            u0,
            u1,
            enforce_sign_conditions: true,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) {
            return Err(Error::InvalidParams(format!(
                "p = {} must be > 1",
                self.p
            )));
        }
        if self.eps < 0.0 {
            return Err(Error::InvalidParams("eps must be >= 0".into()));
        }
        let sc = self.params.constants()?; // rejects delta < 0
        if !self.enforce_sign_conditions {
            return Ok(());
        }
        let r = self.params.radius;
        let n_check = 257;
        let lo = if self.params.n == 1 { -1.5 * r } else { 0.0 };
        let hi = 1.5 * r;
        let dx = (hi - lo) / (n_check - 1) as f64;
        let mut integrand = Vec::with_capacity(n_check);
        for i in 0..n_check {
            let x = lo + i as f64 * dx;
            let v0 = self.u0.eval(x);
            let v1 = self.u1.eval(x);
            if v0 < 0.0 || v1 < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "data must be nonnegative; u0({x}) = {v0}, u1({x}) = {v1}"
                )));
            }
            if x.abs() > r && (v0.abs() > 1e-14 || v1.abs() > 1e-14) {
                return Err(Error::InvalidParams(format!(
                    "data must be supported in B_R (R = {r}), nonzero at {x}"
                )));
            }
            if v1 + sc.r2 * v0 < -1e-14 {
                return Err(Error::InvalidParams(format!(
                    "u1 + r2 u0 = {} < 0 at x = {x}",
                    v1 + sc.r2 * v0
                )));
            }
            let weight = if self.params.n == 1 {
                1.0
            } else {
                x.max(0.0).powi(self.params.n as i32 - 1)
            };
            integrand.push((v1 + sc.r1 * v0) * weight);
        }
        let total = trapezoid(&integrand, dx);
        if total <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "integral of u1 + r1 u0 must be positive, got {total}"
            )));
        }
        Ok(())
    }
}

/// Solver controls.
#[derive(Clone)]
pub struct SolveOptions {
    pub t_max: f64,
    pub dx: f64,
    /// CFL fraction of the stability bound (default 0.4).
    pub cfl: f64,
    pub blowup_threshold: f64,
    /// Force a constant time step (residual convergence studies); the CFL
    /// bound is still checked and violation is an error.
    pub fixed_dt: Option<f64>,
    /// Evaluate |u|^p (true) or run the linearized equation (false).
    pub nonlinearity: bool,
    pub snapshot_times: Vec<f64>,
    /// Keep every committed frame (needed by the weak-form residual).
    pub store_frames: bool,
    /// Relative refinement of the blow-up crossing time.
    pub refine_rel: f64,
}

impl SolveOptions {
    pub fn new(t_max: f64, dx: f64) -> Self {
        Self {
            t_max,
            dx,
            cfl: 0.4,
            blowup_threshold: 1e8,
            fixed_dt: None,
            nonlinearity: true,
            snapshot_times: Vec::new(),
            store_frames: false,
            refine_rel: 1e-6,
        }
    }
}

/// One lifespan measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct LifespanRecord {
    pub eps: f64,
    pub t_numeric: ExtReal,
    pub blew_up: bool,
    pub final_sup: f64,
    pub dt_min: f64,
    pub dx: f64,
}

/// Scalar time series recorded along a run.
#[derive(Debug, Clone, Default)]
pub struct RunSeries {
    pub times: Vec<f64>,
    /// U(t) = ∫ u dx (radial measure included for n ≥ 2).
    pub u_avg: Vec<f64>,
    /// ‖u(t)‖_p^p = ∫ |u|^p dx.
    pub lp_p: Vec<f64>,
    pub sup: Vec<f64>,
}

/// Full frame storage for the weak-form residual (fixed domain).
#[derive(Debug, Clone)]
pub struct Frames {
    pub x0: f64,
    pub dx: f64,
    pub times: Vec<f64>,
    pub data: Vec<Vec<f64>>,
}

pub struct SemilinearRun {
    pub record: LifespanRecord,
    pub series: RunSeries,
    pub snapshots: Vec<(f64, GridFunction)>,
    pub frames: Option<Frames>,
    /// Whether the |u|^p term was active (affects which source the
    /// residual checks compare against).
    pub nonlinearity: bool,
}

struct Mesh {
    /// Coordinate of index 0 (−L for n = 1, 0 for radial grids).
    x0: f64,
    dx: f64,
    n_dim: usize,
    prev: Vec<f64>,
    curr: Vec<f64>,
}

impl Mesh {
    fn len(&self) -> usize {
        self.curr.len()
    }

    fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Grow so that the grid covers [−half_width, half_width] (n = 1) or
    /// [0, half_width] (radial), with zeros in the new cells.
    fn ensure_cover(&mut self, half_width: f64) {
        let chunk = 64.max(self.len() / 4);
        while self.x(self.len() - 1) < half_width {
            self.prev.extend(std::iter::repeat_n(0.0, chunk));
            self.curr.extend(std::iter::repeat_n(0.0, chunk));
        }
        if self.n_dim == 1 {
            while self.x0 > -half_width {
                self.prev.splice(0..0, std::iter::repeat_n(0.0, chunk));
                self.curr.splice(0..0, std::iter::repeat_n(0.0, chunk));
                self.x0 -= chunk as f64 * self.dx;
            }
        }
    }
}

/// ∫ u dx with the dimension's measure: plain trapezoid for n = 1,
/// σ_{n−1} ∫ u r^{n−1} dr for radial grids.
pub fn spatial_average(snapshot: &GridFunction, n_dim: usize) -> f64 {
    if n_dim == 1 {
        snapshot.integral()
    } else {
        let weighted: Vec<f64> = snapshot
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * snapshot.x(i).powi(n_dim as i32 - 1))
            .collect();
        sphere_surface(n_dim) * trapezoid(&weighted, snapshot.dx)
    }
}

fn measure_integral(values: &[f64], x0: f64, dx: f64, n_dim: usize, pow: f64) -> f64 {
    let weighted: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if n_dim == 1 {
                1.0
            } else {
                (x0 + i as f64 * dx).powi(n_dim as i32 - 1)
            };
            v.abs().powf(pow) * w
        })
        .collect();
    let base = trapezoid(&weighted, dx);
    if n_dim == 1 {
        base
    } else {
        sphere_surface(n_dim) * base
    }
}

fn laplacian(values: &[f64], i: usize, dx: f64, x0: f64, n_dim: usize) -> f64 {
    let n = values.len();
    if n_dim == 1 {
        if i == 0 || i == n - 1 {
            return 0.0;
        }
        return (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (dx * dx);
    }
    // Radial: symmetric at r = 0, Dirichlet far end.
    if i == 0 {
        return n_dim as f64 * 2.0 * (values[1] - values[0]) / (dx * dx);
    }
    if i == n - 1 {
        return 0.0;
    }
    let r = x0 + i as f64 * dx;
    (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (dx * dx)
        + (n_dim as f64 - 1.0) / r * (values[i + 1] - values[i - 1]) / (2.0 * dx)
}

/// Run the solver. Returns the lifespan record, scalar series, snapshots
/// and (optionally) every frame.
pub fn solve_semilinear(prob: &SemilinearProblem, opts: &SolveOptions) -> Result<SemilinearRun> {
    prob.validate()?;
    if !(opts.t_max > 1.0) || !(opts.dx > 0.0) {
        return Err(Error::InvalidParams("t_max > 1 and dx > 0 required".into()));
    }
    let params = &prob.params;
    let ell = params.ell;
    let dx = opts.dx;
    let n_dim = params.n;

    let initial_half_width = if opts.store_frames {
        // Fixed domain for frame storage.
        params.radius + amplitude(opts.t_max, ell)? + 6.0 * dx
    } else {
        params.radius + 6.0 * dx
    };
    let x0 = if n_dim == 1 { -initial_half_width } else { 0.0 };
    let n0 = ((if n_dim == 1 {
        2.0 * initial_half_width
    } else {
        initial_half_width
    }) / dx)
        .ceil() as usize
        + 1;
    let mut mesh = Mesh {
        x0,
        dx,
        n_dim,
        prev: (0..n0)
            .map(|i| prob.eps * prob.u0.eval(x0 + i as f64 * dx))
            .collect(),
        curr: vec![0.0; n0],
    };

    let mut series = RunSeries::default();
    let mut frames: Option<Frames> = if opts.store_frames {
        Some(Frames {
            x0: mesh.x0,
            dx,
            times: Vec::new(),
            data: Vec::new(),
        })
    } else {
        None
    };
    let mut snapshots: Vec<(f64, GridFunction)> = Vec::new();
    let mut wanted: Vec<f64> = opts.snapshot_times.clone();
    wanted.sort_by(f64::total_cmp);

    let record_state = |series: &mut RunSeries,
                        frames: &mut Option<Frames>,
                        t: f64,
                        values: &[f64],
                        x0: f64| {
        series.times.push(t);
        series.u_avg.push({
            let signed: Vec<f64> = values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let w = if n_dim == 1 {
                        1.0
                    } else {
                        (x0 + i as f64 * dx).powi(n_dim as i32 - 1)
                    };
                    v * w
                })
                .collect();
            let base = trapezoid(&signed, dx);
            if n_dim == 1 {
                base
            } else {
                sphere_surface(n_dim) * base
            }
        });
        series.lp_p.push(measure_integral(values, x0, dx, n_dim, prob.p));
        series
            .sup
            .push(values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        if let Some(fr) = frames {
            fr.times.push(t);
            fr.data.push(values.to_vec());
        }
    };

    record_state(&mut series, &mut frames, 1.0, &mesh.prev, mesh.x0);

    let proposed_dt = |t: f64, sup: f64| -> f64 {
        if let Some(h) = opts.fixed_dt {
            return h;
        }
        let speed = if ell > 0.0 {
            (t + 1.0).powf(ell)
        } else {
            1.0
        };
        let mut h = opts.cfl * dx / speed;
        if opts.nonlinearity && sup > 0.0 {
            let scale = (prob.p * sup.powf(prob.p - 1.0)).sqrt();
            h = h.min(0.25 / scale.max(1e-30));
        }
        h
    };

    let cfl_ok = |t: f64, h: f64| -> bool {
        let speed = if ell > 0.0 { (t + h).powf(ell) } else { 1.0 };
        h <= 0.5 * dx / speed + 1e-15
    };

    let rhs_at = |mesh: &Mesh, t: f64, i: usize, nonlinear: bool, p: f64| -> f64 {
        let speed2 = t.powf(2.0 * ell);
        let u = mesh.curr[i];
        let mut rhs = speed2 * laplacian(&mesh.curr, i, dx, mesh.x0, n_dim)
            - params.nu2 / (t * t) * u;
        if nonlinear {
            rhs += u.abs().powf(p);
        }
        rhs
    };

    // Taylor first step from t = 1 (t^{2l} = 1 there).
    let sup0 = mesh.prev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h_prev = proposed_dt(1.0, sup0);
    if let Some(h) = opts.fixed_dt {
        if !cfl_ok(1.0, h) {
            return Err(Error::CflViolation(format!(
                "fixed dt = {h} violates the CFL bound at t = 1"
            )));
        }
    }
    {
        let n = mesh.len();
        for i in 0..n {
            let lap = laplacian(&mesh.prev, i, dx, mesh.x0, n_dim);
            let v1 = prob.eps * prob.u1.eval(mesh.x(i));
            let u0v = mesh.prev[i];
            let mut acc = lap - params.mu * v1 - params.nu2 * u0v;
            if opts.nonlinearity {
                acc += u0v.abs().powf(prob.p);
            }
            mesh.curr[i] = u0v + h_prev * v1 + 0.5 * h_prev * h_prev * acc;
        }
    }
    let mut t = 1.0 + h_prev;
    let mut dt_min = h_prev;
    record_state(&mut series, &mut frames, t, &mesh.curr, mesh.x0);

    let finish = |t_numeric: ExtReal,
                  blew_up: bool,
                  mesh: &Mesh,
                  series: RunSeries,
                  mut snapshots: Vec<(f64, GridFunction)>,
                  frames: Option<Frames>,
                  t: f64,
                  dt_min: f64|
     -> SemilinearRun {
        let final_sup = mesh.curr.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        snapshots.push((
            t,
            GridFunction::new(mesh.x0, dx, mesh.curr.clone()).expect("valid grid"),
        ));
        SemilinearRun {
            record: LifespanRecord {
                eps: prob.eps,
                t_numeric,
                blew_up,
                final_sup,
                dt_min,
                dx,
            },
            series,
            snapshots,
            frames,
            nonlinearity: opts.nonlinearity,
        }
    };

    loop {
        if t >= opts.t_max - 1e-12 {
            return Ok(finish(
                ExtReal::Infinite,
                false,
                &mesh,
                series,
                snapshots,
                frames,
                t,
                dt_min,
            ));
        }
        let sup = *series.sup.last().expect("series nonempty");
        let mut h = proposed_dt(t, sup).min(opts.t_max - t);
        if let Some(hf) = opts.fixed_dt {
            if !cfl_ok(t, hf) {
                return Err(Error::CflViolation(format!(
                    "fixed dt = {hf} violates the CFL bound at t = {t}"
                )));
            }
            h = hf.min(opts.t_max - t);
        }

        // Make room for the cone through the end of this step.
        if !opts.store_frames {
            let needed = params.radius + amplitude(t + h, ell)? + 6.0 * dx;
            mesh.ensure_cover(needed);
        }

        // Attempt the step, bisecting on threshold crossing.
        let next = loop {
            let n = mesh.len();
            let (ctt_p, ctt_0, ctt_m, ct_p, ct_0, ct_m) = {
                let (h1, h2) = (h_prev, h);
                (
                    2.0 / (h2 * (h1 + h2)),
                    -2.0 / (h1 * h2),
                    2.0 / (h1 * (h1 + h2)),
                    h1 / (h2 * (h1 + h2)),
                    (h2 - h1) / (h1 * h2),
                    -h2 / (h1 * (h1 + h2)),
                )
            };
            let damping = params.mu / t;
            let denom = ctt_p + damping * ct_p;
            let mut next = vec![0.0; n];
            let mut sup_next = 0.0f64;
            let mut finite = true;
            let lo = if n_dim == 1 { 1 } else { 0 };
            #[allow(clippy::needless_range_loop)] // three arrays in lockstep
            for i in lo..n - 1 {
                let rhs = rhs_at(&mesh, t, i, opts.nonlinearity, prob.p);
                let v = (rhs - (ctt_0 + damping * ct_0) * mesh.curr[i] - (ctt_m + damping * ct_m) * mesh.prev[i])
                    / denom;
                next[i] = v;
                sup_next = sup_next.max(v.abs());
                finite &= v.is_finite();
            }
            if !finite {
                // State exploded inside one step: blow-up at the current time.
                return Ok(finish(
                    ExtReal::Finite(t),
                    true,
                    &mesh,
                    series,
                    snapshots,
                    frames,
                    t,
                    dt_min,
                ));
            }
            if sup_next >= opts.blowup_threshold {
                if h <= opts.refine_rel * t {
                    mesh.prev.clone_from(&mesh.curr);
                    mesh.curr = next;
                    let t_cross = t + h;
                    record_state(&mut series, &mut frames, t_cross, &mesh.curr, mesh.x0);
                    return Ok(finish(
                        ExtReal::Finite(t_cross),
                        true,
                        &mesh,
                        series,
                        snapshots,
                        frames,
                        t_cross,
                        dt_min.min(h),
                    ));
                }
                h *= 0.5;
                if h < 1e-12 {
                    return Ok(finish(
                        ExtReal::Finite(t),
                        true,
                        &mesh,
                        series,
                        snapshots,
                        frames,
                        t,
                        dt_min,
                    ));
                }
                continue;
            }
            break next;
        };

        mesh.prev.clone_from(&mesh.curr);
        mesh.curr = next;
        h_prev = h;
        dt_min = dt_min.min(h);
        t += h;
        record_state(&mut series, &mut frames, t, &mesh.curr, mesh.x0);
        while let Some(&t_req) = wanted.first() {
            if t_req <= t {
                snapshots.push((
                    t,
                    GridFunction::new(mesh.x0, dx, mesh.curr.clone()).expect("valid grid"),
                ));
                wanted.remove(0);
            } else {
                break;
            }
        }
    }
}

/// Max interior residual of the spatial-average ODE
/// U″ + μt⁻¹U′ + ν²t⁻²U = ∫|u|^p dx along a fixed-step run, using
/// fourth-order stencils so the reported number measures the solver's own
/// O(Δt²)+O(Δx²) deviation, not the stencil's. For linear-mode runs the
/// source side is zero instead of the recorded ‖u‖_p^p.
pub fn u_ode_residual(run: &SemilinearRun, params: &ModelParams) -> f64 {
    let s = &run.series;
    let n = s.times.len();
    if n < 5 {
        return 0.0;
    }
    let h = s.times[1] - s.times[0];
    let mut worst = 0.0f64;
    for i in 2..n - 2 {
        // The stencil needs a uniform 5-point window; skip the tail where a
        // shortened final step breaks the spacing.
        let uniform = (i - 2..i + 2)
            .all(|k| (s.times[k + 1] - s.times[k] - h).abs() <= 1e-12 * h.max(1.0));
        if !uniform {
            continue;
        }
        let t = s.times[i];
        let upp = (-s.u_avg[i + 2] + 16.0 * s.u_avg[i + 1] - 30.0 * s.u_avg[i]
            + 16.0 * s.u_avg[i - 1]
            - s.u_avg[i - 2])
            / (12.0 * h * h);
        let up = (-s.u_avg[i + 2] + 8.0 * s.u_avg[i + 1] - 8.0 * s.u_avg[i - 1]
            + s.u_avg[i - 2])
            / (12.0 * h);
        let source = if run.nonlinearity { s.lp_p[i] } else { 0.0 };
        let res = upp + params.mu / t * up + params.nu2 / (t * t) * s.u_avg[i] - source;
        worst = worst.max(res.abs());
    }
    worst
}

/// Max relative discrepancy between the recorded U(t) and the Duhamel
/// representation U_lin(t) + t^{−r₁}∫₁ᵗ s^{r₁−r₂−1} ∫₁ˢ τ^{r₂+1} ‖u‖_p^p dτ ds,
/// with the nested integrals taken by cumulative trapezoid on the recorded
/// series.
pub fn u_representation_check(run: &SemilinearRun, prob: &SemilinearProblem) -> Result<f64> {
    let sc = prob.params.constants()?;
    let s = &run.series;
    let n = s.times.len();
    if n < 3 {
        return Ok(0.0);
    }
    let u1_total = {
        // U'(1) = eps * integral of u1.
        let r = prob.params.radius;
        if prob.params.n == 1 {
            prob.eps
                * quad::integrate(|x| prob.u1.eval(x), -r, r, 1e-12)
                    .unwrap_or(0.0)
        } else {
            prob.eps
                * sphere_surface(prob.params.n)
                * quad::integrate(
                    |r_| prob.u1.eval(r_) * r_.powi(prob.params.n as i32 - 1),
                    0.0,
                    r,
                    1e-12,
                )
                .unwrap_or(0.0)
        }
    };
    let u_1 = s.u_avg[0];
    let u_lin = |t: f64| -> f64 {
        if sc.r1 > sc.r2 {
            ((sc.r1 * t.powf(-sc.r2) - sc.r2 * t.powf(-sc.r1)) * u_1
                + (t.powf(-sc.r2) - t.powf(-sc.r1)) * u1_total)
                / (sc.r1 - sc.r2)
        } else {
            t.powf(-sc.r1) * ((1.0 + sc.r1 * t.ln()) * u_1 + t.ln() * u1_total)
        }
    };
    // inner(s) = int_1^s tau^{r2+1} w(tau) dtau, outer(t) = int_1^t s^{r1-r2-1} inner(s) ds.
    let mut inner = vec![0.0; n];
    for i in 1..n {
        let dt = s.times[i] - s.times[i - 1];
        let f0 = s.times[i - 1].powf(sc.r2 + 1.0) * s.lp_p[i - 1];
        let f1 = s.times[i].powf(sc.r2 + 1.0) * s.lp_p[i];
        inner[i] = inner[i - 1] + 0.5 * dt * (f0 + f1);
    }
    let mut outer = vec![0.0; n];
    for i in 1..n {
        let dt = s.times[i] - s.times[i - 1];
        let f0 = s.times[i - 1].powf(sc.r1 - sc.r2 - 1.0) * inner[i - 1];
        let f1 = s.times[i].powf(sc.r1 - sc.r2 - 1.0) * inner[i];
        outer[i] = outer[i - 1] + 0.5 * dt * (f0 + f1);
    }
    let scale = s.u_avg.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-30);
    let mut worst = 0.0f64;
    #[allow(clippy::needless_range_loop)] // three series in lockstep
    for i in 0..n {
        let t = s.times[i];
        // For linear-mode runs the Duhamel source is absent: U = U_lin.
        let nested = if run.nonlinearity { outer[i] } else { 0.0 };
        let model = u_lin(t) + t.powf(-sc.r1) * nested;
        worst = worst.max((s.u_avg[i] - model).abs());
    }
    Ok(worst / scale)
}

/// A smooth space-time test function with analytic derivatives.
pub struct TestFunction {
    pub phi: Box<dyn Fn(f64, f64) -> f64>,
    pub phi_t: Box<dyn Fn(f64, f64) -> f64>,
    pub phi_x: Box<dyn Fn(f64, f64) -> f64>,
}

/// Product bumps (1 − ((t−c_t)/w_t)²)³ (1 − ((x−c_x)/w_x)²)³ with assorted
/// centers and widths.
pub fn default_test_bank(t_end: f64, x_extent: f64) -> Vec<TestFunction> {
    let mut bank = Vec::new();
    let configs = [
        (1.0, t_end - 1.0, 0.0, x_extent),
        (1.0, 0.6 * (t_end - 1.0), 0.3 * x_extent, 0.5 * x_extent),
        (0.5 * (1.0 + t_end), 0.5 * (t_end - 1.0), 0.0, 0.7 * x_extent),
        (t_end, 0.8 * (t_end - 1.0), -0.4 * x_extent, 0.6 * x_extent),
        (1.0, t_end - 1.0, 2.5 * x_extent, 0.4 * x_extent), // far from the data
    ];
    for (ct, wt, cx, wx) in configs {
        let bump = move |s: f64| -> f64 {
            if s.abs() >= 1.0 {
                0.0
            } else {
                (1.0 - s * s).powi(3)
            }
        };
        let dbump = move |s: f64| -> f64 {
            if s.abs() >= 1.0 {
                0.0
            } else {
                -6.0 * s * (1.0 - s * s).powi(2)
            }
        };
        bank.push(TestFunction {
            phi: Box::new(move |t, x| bump((t - ct) / wt) * bump((x - cx) / wx)),
            phi_t: Box::new(move |t, x| dbump((t - ct) / wt) / wt * bump((x - cx) / wx)),
            phi_x: Box::new(move |t, x| bump((t - ct) / wt) * dbump((x - cx) / wx) / wx),
        });
    }
    bank
}

/// Normalized residual of the weak formulation over a bank of test
/// functions, evaluated on a run with stored frames (n = 1 only): for each
/// φ the identity
///
/// ```text
/// ∫ uₜ(T)φ(T) + ∫∫ (−uₜφₜ + s^{2ℓ}uₓφₓ) + ∫∫ (μ s⁻¹uₜφ + ν² s⁻²uφ)
///   = ε∫u₁φ(1) + ∫∫|u|^p φ
/// ```
///
/// is evaluated by trapezoid quadrature in space and time, with ∂ₜu exact
/// at t = 1 (= εu₁) and one-sided at the final time.
pub fn weak_form_residual(
    run: &SemilinearRun,
    prob: &SemilinearProblem,
    bank: &[TestFunction],
) -> Result<f64> {
    let frames = run
        .frames
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("weak form needs stored frames".into()))?;
    if prob.params.n != 1 {
        return Err(Error::InvalidParams(
            "weak-form residual implemented for n = 1".into(),
        ));
    }
    let nt = frames.times.len();
    let nx = frames.data[0].len();
    let dx = frames.dx;
    let mut worst = 0.0f64;
    for tf in bank {
        // Time-slice integrands for the three double integrals.
        let mut wave = Vec::with_capacity(nt);
        let mut damp = Vec::with_capacity(nt);
        let mut source = Vec::with_capacity(nt);
        for k in 0..nt {
            let t = frames.times[k];
            let u = &frames.data[k];
            let mut slice_wave = Vec::with_capacity(nx);
            let mut slice_damp = Vec::with_capacity(nx);
            let mut slice_source = Vec::with_capacity(nx);
            for i in 0..nx {
                let x = frames.x0 + i as f64 * dx;
                let u_t = time_derivative(frames, prob, k, i);
                let u_x = if i == 0 || i == nx - 1 {
                    0.0
                } else {
                    (u[i + 1] - u[i - 1]) / (2.0 * dx)
                };
                let phi = (tf.phi)(t, x);
                slice_wave
                    .push(-u_t * (tf.phi_t)(t, x) + t.powf(2.0 * prob.params.ell) * u_x * (tf.phi_x)(t, x));
                slice_damp.push(
                    prob.params.mu / t * u_t * phi + prob.params.nu2 / (t * t) * u[i] * phi,
                );
                slice_source.push(u[i].abs().powf(prob.p) * phi);
            }
            wave.push(trapezoid(&slice_wave, dx));
            damp.push(trapezoid(&slice_damp, dx));
            source.push(trapezoid(&slice_source, dx));
        }
        let dt_series: Vec<f64> = frames.times.windows(2).map(|w| w[1] - w[0]).collect();
        let time_trapz = |vals: &[f64]| -> f64 {
            let mut acc = 0.0;
            for (k, dt) in dt_series.iter().enumerate() {
                acc += 0.5 * dt * (vals[k] + vals[k + 1]);
            }
            acc
        };
        let t_end = *frames.times.last().unwrap();
        let final_term: f64 = {
            let k = nt - 1;
            let vals: Vec<f64> = (0..nx)
                .map(|i| {
                    let x = frames.x0 + i as f64 * dx;
                    time_derivative(frames, prob, k, i) * (tf.phi)(t_end, x)
                })
                .collect();
            trapezoid(&vals, dx)
        };
        let data_term: f64 = {
            let vals: Vec<f64> = (0..nx)
                .map(|i| {
                    let x = frames.x0 + i as f64 * dx;
                    prob.eps * prob.u1.eval(x) * (tf.phi)(1.0, x)
                })
                .collect();
            trapezoid(&vals, dx)
        };
        let lhs = final_term + time_trapz(&wave) + time_trapz(&damp);
        let rhs = data_term + time_trapz(&source);
        let scale = final_term.abs()
            + time_trapz(&wave).abs()
            + time_trapz(&damp).abs()
            + data_term.abs()
            + time_trapz(&source).abs();
        let res = (lhs - rhs).abs() / scale.max(1e-30);
        worst = worst.max(res);
    }
    Ok(worst)
}

fn time_derivative(frames: &Frames, prob: &SemilinearProblem, k: usize, i: usize) -> f64 {
    let nt = frames.times.len();
    if k == 0 {
        // Exact initial velocity.
        return prob.eps * prob.u1.eval(frames.x0 + i as f64 * frames.dx);
    }
    if k == nt - 1 {
        let h = frames.times[k] - frames.times[k - 1];
        if k >= 2 && (frames.times[k - 1] - frames.times[k - 2] - h).abs() < 1e-12 {
            return (3.0 * frames.data[k][i] - 4.0 * frames.data[k - 1][i]
                + frames.data[k - 2][i])
                / (2.0 * h);
        }
        return (frames.data[k][i] - frames.data[k - 1][i]) / h;
    }
    let h1 = frames.times[k] - frames.times[k - 1];
    let h2 = frames.times[k + 1] - frames.times[k];
    // Nonuniform central difference.
    (h1 * h1 * frames.data[k + 1][i] + (h2 * h2 - h1 * h1) * frames.data[k][i]
        - h2 * h2 * frames.data[k - 1][i])
        / (h1 * h2 * (h1 + h2))
}

/// Least-squares fit of ln T against ε^{−p(p−1)}.
#[derive(Debug, Clone, Copy)]
pub struct SweepFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_abs_residual: f64,
    /// Every ε in the sweep blew up within the window.
    pub complete: bool,
}

/// Run the solver over an ε grid and fit ln T against ε^{−p(p−1)}.
/// Records are returned in ε order; runs that never blow up are kept with
/// T = +∞ and excluded from the fit (`complete` turns false).
pub fn lifespan_sweep(
    prob: &SemilinearProblem,
    eps_grid: &[f64],
    opts: &SolveOptions,
    jobs: usize,
) -> Result<(Vec<LifespanRecord>, SweepFit)> {
    let mut records: Vec<LifespanRecord> = Vec::with_capacity(eps_grid.len());
    if jobs <= 1 {
        for &eps in eps_grid {
            let mut p = prob.clone();
            p.eps = eps;
            records.push(solve_semilinear(&p, opts)?.record);
        }
    } else {
        let results: Vec<Result<LifespanRecord>> = std::thread::scope(|scope| {
            let handles: Vec<_> = eps_grid
                .iter()
                .map(|&eps| {
                    let mut p = prob.clone();
                    p.eps = eps;
                    let opts = opts.clone();
                    scope.spawn(move || solve_semilinear(&p, &opts).map(|r| r.record))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("no panics")).collect()
        });
        for r in results {
            records.push(r?);
        }
    }
    records.sort_by(|a, b| a.eps.total_cmp(&b.eps));

    // Fit over the finite lifespans.
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            r.t_numeric
                .finite()
                .map(|t| (r.eps.powf(-prob.p * (prob.p - 1.0)), t.ln()))
        })
        .collect();
    let complete = pts.len() == records.len();
    let fit = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        let max_abs_residual = pts
            .iter()
            .map(|p| (p.1 - slope * p.0 - intercept).abs())
            .fold(0.0f64, f64::max);
        SweepFit {
            slope,
            intercept,
            max_abs_residual,
            complete,
        }
    } else {
        SweepFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            max_abs_residual: f64::NAN,
            complete,
        }
    };
    Ok((records, fit))
}

/// Outcome of the iteration-frame check.
#[derive(Debug, Clone)]
pub struct FrameReport {
    /// Largest K for which the frame inequality held at every checked time.
    pub k_max: f64,
    /// The (t, ‖u‖_p^p, frame integral) triples actually checked.
    pub checked: Vec<(f64, f64, f64)>,
}

/// Evaluate the iteration frame for ‖u(t)‖_p^p on a recorded radial run:
///
/// ```text
/// ‖u(t)‖_p^p ≥ K t^{−μp/2+(1−√δ)p/2} (A+R)^{−(n−1)[1−p/2]_−}
///   ∫₀^{A−R} ϱ^{(n−1)[1−p/2]_+} ((φ_ℓ(t)+R₁)² − ϱ²)^{−γp} (A+R−ϱ)^{−(n−1)p/2}
///       (∫₁^{b₀(ϱ)} b^{μ/2+(1−√δ)/2} ‖u(b)‖_p^p db)^p dϱ,
/// ```
///
/// with b₀(ϱ) = A_ℓ⁻¹((A_ℓ(t)−ϱ−R)/2) and R₁ = 0 for γ ≥ 0, φ_ℓ(1)−R for
/// γ < 0. The constant K carries no explicit value, only existence, so the
/// report returns the largest K the run supports across its time grid.
pub fn iteration_frame_check(run: &SemilinearRun, prob: &SemilinearProblem) -> Result<FrameReport> {
    let params = &prob.params;
    if params.n < 2 {
        return Err(Error::InvalidParams(
            "iteration frame check needs a radial run with n >= 2".into(),
        ));
    }
    let sc = params.constants()?;
    let sqrt_d = sc.delta.sqrt();
    let s = &run.series;
    let n = s.times.len();
    let p = prob.p;
    let r = params.radius;
    let ell = params.ell;

    // Cumulative H(b) = int_1^b s^{mu/2+(1-sqrt d)/2} w(s) ds on the series grid.
    let bpow = 0.5 * params.mu + 0.5 * (1.0 - sqrt_d);
    let mut cum = vec![0.0; n];
    for i in 1..n {
        let dt = s.times[i] - s.times[i - 1];
        let f0 = s.times[i - 1].powf(bpow) * s.lp_p[i - 1];
        let f1 = s.times[i].powf(bpow) * s.lp_p[i];
        cum[i] = cum[i - 1] + 0.5 * dt * (f0 + f1);
    }
    let h_of = |b: f64| -> f64 {
        // Linear interpolation in the cumulative table.
        if b <= s.times[0] {
            return 0.0;
        }
        if b >= s.times[n - 1] {
            return cum[n - 1];
        }
        let idx = s.times.partition_point(|&x| x < b);
        let (t0, t1) = (s.times[idx - 1], s.times[idx]);
        let w = (b - t0) / (t1 - t0);
        cum[idx - 1] * (1.0 - w) + cum[idx] * w
    };

    let pos_part = (1.0 - 0.5 * p).max(0.0) * (params.n as f64 - 1.0);
    let neg_part = (0.5 * p - 1.0).max(0.0) * (params.n as f64 - 1.0);
    let r1_const = if sc.gamma >= 0.0 {
        0.0
    } else {
        phi_ell(1.0, ell) - r
    };

    let mut k_max = f64::INFINITY;
    let mut checked = Vec::new();
    for i in 0..n {
        let t = s.times[i];
        let a_t = amplitude(t, ell)?;
        if a_t <= r * 1.5 {
            continue; // need a nonempty rho interval with margin
        }
        let phi_t = phi_ell(t, ell);
        let prefactor =
            t.powf(-0.5 * params.mu * p + 0.5 * (1.0 - sqrt_d) * p) / (a_t + r).powf(neg_part);
        let integral = quad::integrate(
            |rho| {
                let base = (phi_t + r1_const - rho) * (phi_t + r1_const + rho);
                let b0 = amplitude_inv(0.5 * (a_t - rho - r).max(0.0), ell).unwrap_or(1.0);
                rho.powf(pos_part) * base.powf(-sc.gamma * p)
                    * (a_t + r - rho).powf(-0.5 * (params.n as f64 - 1.0) * p)
                    * h_of(b0).powf(p)
            },
            0.0,
            a_t - r,
            1e-10,
        )?;
        let phi = prefactor * integral;
        if phi > 0.0 {
            let ratio = s.lp_p[i] / phi;
            k_max = k_max.min(ratio);
            checked.push((t, s.lp_p[i], phi));
        }
    }
    if checked.is_empty() {
        return Err(Error::InvalidParams(
            "run too short: no time with A(t) > 1.5 R".into(),
        ));
    }
    Ok(FrameReport { k_max, checked })
}
