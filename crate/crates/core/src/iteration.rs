//! The iteration machinery behind the lifespan bound: sequences aⱼ, αⱼ, Bⱼ,
//! βⱼ, β̃ⱼ, σⱼ, the lower-bound multipliers Kⱼ(t, ε) and L(t, ε), and the
//! exponential lifespan bound.
//!
//! The recursions
//!
//! ```text
//! a_{j+1} = 1 + 4(a_j − 1)/(1−θ),     α_{j+1} = −2 + 4(α_j + 2)/(1−θ),
//! B_{j+1} = D p^{−(j+1)} B_j^p,
//! ```
//!
//! have closed forms a_j = (a₀−1)(4/(1−θ))^j + 1, α_j = (α₀+2)(4/(1−θ))^j − 2
//! and, in the log domain,
//!
//! ```text
//! ln B_j = p^j ln E₀ + (j+1) ln p/(p−1) + ln p/(p−1)² − ln D/(p−1),
//! E₀ = B₀ p^{−p/(p−1)²} D^{1/(p−1)}.
//! ```
//!
//! B_j grows doubly exponentially, so everything involving it stays in the
//! log domain. The constants D, B₀, Q, M are only defined through implicit
//! constants of the underlying estimates; they are configuration inputs
//! with default 1, and every asserted property is invariant to their
//! positive values. E₁ = Q E₀^{1/p}, N = M p^{1/(p−1)²} D^{−1/(p−1)} and
//! E₂ = (e/E₁)^{p−1} are derived, never configured independently, which is
//! what makes the two forms of ln Kⱼ agree identically.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::model::{amplitude_inv, characteristic_roots, phi_ell, ModelParams};

/// Configuration of the iteration scheme at a fixed critical power p.
#[derive(Debug, Clone, Copy)]
pub struct IterationConfig {
    pub params: ModelParams,
    /// The critical power (= shifted Strauss exponent in the application).
    pub p: f64,
    /// Slicing parameter θ ∈ (1/2, 1).
    pub theta: f64,
    /// a₀ ≥ max{2, 1/(2θ−1)}.
    pub a0: f64,
    /// α₀ > 2(T₂^{ℓ+1} − 1).
    pub alpha0: f64,
    /// Onset time T₂ > 2 of the first lower bound (only the α₀ constraint
    /// consumes it).
    pub t2: f64,
    /// Recursion constant D > 0.
    pub d: f64,
    /// First lower-bound constant B₀ > 0.
    pub b0: f64,
    /// Logarithm-slicing constant Q > 0.
    pub q: f64,
    /// Multiplier M > 0.
    pub m: f64,
    /// E₁ = Q E₀^{1/p}, derived.
    pub e1: f64,
    /// E₂ = (e / E₁)^{p−1}, derived; the L(t, ε) ≥ 1 threshold constant.
    pub e2: f64,
}

/// The free constants of the iteration, all default 1.
#[derive(Debug, Clone, Copy)]
pub struct IterationConstants {
    pub d: f64,
    pub b0: f64,
    pub q: f64,
    pub m: f64,
    pub t2: f64,
}

impl Default for IterationConstants {
    fn default() -> Self {
        Self {
            d: 1.0,
            b0: 1.0,
            q: 1.0,
            m: 1.0,
            t2: 2.5,
        }
    }
}

impl IterationConfig {
    pub fn new(
        params: ModelParams,
        p: f64,
        theta: f64,
        a0: f64,
        alpha0: f64,
        consts: IterationConstants,
    ) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::InvalidParams(format!("p = {p} must be > 1")));
        }
        if !(theta > 0.5 && theta < 1.0) {
            return Err(Error::InvalidParams(format!(
                "theta = {theta} outside (1/2, 1)"
            )));
        }
        let a0_min = 2f64.max(1.0 / (2.0 * theta - 1.0));
        if a0 < a0_min {
            return Err(Error::InvalidParams(format!(
                "a0 = {a0} below max(2, 1/(2 theta - 1)) = {a0_min}"
            )));
        }
        if !(consts.t2 > 2.0) {
            return Err(Error::InvalidParams(format!(
                "T2 = {} must be > 2",
                consts.t2
            )));
        }
        let alpha0_min = 2.0 * (consts.t2.powf(params.ell + 1.0) - 1.0);
        if alpha0 <= alpha0_min {
            return Err(Error::InvalidParams(format!(
                "alpha0 = {alpha0} must exceed 2(T2^(l+1) - 1) = {alpha0_min}"
            )));
        }
        if !(consts.d > 0.0 && consts.b0 > 0.0 && consts.q > 0.0 && consts.m > 0.0) {
            return Err(Error::InvalidParams(
                "iteration constants must be positive".into(),
            ));
        }
        let pm1 = p - 1.0;
        let ln_e0 = consts.b0.ln() - p / (pm1 * pm1) * p.ln() + consts.d.ln() / pm1;
        let e1 = consts.q * (ln_e0 / p).exp();
        let e2 = (std::f64::consts::E / e1).powf(pm1);
        Ok(Self {
            params,
            p,
            theta,
            a0,
            alpha0,
            t2: consts.t2,
            d: consts.d,
            b0: consts.b0,
            q: consts.q,
            m: consts.m,
            e1,
            e2,
        })
    }

    /// Default configuration with θ = 3/4, a₀ = 2, α₀ just above its floor.
    pub fn with_defaults(params: ModelParams, p: f64) -> Result<Self> {
        let consts = IterationConstants::default();
        let alpha0 = 2.0 * (consts.t2.powf(params.ell + 1.0) - 1.0) + 1.0;
        Self::new(params, p, 0.75, 2.0, alpha0, consts)
    }

    /// ln E₀ with E₀ = B₀ p^{−p/(p−1)²} D^{1/(p−1)}.
    pub fn ln_e0(&self) -> f64 {
        let pm1 = self.p - 1.0;
        self.b0.ln() - self.p / (pm1 * pm1) * self.p.ln() + self.d.ln() / pm1
    }

    /// ln N with N = M p^{1/(p−1)²} D^{−1/(p−1)}.
    pub fn ln_n(&self) -> f64 {
        let pm1 = self.p - 1.0;
        self.m.ln() + self.p.ln() / (pm1 * pm1) - self.d.ln() / pm1
    }

    fn growth(&self) -> f64 {
        4.0 / (1.0 - self.theta)
    }
}

/// One row of the iteration: all j-dependent sequence values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationState {
    pub j: u32,
    pub a_j: f64,
    pub alpha_j: f64,
    pub log_b_j: f64,
    pub beta_j: f64,
    pub beta_tilde_j: f64,
    pub sigma_j: f64,
}

/// The j = 0 row.
pub fn initial_state(cfg: &IterationConfig) -> IterationState {
    make_state(0, cfg.a0, cfg.alpha0, cfg.b0.ln(), cfg)
}

/// Advance one step of the recursions (B in the log domain).
pub fn sequence_step(state: &IterationState, cfg: &IterationConfig) -> IterationState {
    let j_next = state.j + 1;
    let a_next = 1.0 + (state.a_j - 1.0) * cfg.growth();
    let alpha_next = -2.0 + (state.alpha_j + 2.0) * cfg.growth();
    let log_b_next = cfg.p * state.log_b_j - j_next as f64 * cfg.p.ln() + cfg.d.ln();
    make_state(j_next, a_next, alpha_next, log_b_next, cfg)
}

fn make_state(
    j: u32,
    a_j: f64,
    alpha_j: f64,
    log_b_j: f64,
    cfg: &IterationConfig,
) -> IterationState {
    IterationState {
        j,
        a_j,
        alpha_j,
        log_b_j,
        beta_j: beta_j(a_j, alpha_j, cfg),
        beta_tilde_j: beta_tilde_j(a_j, alpha_j, cfg),
        sigma_j: sigma_j(a_j, alpha_j, cfg),
    }
}

/// Closed form a_j = (a₀−1)(4/(1−θ))^j + 1.
pub fn a_j_closed(j: u32, cfg: &IterationConfig) -> f64 {
    (cfg.a0 - 1.0) * cfg.growth().powi(j as i32) + 1.0
}

/// Closed form α_j = (α₀+2)(4/(1−θ))^j − 2.
pub fn alpha_j_closed(j: u32, cfg: &IterationConfig) -> f64 {
    (cfg.alpha0 + 2.0) * cfg.growth().powi(j as i32) - 2.0
}

/// Closed form of ln B_j.
pub fn log_b_closed_form(j: u32, cfg: &IterationConfig) -> f64 {
    let pm1 = cfg.p - 1.0;
    cfg.p.powi(j as i32) * cfg.ln_e0() + (j as f64 + 1.0) * cfg.p.ln() / pm1
        + cfg.p.ln() / (pm1 * pm1)
        - cfg.d.ln() / pm1
}

/// β_j = 1 − (½(1 + φ_ℓ(1)/(4a_jR + (4α_j+3)φ_ℓ(1))))^{(r₂+2)/(ℓ+1)+n−1}.
pub fn beta_j(a_j: f64, alpha_j: f64, cfg: &IterationConfig) -> f64 {
    let (_, r2) = roots(cfg);
    let phi1 = phi_ell(1.0, cfg.params.ell);
    let expo = (r2 + 2.0) / (cfg.params.ell + 1.0) + cfg.params.n as f64 - 1.0;
    let inner = 0.5
        * (1.0 + phi1 / (4.0 * a_j * cfg.params.radius + (4.0 * alpha_j + 3.0) * phi1));
    1.0 - inner.powf(expo)
}

/// β̃_j = 1 − (½(1 + φ_ℓ(1)/(8a_jR + (8α_j+5)φ_ℓ(1))))^{(r₁+2)/(ℓ+1)+n−1}.
pub fn beta_tilde_j(a_j: f64, alpha_j: f64, cfg: &IterationConfig) -> f64 {
    let (r1, _) = roots(cfg);
    let phi1 = phi_ell(1.0, cfg.params.ell);
    let expo = (r1 + 2.0) / (cfg.params.ell + 1.0) + cfg.params.n as f64 - 1.0;
    let inner = 0.5
        * (1.0 + phi1 / (8.0 * a_j * cfg.params.radius + (8.0 * alpha_j + 5.0) * phi1));
    1.0 - inner.powf(expo)
}

/// σ_j: the onset time of the j-th lower bound, the max of four terms.
pub fn sigma_j(a_j: f64, alpha_j: f64, cfg: &IterationConfig) -> f64 {
    let ell = cfg.params.ell;
    let r = cfg.params.radius;
    let phi1 = phi_ell(1.0, ell);
    let theta = cfg.theta;
    let lin = amplitude_inv(8.0 * a_j * r + 4.0 * (2.0 * alpha_j + 1.0), ell)
        .expect("nonnegative argument");
    let quad_arg =
        16.0 / ((1.0 - theta) * (1.0 - theta)) * ((a_j - 1.0) * r + (alpha_j + 2.0) * phi1).powi(2);
    let quadratic = amplitude_inv(quad_arg, ell).expect("nonnegative argument");
    let c1 = 2f64.powf(1.0 / (ell + 1.0));
    let c2 = (2.0 * (ell + 1.0)).powf(1.0 / (ell + 1.0));
    lin.max(quadratic).max(c1).max(c2)
}

fn roots(cfg: &IterationConfig) -> (f64, f64) {
    characteristic_roots(cfg.params.mu, cfg.params.nu2).expect("config params admissible")
}

/// L(t, ε) = ln(E₁ ε^p (ln t)^{1/(p−1)}).
pub fn l_function(t: f64, eps: f64, cfg: &IterationConfig) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("L(t, eps) requires t > 1, got {t}")));
    }
    Ok((cfg.e1 * eps.powf(cfg.p)).ln() + t.ln().ln() / (cfg.p - 1.0))
}

/// ln K_j(t, ε) in the exponential form
/// p^{j+1} L(t,ε) + ln N + ln(β_j β̃_j) + (j+1) ln p/(p−1) − ln ln t/(p−1).
pub fn k_j_log(j: u32, t: f64, eps: f64, cfg: &IterationConfig) -> Result<f64> {
    let l = l_function(t, eps, cfg)?;
    let state = state_at(j, cfg);
    let pm1 = cfg.p - 1.0;
    Ok(cfg.p.powi(j as i32 + 1) * l
        + cfg.ln_n()
        + (state.beta_j * state.beta_tilde_j).ln()
        + (j as f64 + 1.0) * cfg.p.ln() / pm1
        - t.ln().ln() / pm1)
}

/// ln K_j(t, ε) in the direct product form
/// ln M + ln(β_j β̃_j) + p^{j+1} ln Q + ln B_j + p^{j+2} ln ε
/// + (p^{j+1}−1)/(p−1) ln ln t.
pub fn k_j_log_product(j: u32, t: f64, eps: f64, cfg: &IterationConfig) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("K_j requires t > 1, got {t}")));
    }
    let state = state_at(j, cfg);
    let p_j1 = cfg.p.powi(j as i32 + 1);
    Ok(cfg.m.ln()
        + (state.beta_j * state.beta_tilde_j).ln()
        + p_j1 * cfg.q.ln()
        + log_b_closed_form(j, cfg)
        + p_j1 * cfg.p * eps.ln()
        + (p_j1 - 1.0) / (cfg.p - 1.0) * t.ln().ln())
}

/// The j-th row via the closed forms.
pub fn state_at(j: u32, cfg: &IterationConfig) -> IterationState {
    make_state(
        j,
        a_j_closed(j, cfg),
        alpha_j_closed(j, cfg),
        log_b_closed_form(j, cfg),
        cfg,
    )
}

/// T₀(ε) = exp(E₂ ε^{−p(p−1)}): the time after which L(t, ε) ≥ 1.
pub fn t0_of_eps(eps: f64, cfg: &IterationConfig) -> f64 {
    (cfg.e2 * eps.powf(-cfg.p * (cfg.p - 1.0))).exp()
}

/// The lifespan bound exp(E ε^{−p(p−1)}) with E = 2E₁; +∞ on overflow.
pub fn lifespan_bound(eps: f64, cfg: &IterationConfig) -> ExtReal {
    let exponent = 2.0 * cfg.e1 * eps.powf(-cfg.p * (cfg.p - 1.0));
    let bound = exponent.exp();
    if bound.is_finite() {
        ExtReal::Finite(bound)
    } else {
        ExtReal::Infinite
    }
}
