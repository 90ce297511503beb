//! Model parameters, spectral constants and critical exponents.
//!
//! The equation is parameterized by the quadruple (ℓ, μ, ν², n) together with
//! the data support radius R. Everything else — the discriminant
//! δ = (μ−1)² − 4ν², the characteristic roots r₁ ≥ r₂ of r² − (μ−1)r + ν² = 0,
//! the kernel constants γ and c, and the Strauss/Fujita critical exponents —
//! is recomputed deterministically from those five numbers.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;

/// The parameter quadruple (ℓ, μ, ν², n) plus the data support radius R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Exponent ℓ > −1 of the propagation speed t^ℓ.
    pub ell: f64,
    /// Damping coefficient μ ≥ 0.
    pub mu: f64,
    /// Mass coefficient ν² ≥ 0.
    pub nu2: f64,
    /// Space dimension n ≥ 1.
    pub n: usize,
    /// Support radius R > 0 of the Cauchy data.
    pub radius: f64,
}

impl ModelParams {
    pub fn new(ell: f64, mu: f64, nu2: f64, n: usize, radius: f64) -> Result<Self> {
        if !(ell > -1.0) || !ell.is_finite() {
            return Err(Error::InvalidParams(format!("ell = {ell} must be > -1")));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParams(format!("mu = {mu} must be >= 0")));
        }
        if !(nu2 >= 0.0) || !nu2.is_finite() {
            return Err(Error::InvalidParams(format!("nu2 = {nu2} must be >= 0")));
        }
        if n < 1 {
            return Err(Error::InvalidParams("n must be >= 1".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParams(format!("R = {radius} must be > 0")));
        }
        Ok(Self {
            ell,
            mu,
            nu2,
            n,
            radius,
        })
    }

    /// δ = (μ−1)² − 4ν² for these parameters. May be negative; operations
    /// that need the admissible regime must check.
    pub fn delta(&self) -> f64 {
        delta(self.mu, self.nu2)
    }

    /// Derived spectral constants; fails with `NegativeDelta` outside the
    /// admissible regime.
    pub fn constants(&self) -> Result<SpectralConstants> {
        SpectralConstants::from_params(self)
    }
}

/// Derived scalars of the admissible regime δ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConstants {
    pub delta: f64,
    /// Larger characteristic root r₁ = (μ−1+√δ)/2.
    pub r1: f64,
    /// Smaller characteristic root r₂ = (μ−1−√δ)/2.
    pub r2: f64,
    /// Kernel exponent γ = 1/2 − √δ/(2(ℓ+1)).
    pub gamma: f64,
    /// Kernel constant c = 2^{−√δ/(1+ℓ)} (1+ℓ)^{−1+√δ/(1+ℓ)}.
    pub c: f64,
    /// Shifted Strauss exponent p_Str(n + μ/(ℓ+1), ℓ).
    pub p_strauss_shifted: ExtReal,
    /// Shifted Fujita exponent p_Fuj((ℓ+1)n + (μ−1−√δ)/2). Stored as an
    /// extended real: the effective dimension can degenerate to ≤ 0 for
    /// ℓ near −1 with n = 1, in which case the heat branch imposes no
    /// finite threshold.
    pub p_fujita_shifted: ExtReal,
    /// sup of the blow-up range: max of the two shifted exponents.
    pub p_blowup_sup: ExtReal,
}

impl SpectralConstants {
    pub fn from_params(params: &ModelParams) -> Result<Self> {
        let d = params.delta();
        if d < 0.0 {
            return Err(Error::NegativeDelta(d));
        }
        let (r1, r2) = characteristic_roots(params.mu, params.nu2)?;
        let sqrt_d = d.sqrt();
        let lp1 = params.ell + 1.0;
        let gamma = 0.5 - sqrt_d / (2.0 * lp1);
        let c = 2f64.powf(-sqrt_d / lp1) * lp1.powf(-1.0 + sqrt_d / lp1);
        let p_strauss_shifted = strauss_exponent_shifted(params);
        let heat_dim = lp1 * params.n as f64 + 0.5 * (params.mu - 1.0 - sqrt_d);
        let p_fujita_shifted = match fujita_exponent(heat_dim) {
            Ok(p) => ExtReal::Finite(p),
            Err(_) => ExtReal::Infinite,
        };
        let p_blowup_sup = p_strauss_shifted.max(p_fujita_shifted);
        Ok(Self {
            delta: d,
            r1,
            r2,
            gamma,
            c,
            p_strauss_shifted,
            p_fujita_shifted,
            p_blowup_sup,
        })
    }
}

/// δ = (μ−1)² − 4ν². The caller decides whether a negative value is
/// admissible.
pub fn delta(mu: f64, nu2: f64) -> f64 {
    (mu - 1.0) * (mu - 1.0) - 4.0 * nu2
}

/// Roots (r₁, r₂), r₁ ≥ r₂, of r² − (μ−1)r + ν² = 0.
pub fn characteristic_roots(mu: f64, nu2: f64) -> Result<(f64, f64)> {
    let d = delta(mu, nu2);
    if d < 0.0 {
        return Err(Error::NegativeDelta(d));
    }
    let s = d.sqrt();
    Ok((0.5 * (mu - 1.0 + s), 0.5 * (mu - 1.0 - s)))
}

/// Larger root of the generalized-Tricomi Strauss quadratic
///
/// ```text
/// ((n_eff−1)/2 + ℓ/(2(ℓ+1))) p² − ((n_eff+1)/2 − 3ℓ/(2(ℓ+1))) p − 1 = 0.
/// ```
///
/// When the leading coefficient is ≤ 0 (low dimension) no finite critical
/// power exists and the result is +∞. `n_eff` may be fractional.
pub fn strauss_exponent(n_eff: f64, ell: f64) -> ExtReal {
    let lp1 = ell + 1.0;
    let a = 0.5 * (n_eff - 1.0) + ell / (2.0 * lp1);
    let b = -(0.5 * (n_eff + 1.0) - 3.0 * ell / (2.0 * lp1));
    larger_quadratic_root(a, b, -1.0)
}

/// Larger root of the shifted quadratic
///
/// ```text
/// ((n−1)(ℓ+1)/2 + (ℓ+μ)/2) p² − ((n+1)(ℓ+1)/2 + (μ−3ℓ)/2) p − (ℓ+1) = 0,
/// ```
///
/// which is the Strauss exponent after the dimensional shift
/// n ↦ n + μ/(ℓ+1).
pub fn strauss_exponent_shifted(params: &ModelParams) -> ExtReal {
    let lp1 = params.ell + 1.0;
    let nf = params.n as f64;
    let a = 0.5 * (nf - 1.0) * lp1 + 0.5 * (params.ell + params.mu);
    let b = -(0.5 * (nf + 1.0) * lp1 + 0.5 * (params.mu - 3.0 * params.ell));
    larger_quadratic_root(a, b, -lp1)
}

fn larger_quadratic_root(a: f64, b: f64, c: f64) -> ExtReal {
    if a <= 0.0 {
        return ExtReal::Infinite;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return ExtReal::Infinite;
    }
    // b < 0 for every admissible parameter combination, so -b + sqrt does
    // not cancel.
    ExtReal::Finite((-b + disc.sqrt()) / (2.0 * a))
}

/// Fujita exponent p_Fuj(d) = 1 + 2/d.
pub fn fujita_exponent(d: f64) -> Result<f64> {
    if d <= 0.0 {
        return Err(Error::NonpositiveDimension(d));
    }
    Ok(1.0 + 2.0 / d)
}

/// sup of the blow-up range: max of the shifted Strauss exponent and the
/// shifted Fujita exponent p_Fuj((ℓ+1)n + (μ−1−√δ)/2).
pub fn blowup_range_sup(params: &ModelParams) -> Result<ExtReal> {
    let consts = params.constants()?;
    Ok(consts.p_blowup_sup)
}

/// φ_ℓ(t) = t^{ℓ+1}/(ℓ+1), the primitive of the propagation speed t^ℓ that
/// vanishes at t = 0.
pub fn phi_ell(t: f64, ell: f64) -> f64 {
    t.powf(ell + 1.0) / (ell + 1.0)
}

/// Light-cone amplitude A_ℓ(t) = φ_ℓ(t) − φ_ℓ(1) for t ≥ 1.
pub fn amplitude(t: f64, ell: f64) -> Result<f64> {
    if t < 1.0 {
        return Err(Error::Domain(format!(
            "amplitude requires t >= 1, got t = {t}"
        )));
    }
    Ok(phi_ell(t, ell) - phi_ell(1.0, ell))
}

/// Inverse of the amplitude: A_ℓ⁻¹(σ) = ((ℓ+1)σ + 1)^{1/(ℓ+1)} for σ ≥ 0.
pub fn amplitude_inv(sigma: f64, ell: f64) -> Result<f64> {
    if sigma < 0.0 {
        return Err(Error::Domain(format!(
            "amplitude_inv requires sigma >= 0, got {sigma}"
        )));
    }
    Ok(((ell + 1.0) * sigma + 1.0).powf(1.0 / (ell + 1.0)))
}

/// Transformed coefficients under ψ = t^ϑ φ and the resulting discriminant.
///
/// Returns (μ − 2ϑ, ϑ² − (μ−1)ϑ + ν², δ_transformed). The discriminant is an
/// invariant of the substitution: δ_transformed = δ(μ, ν²) identically.
pub fn delta_invariance_check(mu: f64, nu2: f64, theta: f64) -> (f64, f64, f64) {
    let mu_t = mu - 2.0 * theta;
    let nu2_t = theta * theta - (mu - 1.0) * theta + nu2;
    (mu_t, nu2_t, delta(mu_t, nu2_t))
}
