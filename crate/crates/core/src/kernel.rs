//! The hypergeometric kernels E, K₀, K₁ of the exact 1D representation
//! formula, together with the argument function z.
//!
//! For a source point (b, y) inside the backward cone of the observation
//! point (t, x),
//!
//! ```text
//! z = ((φ_ℓ(t) − φ_ℓ(b))² − (y−x)²) / ((φ_ℓ(t) + φ_ℓ(b))² − (y−x)²) ∈ [0, 1),
//!
//! E = c t^{−μ/2 + (1−√δ)/2} b^{μ/2 + (1−√δ)/2}
//!       ((φ_ℓ(t)+φ_ℓ(b))² − (y−x)²)^{−γ} F(γ, γ; 1; z),
//! ```
//!
//! with γ = 1/2 − √δ/(2(ℓ+1)) and c = 2^{−√δ/(1+ℓ)}(1+ℓ)^{−1+√δ/(1+ℓ)}.
//! An Euler transformation of F rewrites E with the parameter family 1−γ
//! and the exponent γ−1; both forms are implemented and must agree. The
//! transformed form is the default whenever γ < 0, since it pairs the
//! convergent hypergeometric family with the bounded exponent near z → 1.
//!
//! K₁ is E at b = 1; K₀ = μE − ∂E/∂b |_{b=1} is evaluated through its
//! explicit curly-bracket form.

use crate::error::{Error, Result};
use crate::model::{phi_ell, ModelParams, SpectralConstants};
use crate::special::{gauss_2f1, HypergeometricQuery};

/// Observation point (t, x) and source point (b, y), with 1 ≤ b ≤ t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub t: f64,
    pub x: f64,
    pub b: f64,
    pub y: f64,
}

impl KernelPoint {
    pub fn new(t: f64, x: f64, b: f64, y: f64) -> Result<Self> {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!("t = {t} must be >= 1")));
        }
        if !(1.0 <= b && b <= t) {
            return Err(Error::Domain(format!("b = {b} must lie in [1, t]")));
        }
        Ok(Self { t, x, b, y })
    }
}

/// Difference and sum of the cone radii, organized to avoid catastrophic
/// cancellation on the cone boundary: a² − b² is computed as (a−b)(a+b).
struct ConeGeometry {
    /// φ_ℓ(t) − φ_ℓ(b) − |y−x| (nonnegative inside the cone)
    slack: f64,
    /// numerator (φ_ℓ(t)−φ_ℓ(b))² − (y−x)²
    num: f64,
    /// denominator (φ_ℓ(t)+φ_ℓ(b))² − (y−x)²
    den: f64,
    phi_t: f64,
    phi_b: f64,
}

fn cone_geometry(pt: &KernelPoint, ell: f64) -> Result<ConeGeometry> {
    let phi_t = phi_ell(pt.t, ell);
    let phi_b = phi_ell(pt.b, ell);
    let dy = (pt.y - pt.x).abs();
    let slack = phi_t - phi_b - dy;
    if slack < 0.0 {
        return Err(Error::OutsideCone(format!(
            "|y - x| = {dy} exceeds phi(t) - phi(b) = {}",
            phi_t - phi_b
        )));
    }
    let num = slack * (phi_t - phi_b + dy);
    let den = (phi_t + phi_b - dy) * (phi_t + phi_b + dy);
    Ok(ConeGeometry {
        slack,
        num,
        den,
        phi_t,
        phi_b,
    })
}

/// The hypergeometric argument z(t, x; b, y; ℓ) ∈ [0, 1).
pub fn z_argument(pt: &KernelPoint, ell: f64) -> Result<f64> {
    let geo = cone_geometry(pt, ell)?;
    if geo.slack == 0.0 {
        return Ok(0.0);
    }
    Ok(geo.num / geo.den)
}

/// E in its original form (parameter family γ, exponent −γ).
pub fn kernel_e_original(pt: &KernelPoint, params: &ModelParams) -> Result<f64> {
    let sc = params.constants()?;
    let geo = cone_geometry(pt, params.ell)?;
    let z = geo.num / geo.den;
    let sqrt_d = sc.delta.sqrt();
    let f = gauss_2f1(&HypergeometricQuery::new(sc.gamma, sc.gamma, 1.0, z)?)?;
    Ok(sc.c
        * pt.t.powf(-0.5 * params.mu + 0.5 * (1.0 - sqrt_d))
        * pt.b.powf(0.5 * params.mu + 0.5 * (1.0 - sqrt_d))
        * geo.den.powf(-sc.gamma)
        * f)
}

/// E in its Euler-transformed form (parameter family 1−γ, exponent γ−1,
/// extra prefactor (2/(ℓ+1))^{2(1−2γ)} and raised t, b powers).
pub fn kernel_e_transformed(pt: &KernelPoint, params: &ModelParams) -> Result<f64> {
    let sc = params.constants()?;
    let geo = cone_geometry(pt, params.ell)?;
    let z = geo.num / geo.den;
    let sqrt_d = sc.delta.sqrt();
    let one_m_gamma = 1.0 - sc.gamma;
    let f = gauss_2f1(&HypergeometricQuery::new(one_m_gamma, one_m_gamma, 1.0, z)?)?;
    let prefactor = (2.0 / (params.ell + 1.0)).powf(2.0 * (1.0 - 2.0 * sc.gamma));
    Ok(prefactor
        * sc.c
        * pt.t.powf(-0.5 * params.mu + 0.5 * (1.0 + sqrt_d))
        * pt.b.powf(0.5 * params.mu + 0.5 * (1.0 + sqrt_d))
        * geo.den.powf(sc.gamma - 1.0)
        * f)
}

/// Kernel E, strictly positive inside the cone. Dispatches to the
/// transformed form for γ < 0 and the original form otherwise.
pub fn kernel_e(pt: &KernelPoint, params: &ModelParams) -> Result<f64> {
    let gamma = 0.5 - params.delta().max(0.0).sqrt() / (2.0 * (params.ell + 1.0));
    if gamma < 0.0 {
        kernel_e_transformed(pt, params)
    } else {
        kernel_e_original(pt, params)
    }
}

/// K₁(t, x; y) = E(t, x; 1, y): the kernel weighting u₁ in the
/// representation formula. Nonnegative on |y − x| ≤ A_ℓ(t).
pub fn kernel_k1(t: f64, x: f64, y: f64, params: &ModelParams) -> Result<f64> {
    let pt = KernelPoint::new(t, x, 1.0, y)?;
    kernel_e(&pt, params)
}

/// ∂z/∂b at b = 1:
///
/// ```text
/// ∂z/∂b = −4 b^ℓ φ_ℓ(t) [φ_ℓ(t)² − φ_ℓ(b)² − (y−x)²] / D²,
/// D = (φ_ℓ(t)+φ_ℓ(b))² − (y−x)²,
/// ```
///
/// nonpositive on the integration domain since φ_ℓ(t)² − φ_ℓ(b)² − (y−x)²
/// ≥ 2φ_ℓ(b)(φ_ℓ(t) − φ_ℓ(b)) ≥ 0 there.
pub fn dz_db_at_1(t: f64, x: f64, y: f64, ell: f64) -> Result<f64> {
    let pt = KernelPoint::new(t, x, 1.0, y)?;
    let geo = cone_geometry(&pt, ell)?;
    let dy2 = (y - x) * (y - x);
    let bracket = geo.phi_t * geo.phi_t - geo.phi_b * geo.phi_b - dy2;
    // b = 1, so b^l = 1.
    Ok(-4.0 * geo.phi_t * bracket / (geo.den * geo.den))
}

/// K₀(t, x; y) = μE − ∂E/∂b |_{b=1}, through the explicit form
///
/// ```text
/// K₀ = (2/(ℓ+1))^{2(1−2γ)} c t^{−μ/2+(1+√δ)/2} D^{γ−1}
///      { [ (μ−1−√δ)/2 + 2(1−γ)(φ_ℓ(t)+φ_ℓ(1))/D ] F(1−γ, 1−γ; 1; z)
///        − (1−γ)² ∂_b z  F(2−γ, 2−γ; 2; z) }.
/// ```
///
/// Nonnegative for μ ≥ 1; for μ ∈ [0, 1) only the first bracket term is
/// negative and positivity of the data combination u₁ + ((μ−1−√δ)/2)u₀
/// restores a nonnegative integrand.
pub fn kernel_k0(t: f64, x: f64, y: f64, params: &ModelParams) -> Result<f64> {
    let sc = params.constants()?;
    let pt = KernelPoint::new(t, x, 1.0, y)?;
    let geo = cone_geometry(&pt, params.ell)?;
    let z = geo.num / geo.den;
    let sqrt_d = sc.delta.sqrt();
    let one_m_gamma = 1.0 - sc.gamma;
    let f1 = gauss_2f1(&HypergeometricQuery::new(one_m_gamma, one_m_gamma, 1.0, z)?)?;
    let f2 = gauss_2f1(&HypergeometricQuery::new(
        2.0 - sc.gamma,
        2.0 - sc.gamma,
        2.0,
        z,
    )?)?;
    let dz = dz_db_at_1(t, x, y, params.ell)?;
    let prefactor = (2.0 / (params.ell + 1.0)).powf(2.0 * (1.0 - 2.0 * sc.gamma))
        * sc.c
        * t.powf(-0.5 * params.mu + 0.5 * (1.0 + sqrt_d));
    let bracket = (0.5 * (params.mu - 1.0 - sqrt_d)
        + 2.0 * one_m_gamma * (geo.phi_t + geo.phi_b) / geo.den)
        * f1
        - one_m_gamma * one_m_gamma * dz * f2;
    Ok(prefactor * geo.den.powf(sc.gamma - 1.0) * bracket)
}

/// Spectral constants helper shared by the tests.
pub fn constants_of(ell: f64, mu: f64, nu2: f64) -> Result<SpectralConstants> {
    ModelParams::new(ell, mu, nu2, 1, 1.0)?.constants()
}
