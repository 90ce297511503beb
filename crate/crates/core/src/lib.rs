//! Numerical laboratory for the semilinear Euler-Poisson-Darboux-Tricomi
//! (EPDT) equation
//!
//! ```text
//! ∂²ₜu − t^{2ℓ} Δu + μ t⁻¹ ∂ₜu + ν² t⁻² u = |u|^p,   x ∈ ℝⁿ, t > 1,
//! ```
//!
//! a wave equation with polynomial propagation speed `t^ℓ`, scale-invariant
//! damping `μ t⁻¹ ∂ₜ` and mass `ν² t⁻²`. The crate provides every computable
//! object of the blow-up analysis at the critical (shifted Strauss) power:
//!
//! - [`model`] — parameters, spectral constants δ, r₁, r₂, γ and the
//!   Strauss/Fujita critical exponents;
//! - [`special`] — Gauss hypergeometric function ₂F₁ on z ∈ [0, 1);
//! - [`kernel`] — the hypergeometric kernels E, K₀, K₁ of the exact 1D
//!   representation formula;
//! - [`linear1d`] — the 1D linear solver via that representation formula,
//!   cross-checked by a finite-difference oracle;
//! - [`kato`] — the Kato-type ODE comparison lemma: thresholds, simulation,
//!   blow-up detection;
//! - [`radon`] — Radon transform of radial data and the averaging operator
//!   𝒯ₜ used in the n → 1 reduction;
//! - [`semilinear`] — finite-difference solver for the full semilinear
//!   problem, residual checks and lifespan sweeps;
//! - [`iteration`] — the iteration sequences aⱼ, αⱼ, Bⱼ, βⱼ, β̃ⱼ, σⱼ and the
//!   exponential lifespan bound.

// Validators deliberately write `!(x > y)` so that NaN inputs fail the
// check and get rejected; `x <= y` would wave them through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extreal;
pub mod grid;
pub mod iteration;
pub mod kato;
pub mod kernel;
pub mod linear1d;
pub mod model;
pub mod ode;
pub mod quad;
pub mod radon;
pub mod semilinear;
pub mod special;

pub use error::{Error, Result};
pub use extreal::ExtReal;
pub use grid::GridFunction;
pub use model::{ModelParams, SpectralConstants};
