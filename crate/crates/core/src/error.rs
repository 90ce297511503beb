//! Shared error type for the whole laboratory.

/// Everything that can go wrong while evaluating kernels, quadratures or
/// solvers. Callers that need to distinguish validation failures from
/// numerical ones can match on the variants.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// δ = (μ−1)² − 4ν² came out negative where the admissible regime
    /// requires δ ≥ 0.
    #[error("negative delta: (mu-1)^2 - 4*nu2 = {0}")]
    NegativeDelta(f64),

    /// Fujita exponent queried with a nonpositive effective dimension.
    #[error("nonpositive dimension: {0}")]
    NonpositiveDimension(f64),

    /// Generic domain violation (t < 1, σ < 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Hypergeometric series failed to reach the requested tolerance.
    #[error("hypergeometric series did not converge within {terms} terms")]
    Nonconvergence { terms: usize },

    /// ₂F₁ parameter c must not be a nonpositive integer.
    #[error("invalid hypergeometric parameter c = {0} (nonpositive integer)")]
    InvalidC(f64),

    /// z too close to the z = 1 boundary of convergence.
    #[error("hypergeometric argument z = {0} too close to 1")]
    NearBoundary(f64),

    /// Kernel evaluation point outside the backward light cone.
    #[error("point outside the light cone: {0}")]
    OutsideCone(String),

    /// Adaptive quadrature could not meet its tolerance.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// Requested time step violates the CFL stability bound.
    #[error("CFL violation: {0}")]
    CflViolation(String),

    /// The light cone of the data reached the finite-difference boundary.
    #[error("computational domain too small: {0}")]
    DomainTooSmall(String),

    /// Kato problem does not satisfy the critical balance a(p−1) = q−2.
    #[error("critical condition a(p-1) = q-2 violated: {0}")]
    InvalidCriticalCondition(String),

    /// G′(1) + r₁G(1) vanished, so the comparison thresholds are undefined.
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    /// Solver state became NaN or infinite.
    #[error("nonfinite state at t = {0}")]
    NonfiniteState(f64),

    /// Radon transform of radial data needs n ≥ 2.
    #[error("dimension too small for the radial Radon transform: n = {0}")]
    DimensionTooSmall(usize),

    /// Averaging operator queried at or beyond its upper integration limit.
    #[error("degenerate upper limit: tau = {tau} >= A_l(t) + R = {limit}")]
    DegenerateUpperLimit { tau: f64, limit: f64 },

    /// Parameter block failed validation before any computation started.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
