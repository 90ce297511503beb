//! Adaptive embedded Runge-Kutta integration for two-state systems.
//!
//! Dormand-Prince 5(4) with standard PI-free step control. Enough for the
//! comparison-lemma ODEs, whose state is (G, G′).

/// Right-hand side of y′ = f(t, y) for y ∈ ℝ².
pub type Rhs2<'a> = &'a dyn Fn(f64, [f64; 2]) -> [f64; 2];

/// Outcome of one adaptive step attempt.
pub struct StepResult {
    pub y: [f64; 2],
    pub err_ratio: f64,
}

// Dormand-Prince 5(4) tableau (rational entries, written exactly).
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Embedded 4th-order weights.
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

fn axpy2(y: [f64; 2], h: f64, terms: &[(f64, [f64; 2])]) -> [f64; 2] {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One Dormand-Prince step of size h from (t, y). Returns the 5th-order
/// solution and the ratio (error estimate)/(tolerance); accept if ≤ 1.
pub fn dopri5_step(
    f: Rhs2,
    t: f64,
    y: [f64; 2],
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> StepResult {
    let k1 = f(t, y);
    let k2 = f(t + C2 * h, axpy2(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, axpy2(y, h, &[(A31, k1), (A32, k2)]));
    let k4 = f(t + C4 * h, axpy2(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = f(
        t + C5 * h,
        axpy2(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
    );
    let k6 = f(
        t + h,
        axpy2(
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        ),
    );
    let y5 = axpy2(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = f(t + h, y5);
    let y4 = axpy2(
        y,
        h,
        &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
    );
    let mut err_ratio = 0.0f64;
    for i in 0..2 {
        let scale = abs_tol + rel_tol * y[i].abs().max(y5[i].abs());
        let e = (y5[i] - y4[i]).abs() / scale;
        err_ratio = err_ratio.max(e);
    }
    StepResult { y: y5, err_ratio }
}

/// Step-size update factor from the error ratio (order-5 controller with
/// the usual safety factor and clamps).
pub fn step_factor(err_ratio: f64) -> f64 {
    if err_ratio <= 0.0 {
        return 5.0;
    }
    (0.9 * err_ratio.powf(-0.2)).clamp(0.2, 5.0)
}
