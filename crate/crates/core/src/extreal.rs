//! Extended reals: finite value or +∞.
//!
//! Critical exponents degenerate to +∞ in low dimensions (the Strauss
//! quadratic loses its leading coefficient). A tagged value keeps the
//! comparisons in the blow-up range exact instead of threading sentinel
//! floats around.

use std::fmt;

/// A finite real or +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::Infinite => None,
        }
    }

    /// The finite value, or panic. For tests and call sites that already
    /// checked finiteness.
    pub fn unwrap_finite(&self) -> f64 {
        self.finite().expect("expected a finite value")
    }

    /// Max of two extended reals (+∞ absorbs).
    pub fn max(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a.max(b)),
            _ => ExtReal::Infinite,
        }
    }

    /// Collapse to f64, mapping +∞ to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => *v,
            ExtReal::Infinite => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            ExtReal::Infinite
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => write!(f, "+inf"),
        }
    }
}
