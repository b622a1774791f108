//! Two-sided numerical comparisons shared by the verification routines.

use serde::{Deserialize, Serialize};

/// Evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Inequality { lhs, rhs }
    }

    /// `rhs - lhs`; non-negative when the inequality holds exactly.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// `margin ≥ -tol`. A `NaN` margin never holds.
    pub fn holds(&self, tol: f64) -> bool {
        self.margin() >= -tol
    }
}
