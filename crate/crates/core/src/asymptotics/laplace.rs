//! Leading-order Laplace evaluation of `∫ θ(y) e^{-k φ(y)} dy` for large `k`.

use crate::math::{abs, exp, ln, sqrt, TAU};

use super::AsymptoticsError;

/// A phase function with its first two derivatives.
pub struct Phase<'a> {
    pub value: &'a dyn Fn(f64) -> f64,
    pub d1: &'a dyn Fn(f64) -> f64,
    pub d2: &'a dyn Fn(f64) -> f64,
}

/// `prefactor * exp(-k * phase)`, kept factored so large `k φ` never overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue {
    pub prefactor: f64,
    pub phase: f64,
    pub k: f64,
}

impl LaplaceValue {
    pub fn value(&self) -> f64 {
        self.prefactor * exp(-self.k * self.phase)
    }

    /// `ln |value|`.
    pub fn ln_abs(&self) -> f64 {
        ln(abs(self.prefactor)) - self.k * self.phase
    }
}

/// Interior minimum at `c`: `(2π / (k φ''(c)))^{1/2} θ(c) e^{-k φ(c)}`.
pub fn laplace_interior(phase: &Phase<'_>, theta: &dyn Fn(f64) -> f64, c: f64, k: f64) -> Result<LaplaceValue, AsymptoticsError> {
    let d2 = (phase.d2)(c);
    if !(d2 > 1e-12) {
        return Err(AsymptoticsError::NonPositiveCurvature { at: c, curvature: d2 });
    }
    let d1 = (phase.d1)(c);
    if abs(d1) > 1e-8 * (1.0 + d2) {
        return Err(AsymptoticsError::NotStationary { at: c, slope: d1 });
    }
    Ok(LaplaceValue {
        prefactor: sqrt(TAU / (k * d2)) * theta(c),
        phase: (phase.value)(c),
        k,
    })
}

/// Monotone phase on `[left, ...)`: `θ(left) / (k φ'(left)) e^{-k φ(left)}`.
pub fn laplace_endpoint(phase: &Phase<'_>, theta: &dyn Fn(f64) -> f64, left: f64, k: f64) -> Result<LaplaceValue, AsymptoticsError> {
    let d1 = (phase.d1)(left);
    if !(d1 > 1e-12) {
        return Err(AsymptoticsError::NonIncreasingPhase { at: left, slope: d1 });
    }
    Ok(LaplaceValue {
        prefactor: theta(left) / (k * d1),
        phase: (phase.value)(left),
        k,
    })
}
