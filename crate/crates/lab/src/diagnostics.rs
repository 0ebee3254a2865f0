//! Diagnostics of a sampled state with `u_xx` from spectral differentiation.

use enstrophy_core::diagnostics::Diagnostics;
use enstrophy_core::exact_solver::StateSnapshot;

use crate::spectral::Spectral;

/// Spectral tail of `u` above which a state is reported as under-resolved.
pub const RESOLUTION_TAIL: f64 = 1e-6;

/// Diagnostics plus the resolution check they were computed under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Computed {
    pub diagnostics: Diagnostics,
    /// Fraction of `Σ |û_m|²` in `|m| > n/4`.
    pub tail_fraction: f64,
    pub under_resolved: bool,
}

/// `K`, `E` by the periodic trapezoid rule; `R` when `needs_uxx` is set.
pub fn compute(snapshot: &StateSnapshot, needs_uxx: bool) -> Computed {
    let n = snapshot.u_values.len();
    let spectral = Spectral::new(n);
    let tail_fraction = spectral.tail_fraction(&snapshot.u_values);
    let uxx = needs_uxx.then(|| spectral.derivative(&snapshot.u_values, 2));
    let diagnostics = Diagnostics::from_fields(snapshot.dx(), &snapshot.u_values, &snapshot.ux_values, uxx.as_deref());
    Computed {
        diagnostics,
        tail_fraction,
        under_resolved: tail_fraction > RESOLUTION_TAIL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use enstrophy_core::exact_solver::StateSnapshot;
    use enstrophy_core::profiles::make_sine_profile;
    use std::f64::consts::PI;

    #[test]
    fn sine_initial_data_saturates_poincare() {
        let p = make_sine_profile();
        let k = 10.0;
        let s = StateSnapshot::initial(&p, k, 64);
        let c = compute(&s, true);
        let d = c.diagnostics;
        assert!((d.energy - PI * PI * k * k).abs() < 1e-9 * d.energy);
        assert!((d.energy - 986.96).abs() < 0.01);
        assert!((d.enstrophy - 4.0 * PI.powi(4) * k * k).abs() < 1e-9 * d.enstrophy);
        assert!((d.enstrophy - 38963.64).abs() < 0.01);
        assert!(d.poincare_residual.abs() < 1e-9 * d.energy);
        // R = -∫ u_xx² for a single mode: -(2π)^4 k² (2π)² / 2
        let r = -(2.0 * PI).powi(6) * k * k / 2.0;
        assert!((d.rate.unwrap() - r).abs() < 1e-9 * r.abs());
        assert!(!c.under_resolved);
    }
}
