//! Energy `K = ½∫u²`, enstrophy `E = ½∫u_x²`, rate `R = -∫(u_xx² + u_x³)` and
//! the inequalities relating them.
//!
//! All integrals use the periodic trapezoid rule, which is spectrally accurate
//! for smooth periodic samples. `u_xx` must be supplied by the caller.

use crate::math::{cbrt, powf, PI};

/// Diagnostics of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub energy: f64,
    pub enstrophy: f64,
    /// Present when `u_xx` was supplied.
    pub rate: Option<f64>,
    /// `(3/2) E^{5/3} - R`.
    pub bound_r_residual: Option<f64>,
    /// `E / (4π²) - K`.
    pub poincare_residual: f64,
}

impl Diagnostics {
    /// Builds diagnostics from samples on a uniform periodic grid of spacing `dx`.
    pub fn from_fields(dx: f64, u: &[f64], ux: &[f64], uxx: Option<&[f64]>) -> Self {
        let energy = 0.5 * dx * u.iter().map(|v| v * v).sum::<f64>();
        let enstrophy = 0.5 * dx * ux.iter().map(|v| v * v).sum::<f64>();
        let rate = uxx.map(|uxx| {
            -dx * uxx
                .iter()
                .zip(ux)
                .map(|(&d2, &d1)| d2 * d2 + d1 * d1 * d1)
                .sum::<f64>()
        });
        Self::assemble(energy, enstrophy, rate)
    }

    pub fn assemble(energy: f64, enstrophy: f64, rate: Option<f64>) -> Self {
        Self {
            energy,
            enstrophy,
            rate,
            bound_r_residual: rate.map(|r| rate_bound(enstrophy) - r),
            poincare_residual: enstrophy / (4.0 * PI * PI) - energy,
        }
    }

    /// `R <= (3/2) E^{5/3}` up to [`inequality_slack`].
    pub fn rate_bound_holds(&self) -> Option<bool> {
        self.bound_r_residual.map(|r| r >= -inequality_slack(self.enstrophy))
    }

    pub fn poincare_holds(&self) -> bool {
        self.poincare_residual >= -inequality_slack(self.enstrophy)
    }
}

/// `(3/2) E^{5/3}`.
pub fn rate_bound(enstrophy: f64) -> f64 {
    1.5 * powf(enstrophy, 5.0 / 3.0)
}

/// Absolute slack `1e-8 max(1, E^{5/3})` for inequality checks.
pub fn inequality_slack(enstrophy: f64) -> f64 {
    1e-8 * powf(enstrophy, 5.0 / 3.0).max(1.0)
}

/// `(E0^{1/3} + E0 / (16π²))³`, the finite-time upper bound on enstrophy.
pub fn integral_bound_rhs(e0: f64) -> f64 {
    let s = cbrt(e0) + e0 / (16.0 * PI * PI);
    s * s * s
}

/// `(K(0) - K(T)) / 4 - (E(T)^{1/3} - E(0)^{1/3})`; nonnegative along true trajectories.
pub fn nonlocal_residual(k0: f64, e0: f64, kt: f64, et: f64) -> f64 {
    0.25 * (k0 - kt) - (cbrt(et) - cbrt(e0))
}

/// `(K, E)` of an odd solution from samples of `u`, `u_x` on `[0, 1/2]`
/// (`n + 1` equispaced points including both ends).
pub fn half_grid_energy_enstrophy(u: &[f64], ux: &[f64]) -> (f64, f64) {
    let n = u.len() - 1;
    let dx = 0.5 / n as f64;
    let trap = |v: &[f64]| {
        let inner: f64 = v[1..n].iter().map(|x| x * x).sum();
        dx * (inner + 0.5 * (v[0] * v[0] + v[n] * v[n]))
    };
    // both integrands are even, so the half-period sum is half of the full one
    (trap(u), trap(ux))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin, TAU};
    use alloc::vec::Vec;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| -0.5 + j as f64 / n as f64).collect()
    }

    #[test]
    fn zero_state() {
        let z = [0.0; 32];
        let d = Diagnostics::from_fields(1.0 / 32.0, &z, &z, Some(&z));
        assert_eq!((d.energy, d.enstrophy, d.rate), (0.0, 0.0, Some(0.0)));
    }

    #[test]
    fn single_mode() {
        let xs = grid(64);
        let u: Vec<f64> = xs.iter().map(|&x| sin(TAU * x)).collect();
        let ux: Vec<f64> = xs.iter().map(|&x| TAU * cos(TAU * x)).collect();
        let uxx: Vec<f64> = xs.iter().map(|&x| -TAU * TAU * sin(TAU * x)).collect();
        let d = Diagnostics::from_fields(1.0 / 64.0, &u, &ux, Some(&uxx));
        assert!((d.energy - 0.25).abs() < 1e-14);
        assert!((d.enstrophy - PI * PI).abs() < 1e-12);
        assert!((d.rate.unwrap() + 8.0 * PI.powi(4)).abs() < 1e-9);
        assert!(d.poincare_residual.abs() < 1e-13);
    }

    #[test]
    fn half_grid_matches_full_grid() {
        let n = 128;
        let xs = grid(2 * n);
        let f = |x: f64| -TAU * sin(TAU * x) + 0.3 * sin(2.0 * TAU * x);
        let fp = |x: f64| -TAU * TAU * cos(TAU * x) + 0.6 * TAU * cos(2.0 * TAU * x);
        let u: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let ux: Vec<f64> = xs.iter().map(|&x| fp(x)).collect();
        let full = Diagnostics::from_fields(0.5 / n as f64, &u, &ux, None);
        let hx: Vec<f64> = (0..=n).map(|j| 0.5 * j as f64 / n as f64).collect();
        let hu: Vec<f64> = hx.iter().map(|&x| f(x)).collect();
        let hux: Vec<f64> = hx.iter().map(|&x| fp(x)).collect();
        let (k, e) = half_grid_energy_enstrophy(&hu, &hux);
        assert!((k - full.energy).abs() < 1e-12 * k);
        assert!((e - full.enstrophy).abs() < 1e-12 * e);
    }

    #[test]
    fn bound_rhs_properties() {
        let mut prev = 0.0;
        for e in [1e-9, 1e-3, 1.0, 1e3, 1e6] {
            let r = integral_bound_rhs(e);
            assert!(r > prev && r >= e);
            prev = r;
        }
        assert!((integral_bound_rhs(1e-12) / 1e-12 - 1.0).abs() < 1e-7);
    }
}
