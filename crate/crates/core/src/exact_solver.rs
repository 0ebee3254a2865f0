//! Exact viscous Burgers solution through the Cole–Hopf integral
//! `I_{x,a}(k) = ∫ e^{-k φ_{x,a}(y)} dy`, `φ_{x,a}(y) = F(y) + a (x - y)² / 2`.
//!
//! The weight is shifted by `m = min φ` so that `e^{-k(φ - m)} <= 1`. With
//! `⟨·⟩` the average against that weight,
//!
//! ```text
//! u   = -∂x log I = k ⟨f⟩                     = -a k ⟨y - x⟩
//! u_x = k ⟨f'⟩ - k² Var(f)                     = u² - ⟨-a k + a² k² (y - x)²⟩
//! ```
//!
//! The left-hand forms follow by integrating `φ' e^{-kφ}` by parts and do not
//! cancel catastrophically; the right-hand forms are kept as a cross-check.

use alloc::string::String;
use alloc::vec::Vec;

use crate::asymptotics::{phase_critical_points, AsymptoticsError, CriticalKind, CriticalPoint};
use crate::math::{abs, exp, ln, sqrt};
use crate::profiles::Profile;
use crate::quadrature::{integrate, QuadError};

/// Multiples of the local Gaussian width placed as breakpoints around each minimum.
const SPIKE_OFFSETS: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
/// Extra decades of weight discarded beyond the window on top of `ln(1/tol)`.
const TAIL_MARGIN: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative quadrature tolerance.
    pub quad_tolerance: f64,
    /// Largest admissible half-width of the `y` window, in circle lengths.
    pub domain_halfwidth: f64,
    /// Samples per half-period; the full grid has `2 * grid_size` points.
    pub grid_size: usize,
    /// Panel budget of one adaptive integration.
    pub max_panels: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            quad_tolerance: 1e-10,
            domain_halfwidth: 64.0,
            grid_size: 2048,
            max_panels: 4000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.quad_tolerance > 0.0 && self.quad_tolerance <= 1e-4) {
            return Err(SolverError::InvalidConfig(alloc::format!(
                "quad_tolerance {} not in (0, 1e-4]",
                self.quad_tolerance
            )));
        }
        if self.grid_size < 64 || !self.grid_size.is_power_of_two() {
            return Err(SolverError::InvalidConfig(alloc::format!(
                "grid_size {} is not a power of two >= 64",
                self.grid_size
            )));
        }
        if !(self.domain_halfwidth >= 1.0) || !self.domain_halfwidth.is_finite() {
            return Err(SolverError::InvalidConfig(alloc::format!(
                "domain_halfwidth {} must be finite and >= 1",
                self.domain_halfwidth
            )));
        }
        if self.max_panels < 16 {
            return Err(SolverError::InvalidConfig(alloc::format!(
                "max_panels {} is below 16",
                self.max_panels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("need a > 0 and k > 0, got a = {a}, k = {k}")]
    BadParameters { a: f64, k: f64 },
    #[error("quadrature failed at x = {x}, a = {a}, k = {k}: {source}")]
    Quadrature { x: f64, a: f64, k: f64, source: QuadError },
    #[error("integration window half-width {width} exceeds the cap {cap} at a = {a}, k = {k}")]
    WindowTooWide { a: f64, k: f64, width: f64, cap: f64 },
    #[error("phase analysis failed at x = {x}, a = {a}: {source}")]
    Phase { x: f64, a: f64, source: AsymptoticsError },
}

/// `φ_{x,a}` and its `y`-derivatives at one `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub a: f64,
    pub y: f64,
    pub value: f64,
    /// `f(y) + a (y - x)`.
    pub d1: f64,
    /// `f'(y) + a`.
    pub d2: f64,
}

impl PhasePoint {
    pub fn new(p: &Profile, x: f64, a: f64, y: f64) -> Self {
        let (big_f, f, fp) = p.phase_parts(y);
        let d = y - x;
        Self {
            x,
            a,
            y,
            value: big_f + 0.5 * a * d * d,
            d1: f + a * d,
            d2: fp + a,
        }
    }
}

/// Shifted moments of `w = e^{-k(φ - m)}` over the integration window:
/// `[w, (f - f_c) w, (f - f_c)² w, f' w, (y - x) w, (y - x)² w]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMoments {
    pub x: f64,
    pub a: f64,
    pub k: f64,
    /// `min φ`.
    pub m: f64,
    /// `f` at the global minimum, used to centre the `f` moments.
    pub f_c: f64,
    pub moments: [f64; 6],
    pub error: [f64; 6],
    pub evaluations: usize,
}

impl PhaseMoments {
    /// `ln I = -k m + ln ∫ w`.
    pub fn log_i(&self) -> f64 {
        -self.k * self.m + ln(self.moments[0])
    }

    pub fn u(&self) -> f64 {
        self.k * (self.f_c + self.moments[1] / self.moments[0])
    }

    pub fn ux(&self) -> f64 {
        let m0 = self.moments[0];
        let mean = self.moments[1] / m0;
        let var = (self.moments[2] / m0 - mean * mean).max(0.0);
        self.k * self.moments[3] / m0 - self.k * self.k * var
    }

    /// `-a k ⟨y - x⟩`.
    pub fn u_direct(&self) -> f64 {
        -self.a * self.k * self.moments[4] / self.moments[0]
    }

    /// `u² - ∂²x I / I` with `∂²x I / I = ⟨-a k + a² k² (y - x)²⟩`.
    pub fn ux_direct(&self) -> f64 {
        let u = self.u_direct();
        let ak = self.a * self.k;
        u * u - (-ak + ak * ak * self.moments[5] / self.moments[0])
    }
}

/// Half-width of the `y` window around `x` outside of which `k(φ - m) >= ln(1/tol) + 30`.
pub fn window_half_width(p: &Profile, a: f64, k: f64, tol: f64) -> f64 {
    let c = ln(1.0 / tol) + TAIL_MARGIN;
    sqrt(2.0 * (2.0 * p.phase_range() + c / k) / a)
}

fn check_params(a: f64, k: f64) -> Result<(), SolverError> {
    if a > 0.0 && k > 0.0 && a.is_finite() && k.is_finite() {
        Ok(())
    } else {
        Err(SolverError::BadParameters { a, k })
    }
}

/// Integrates the six shifted moments at `(x, a, k)`.
pub fn phase_moments(p: &Profile, x: f64, a: f64, k: f64, cfg: &SolverConfig) -> Result<PhaseMoments, SolverError> {
    check_params(a, k)?;
    let tol = cfg.quad_tolerance;
    let half = window_half_width(p, a, k, tol);
    if half > cfg.domain_halfwidth {
        return Err(SolverError::WindowTooWide {
            a,
            k,
            width: half,
            cap: cfg.domain_halfwidth,
        });
    }
    let (lo, hi) = (x - half, x + half);

    let crit = phase_critical_points(p, x, a).map_err(|source| SolverError::Phase { x, a, source })?;
    let minima: Vec<&CriticalPoint> = crit.iter().filter(|c| c.kind == CriticalKind::Minimum).collect();
    let global = minima
        .iter()
        .copied()
        .min_by(|u, v| u.phase.partial_cmp(&v.phase).unwrap())
        .ok_or(SolverError::Phase {
            x,
            a,
            source: AsymptoticsError::NoMinimum { x, a },
        })?;
    let m = global.phase;
    let f_c = p.f(global.y);

    let mut bps: Vec<f64> = Vec::with_capacity(2 + crit.len() * 11);
    bps.push(lo);
    bps.push(hi);
    for c in &crit {
        bps.push(c.y);
        if c.kind == CriticalKind::Minimum {
            let sigma = if c.curvature > 0.0 {
                (1.0 / sqrt(k * c.curvature)).min(half / 8.0)
            } else {
                half / 8.0
            };
            for o in SPIKE_OFFSETS {
                bps.push(c.y - o * sigma);
                bps.push(c.y + o * sigma);
            }
        }
    }
    bps.retain(|&y| y >= lo && y <= hi);

    let f_scale = p.max_abs_f();
    let fp_scale = p.max_abs_f_prime();
    let integrand = |y: f64| {
        let (big_f, f, fp) = p.phase_parts(y);
        let d = y - x;
        let w = exp(-k * (big_f + 0.5 * a * d * d - m));
        let df = f - f_c;
        [w, df * w, df * df * w, fp * w, d * w, d * d * w]
    };
    let allowed = |t: &[f64; 6]| {
        let m0 = abs(t[0]);
        [
            tol * m0,
            tol * m0 * f_scale,
            tol * (abs(t[2]) + m0 * fp_scale / k),
            tol * m0 * fp_scale,
            tol * m0 * f_scale / a,
            tol * (abs(t[5]) + m0 / (k * a)),
        ]
    };
    let out = integrate(integrand, &bps, allowed, cfg.max_panels).map_err(|source| SolverError::Quadrature {
        x,
        a,
        k,
        source,
    })?;
    Ok(PhaseMoments {
        x,
        a,
        k,
        m,
        f_c,
        moments: out.value,
        error: out.error,
        evaluations: out.evaluations,
    })
}

/// `I_{x,a}(k) = r e^{-k m}` returned as `(m, r)`.
pub fn eval_i(p: &Profile, x: f64, a: f64, k: f64, cfg: &SolverConfig) -> Result<(f64, f64), SolverError> {
    let pm = phase_moments(p, x, a, k, cfg)?;
    Ok((pm.m, pm.moments[0]))
}

pub fn eval_u(p: &Profile, x: f64, a: f64, k: f64, cfg: &SolverConfig) -> Result<f64, SolverError> {
    Ok(phase_moments(p, x, a, k, cfg)?.u())
}

pub fn eval_ux(p: &Profile, x: f64, a: f64, k: f64, cfg: &SolverConfig) -> Result<f64, SolverError> {
    Ok(phase_moments(p, x, a, k, cfg)?.ux())
}

/// `(u, u_x)` at one point.
pub fn eval_fields(p: &Profile, x: f64, a: f64, k: f64, cfg: &SolverConfig) -> Result<(f64, f64), SolverError> {
    let pm = phase_moments(p, x, a, k, cfg)?;
    Ok((pm.u(), pm.ux()))
}

/// Reparametrised time `a = 1 / (2 k t)`.
pub fn a_from_t(k: f64, t: f64) -> f64 {
    1.0 / (2.0 * k * t)
}

/// `t = 1 / (2 k a)`.
pub fn t_from_a(k: f64, a: f64) -> f64 {
    1.0 / (2.0 * k * a)
}

/// Uniform full-period grid `x_j = -1/2 + j / (2 n_half)`, `j = 0 .. 2 n_half - 1`.
pub fn full_grid(n_half: usize) -> Vec<f64> {
    let n = 2 * n_half;
    (0..n).map(|j| -0.5 + j as f64 / n as f64).collect()
}

/// Half-period grid `x_j = j / (2 n_half)`, `j = 0 ..= n_half`, covering `[0, 1/2]`.
pub fn half_grid(n_half: usize) -> Vec<f64> {
    let n = 2 * n_half;
    (0..=n_half).map(|j| j as f64 / n as f64).collect()
}

/// Sampled solution at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSnapshot {
    pub k: f64,
    pub t: f64,
    /// `1 / (2 k t)`; infinite at `t = 0`.
    pub a: f64,
    pub x_grid: Vec<f64>,
    pub u_values: Vec<f64>,
    pub ux_values: Vec<f64>,
    /// `max_j |u(x_j) + u(-x_j)|` over the grid.
    pub oddness_residual: f64,
}

impl StateSnapshot {
    /// Builds a snapshot from fields already sampled on [`full_grid`].
    pub fn from_fields(k: f64, t: f64, a: f64, x_grid: Vec<f64>, u_values: Vec<f64>, ux_values: Vec<f64>) -> Self {
        let n = u_values.len();
        let oddness_residual = (0..n)
            .map(|j| abs(u_values[j] + u_values[(n - j) % n]))
            .fold(0.0, f64::max);
        Self {
            k,
            t,
            a,
            x_grid,
            u_values,
            ux_values,
            oddness_residual,
        }
    }

    /// Uniform grid spacing.
    pub fn dx(&self) -> f64 {
        1.0 / self.x_grid.len() as f64
    }

    /// Initial data `k f`, `k f'` on the grid.
    pub fn initial(p: &Profile, k: f64, n_half: usize) -> Self {
        let xs = full_grid(n_half);
        let u = xs.iter().map(|&x| k * p.f(x)).collect();
        let ux = xs.iter().map(|&x| k * p.f_prime(x)).collect();
        Self::from_fields(k, 0.0, f64::INFINITY, xs, u, ux)
    }
}

/// Snapshot at time `t`; `t = 0` returns the initial data.
pub fn snapshot(p: &Profile, t: f64, k: f64, cfg: &SolverConfig) -> Result<StateSnapshot, SolverError> {
    cfg.validate()?;
    if t == 0.0 {
        return Ok(StateSnapshot::initial(p, k, cfg.grid_size));
    }
    if !(t > 0.0) {
        return Err(SolverError::BadParameters { a: a_from_t(k, t), k });
    }
    let mut s = snapshot_at_a(p, a_from_t(k, t), k, cfg)?;
    s.t = t;
    Ok(s)
}

/// Snapshot at reparametrised time `a`.
pub fn snapshot_at_a(p: &Profile, a: f64, k: f64, cfg: &SolverConfig) -> Result<StateSnapshot, SolverError> {
    cfg.validate()?;
    check_params(a, k)?;
    let xs = full_grid(cfg.grid_size);
    let mut u = Vec::with_capacity(xs.len());
    let mut ux = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (v, d) = eval_fields(p, x, a, k, cfg)?;
        u.push(v);
        ux.push(d);
    }
    Ok(StateSnapshot::from_fields(k, t_from_a(k, a), a, xs, u, ux))
}

/// `(u, u_x)` on [`half_grid`], enough for `K` and `E` of an odd solution.
pub fn half_grid_fields(p: &Profile, a: f64, k: f64, cfg: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    check_params(a, k)?;
    let xs = half_grid(cfg.grid_size);
    let mut u = Vec::with_capacity(xs.len());
    let mut ux = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (v, d) = eval_fields(p, x, a, k, cfg)?;
        u.push(v);
        ux.push(d);
    }
    Ok((u, ux))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::find_roots;
    use crate::math::{PI, TAU};
    use crate::profiles::make_sine_profile;

    fn cfg() -> SolverConfig {
        SolverConfig {
            grid_size: 64,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn origin_has_zero_velocity() {
        let p = make_sine_profile();
        for a in [80.0, 8.0 * PI, 3.0] {
            let pm = phase_moments(&p, 0.0, a, 40.0, &cfg()).unwrap();
            assert!(pm.u().abs() < 1e-9 * 40.0 * TAU);
        }
    }

    #[test]
    fn small_time_recovers_initial_data() {
        let p = make_sine_profile();
        let k = 3.0;
        let a = 1e8;
        for x in [0.05, 0.2, 0.37] {
            let (u, ux) = eval_fields(&p, x, a, k, &cfg()).unwrap();
            assert!((u - k * p.f(x)).abs() < 1e-6 * k * TAU);
            assert!((ux - k * p.f_prime(x)).abs() < 1e-5 * k * TAU * TAU);
        }
    }

    #[test]
    fn stable_and_direct_forms_agree() {
        let p = make_sine_profile();
        for (x, a, k) in [(0.1, 80.0, 10.0), (0.02, 8.0 * PI, 50.0), (0.3, 2.0 * PI * PI, 20.0)] {
            let pm = phase_moments(&p, x, a, k, &cfg()).unwrap();
            let scale = k * TAU;
            assert!((pm.u() - pm.u_direct()).abs() < 1e-7 * scale, "{x} {a} {k}");
            assert!((pm.ux() - pm.ux_direct()).abs() < 1e-6 * scale * scale, "{x} {a} {k}");
        }
    }

    #[test]
    fn integral_is_even_in_x() {
        let p = make_sine_profile();
        for x in [0.07, 0.31, 0.49] {
            let (m1, r1) = eval_i(&p, x, 30.0, 25.0, &cfg()).unwrap();
            let (m2, r2) = eval_i(&p, -x, 30.0, 25.0, &cfg()).unwrap();
            let l1 = -25.0 * m1 + r1.ln();
            let l2 = -25.0 * m2 + r2.ln();
            assert!((l1 - l2).abs() < 1e-9);
        }
    }

    #[test]
    fn single_minimum_matches_laplace_before_pitchfork() {
        // I ≈ sqrt(2π / (k φ'')) e^{-k φ} at the single root, O(1/k) relative
        let p = make_sine_profile();
        let (a, k) = (8.0 * PI * PI, 100.0);
        let x = 0.1;
        let s = find_roots(&p, x, a).unwrap().s_mid.unwrap();
        let pp = PhasePoint::new(&p, x, a, s);
        let lap = sqrt(TAU / (k * pp.d2));
        let (m, r) = eval_i(&p, x, a, k, &cfg()).unwrap();
        assert!((m - pp.value).abs() < 1e-14);
        assert!((r / lap - 1.0).abs() < 2.0 / k);
    }

    #[test]
    fn large_k_stays_finite() {
        let p = make_sine_profile();
        for k in [1e3, 1e4] {
            let pm = phase_moments(&p, 0.2, 8.0 * PI, k, &cfg()).unwrap();
            assert!(pm.moments.iter().all(|v| v.is_finite()));
            assert!(pm.moments[0] > 0.0 && pm.u().is_finite() && pm.ux().is_finite());
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = SolverConfig::default();
        c.grid_size = 100;
        assert!(c.validate().is_err());
        c = SolverConfig::default();
        c.quad_tolerance = 1e-3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn window_cap_is_reported() {
        let p = make_sine_profile();
        let c = SolverConfig {
            domain_halfwidth: 1.0,
            ..cfg()
        };
        assert!(matches!(
            eval_u(&p, 0.1, 1e-3, 1.0, &c),
            Err(SolverError::WindowTooWide { .. })
        ));
    }
}
