//! Leading-order energy and enstrophy and the closed-form constants of the
//! enstrophy maximum.

use alloc::vec::Vec;

use crate::math::abs;
use crate::profiles::Profile;
use crate::quadrature::integrate_scalar;

use super::roots::find_roots;
use super::AsymptoticsError;

const REL_TOL: f64 = 1e-13;

/// Leading-order constants of the enstrophy maximum at amplitude `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predictions {
    pub k: f64,
    /// `T* = x* / (2 k |f(x*)|)`.
    pub t_star: f64,
    /// `(1/2) k³ |f(x*)|³`.
    pub e_at_max_leading: f64,
    /// `k² (∫_0^{x*} f² - x* f(x*)² / 3)`.
    pub k_drop_leading: f64,
    pub k_at_max_leading: f64,
    /// `K(k f) = k² ∫_0^{1/2} f²`.
    pub k_initial_leading: f64,
    /// `(2/3) k³ |f(x*)|³`, the integral of the squared two-spike derivative.
    pub e_at_max_shock_integral: f64,
    pub t0: f64,
}

/// `s+_{0,a}` for `a` below the pitchfork, `0` otherwise.
fn s_plus_at_origin(p: &Profile, a: f64) -> Result<f64, AsymptoticsError> {
    let r = find_roots(p, 0.0, a)?;
    Ok(r.s_plus.unwrap_or(0.0))
}

fn f_squared_integral(p: &Profile, lo: f64, hi: f64) -> Result<f64, AsymptoticsError> {
    Ok(integrate_scalar(|y| {
        let f = p.f(y);
        f * f
    }, lo, hi, REL_TOL, 1e-300)?)
}

/// Leading-order energy `K(u(t))`, `t = 1/(2ka)`.
///
/// At or above the pitchfork this is `K(u0)`. Below it the map `x -> s+_{x,a}`
/// is inverted on `[s+_{0,a}, 1/2]` with Jacobian `1 + f'(y)/a`.
pub fn leading_energy(p: &Profile, a: f64, k: f64) -> Result<f64, AsymptoticsError> {
    if !(a > 0.0) {
        return Err(AsymptoticsError::NonPositiveA { a });
    }
    let s = s_plus_at_origin(p, a)?;
    let v = integrate_scalar(
        |y| {
            let f = p.f(y);
            f * f * (1.0 + p.f_prime(y) / a)
        },
        s,
        0.5,
        REL_TOL,
        1e-300,
    )?;
    Ok(k * k * v)
}

/// `k² (∫_{s+}^{1/2} f² + |f(s+)|³ / (3a))` with `s+ = s+_{0,a}`.
pub fn leading_energy_closed_form(p: &Profile, a: f64, k: f64) -> Result<f64, AsymptoticsError> {
    if !(a > 0.0) {
        return Err(AsymptoticsError::NonPositiveA { a });
    }
    let s = s_plus_at_origin(p, a)?;
    let fs = abs(p.f(s));
    Ok(k * k * (f_squared_integral(p, s, 0.5)? + fs * fs * fs / (3.0 * a)))
}

/// Leading-order enstrophy.
///
/// For `a > |f'(0)|`: `k² ∫_0^{1/2} a f'² / (a + f')`. At and below the
/// pitchfork: `(1/2) k³ |f(s+_{0,a})|³`, which vanishes at `a = |f'(0)|`.
pub fn leading_enstrophy(p: &Profile, a: f64, k: f64) -> Result<f64, AsymptoticsError> {
    if !(a > 0.0) {
        return Err(AsymptoticsError::NonPositiveA { a });
    }
    let a_pf = -p.f_prime_at_zero();
    if a > a_pf {
        let v = integrate_scalar(
            |y| {
                let d = p.f_prime(y);
                a * d * d / (a + d)
            },
            0.0,
            0.5,
            REL_TOL,
            1e-300,
        )?;
        return Ok(k * k * v);
    }
    let fs = abs(p.f(s_plus_at_origin(p, a)?));
    Ok(0.5 * k * k * k * fs * fs * fs)
}

/// `(2/3) k³ |f(s+_{0,a})|³`: the integral of the squared two-spike derivative
/// across the shock, `0` at and above the pitchfork.
pub fn shock_enstrophy(p: &Profile, a: f64, k: f64) -> Result<f64, AsymptoticsError> {
    if !(a > 0.0) {
        return Err(AsymptoticsError::NonPositiveA { a });
    }
    let fs = abs(p.f(s_plus_at_origin(p, a)?));
    Ok(2.0 / 3.0 * k * k * k * fs * fs * fs)
}

pub fn predict(p: &Profile, k: f64) -> Result<Predictions, AsymptoticsError> {
    let xs = p.x_star();
    let fs = p.max_abs_f();
    let k2 = k * k;
    let k3 = k2 * k;
    let k_initial = k2 * f_squared_integral(p, 0.0, 0.5)?;
    let drop = k2 * (f_squared_integral(p, 0.0, xs)? - xs * fs * fs / 3.0);
    Ok(Predictions {
        k,
        t_star: xs / (2.0 * k * fs),
        e_at_max_leading: 0.5 * k3 * fs * fs * fs,
        k_drop_leading: drop,
        k_at_max_leading: k_initial - drop,
        k_initial_leading: k_initial,
        e_at_max_shock_integral: 2.0 / 3.0 * k3 * fs * fs * fs,
        t0: 1.0 / (2.0 * k * -p.f_prime_at_zero()),
    })
}

/// Step of the centred difference used for `G'`.
pub const FD_STEP: f64 = 1e-5;
/// Admissible `|G' - (2/3) f H|` relative to `max(1, |G'|)`.
pub const FD_TOLERANCE: f64 = 1e-6;

/// Samples of `G(x) = ∫_0^x f² - x f(x)²/3` and `H(x) = f(x) - x f'(x)` on `[0, x*]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RequiredBound {
    pub xs: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    /// Largest scaled residual of `G' = (2/3) f H` over the interior samples.
    pub fd_residual: f64,
    pub origin_zero: bool,
    pub g_increasing: bool,
    pub h_decreasing: bool,
    pub g_positive: bool,
    pub h_negative: bool,
}

impl RequiredBound {
    pub fn holds(&self) -> bool {
        self.origin_zero
            && self.g_increasing
            && self.h_decreasing
            && self.g_positive
            && self.h_negative
            && self.fd_residual <= FD_TOLERANCE
    }
}

/// Samples `G`, `H` at `points + 1` equispaced nodes of `[0, x*]` and checks
/// their signs, monotonicity and the identity `G' = (2/3) f H`.
pub fn check_required_bound(p: &Profile, points: usize) -> Result<RequiredBound, AsymptoticsError> {
    let points = points.max(2);
    let x_star = p.x_star();
    let h_of = |x: f64| p.f(x) - x * p.f_prime(x);
    let tail = |x: f64| {
        let f = p.f(x);
        x * f * f / 3.0
    };

    let mut xs = Vec::with_capacity(points + 1);
    let mut g = Vec::with_capacity(points + 1);
    let mut h = Vec::with_capacity(points + 1);
    let mut acc = 0.0;
    let mut prev = 0.0;
    for i in 0..=points {
        let x = x_star * i as f64 / points as f64;
        if i > 0 {
            acc += f_squared_integral(p, prev, x)?;
        }
        prev = x;
        xs.push(x);
        g.push(acc - tail(x));
        h.push(h_of(x));
    }

    let mut fd_residual: f64 = 0.0;
    for &x in xs.iter().skip(1).take(points - 1) {
        let span = f_squared_integral(p, x - FD_STEP, x + FD_STEP)?;
        let dg = (span - tail(x + FD_STEP) + tail(x - FD_STEP)) / (2.0 * FD_STEP);
        let exact = 2.0 / 3.0 * p.f(x) * h_of(x);
        fd_residual = fd_residual.max(abs(dg - exact) / abs(exact).max(1.0));
    }

    let origin_zero = abs(g[0]) == 0.0 && abs(h[0]) == 0.0;
    let g_increasing = g.windows(2).all(|w| w[1] >= w[0]);
    let h_decreasing = h.windows(2).all(|w| w[1] <= w[0]);
    let g_positive = g.iter().skip(1).all(|&v| v > 0.0);
    let h_negative = h.iter().skip(1).all(|&v| v < 0.0);
    Ok(RequiredBound {
        xs,
        g,
        h,
        fd_residual,
        origin_zero,
        g_increasing,
        h_decreasing,
        g_positive,
        h_negative,
    })
}
