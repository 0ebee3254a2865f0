//! Critical points of the phase `φ_{x,a}(y) = F(y) + a (x - y)^2 / 2`.
//!
//! Critical points solve `g(s) = f(s) + a (s - x) = 0` with `g' = f' + a`.
//! For an admissible profile `f'` is even, increasing on `[0, 1/2]` and has
//! its minimum `f'(0) = -|f'(0)|` at the origin, so `g' < 0` exactly on the
//! intervals `(n - c, n + c)` where `f'(c) = -a`. On every other piece `g` is
//! monotone, which gives exact brackets for all roots.

use alloc::vec::Vec;

use crate::math::{abs, ceil, floor, sqrt};
use crate::profiles::Profile;
use crate::quadrature::integrate_scalar;
use crate::rootfind::{bisect, bisect_newton};

use super::AsymptoticsError;

const ROOT_XTOL: f64 = 1e-15;

/// Whether a critical point is a local minimum or maximum of the phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    Minimum,
    Maximum,
}

/// A critical point `y` of `φ_{x,a}` with the phase value and curvature there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub y: f64,
    pub kind: CriticalKind,
    pub phase: f64,
    pub curvature: f64,
}

/// Root structure of `f(s) + a (s - x) = 0` on `(-1/2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `a >= |f'(0)|`: one root, the global minimum.
    Single,
    /// `a < |f'(0)|`, `0 <= x <= x0`: minima `s-`, `s+` around a maximum `s`.
    Triple,
    /// `a < |f'(0)|`, `x > x0`: the left minimum has annihilated with the maximum.
    PostFold,
}

/// Roots of `f(s) + a(s - x) = 0` for `x` in `[0, 1/2]`.
///
/// In the single regime the unique root `s_{x,a}` is stored in `s_mid`.
/// `varphi` and `chi` are only defined when both minima exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet {
    pub x: f64,
    pub a: f64,
    pub regime: Regime,
    pub s_minus: Option<f64>,
    pub s_mid: Option<f64>,
    pub s_plus: Option<f64>,
    /// `φ(s-) - φ(s+)`.
    pub varphi: Option<f64>,
    /// `((f'(s+) + a) / (f'(s-) + a))^{1/2}`.
    pub chi: Option<f64>,
    /// Set when `a == |f'(0)|` exactly (the pitchfork instant).
    pub degenerate: bool,
}

impl RootSet {
    /// The root carrying the global minimum of the phase for `x >= 0`.
    pub fn dominant(&self) -> f64 {
        match self.regime {
            Regime::Single => self.s_mid.unwrap_or(self.x),
            _ => self.s_plus.unwrap_or(self.x),
        }
    }
}

/// Location of the saddle-node fold for `0 < a < |f'(0)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fold {
    /// `s_c` in `(-1/2, 0)` with `f'(s_c) = -a`.
    pub s_c: f64,
    /// `x0 = s_c + f(s_c) / a`.
    pub x0: f64,
}

#[inline]
fn g(p: &Profile, x: f64, a: f64, s: f64) -> f64 {
    p.f(s) + a * (s - x)
}

/// Evaluates `φ_{x,a}(y)`.
#[inline]
pub fn phase_value(p: &Profile, x: f64, a: f64, y: f64) -> f64 {
    let d = x - y;
    p.F(y) + 0.5 * a * d * d
}

/// Half-width `c` in `(0, x_star)` of the interval where `f' < -a`.
fn decreasing_half_width(p: &Profile, a: f64) -> Result<f64, AsymptoticsError> {
    let c = bisect_newton(
        |s| p.f_prime(s) + a,
        |s| p.f_double_prime(s),
        0.0,
        p.x_star(),
        ROOT_XTOL,
        3,
    )?;
    Ok(c)
}

/// Solves `f'(s_c) = -a` on `(-x_star, 0)` and returns the fold point `x0`.
pub fn fold_location(p: &Profile, a: f64) -> Result<Fold, AsymptoticsError> {
    let a_pf = -p.f_prime_at_zero();
    if !(a > 0.0 && a < a_pf) {
        return Err(AsymptoticsError::OutsidePitchforkRange { a, a_pitchfork: a_pf });
    }
    let c = decreasing_half_width(p, a)?;
    let s_c = -c;
    Ok(Fold { s_c, x0: s_c + p.f(s_c) / a })
}

/// Independent fold detector: `x0 = max_{s in [-1/2, 0]} (f(s) + a s) / a`,
/// the largest `x` for which `g` still reaches zero on the left half. The
/// maximum is located by golden-section search without using `f'`.
pub fn fold_by_coalescence(p: &Profile, a: f64) -> Result<f64, AsymptoticsError> {
    let r = crate::search::golden_section_max(
        |s| Ok::<_, core::convert::Infallible>(p.f(s) + a * s),
        -0.5,
        0.0,
        1e-12,
    )
    .unwrap_or_else(|e| match e {});
    Ok(r.value / a)
}

/// Classifies the root structure at `(x, a)` and locates every root.
pub fn find_roots(p: &Profile, x: f64, a: f64) -> Result<RootSet, AsymptoticsError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(AsymptoticsError::NonPositiveA { a });
    }
    if !(0.0..=0.5).contains(&x) {
        return Err(AsymptoticsError::XOutOfRange { x });
    }
    let a_pf = -p.f_prime_at_zero();
    let gx = |s: f64| g(p, x, a, s);
    let dg = |s: f64| p.f_prime(s) + a;

    // f(1/2) = 0, so g(1/2) = a (1/2 - x) >= 0; a non-positive value is rounding at x = 1/2
    let upper = |lo: f64| -> Result<f64, AsymptoticsError> {
        if gx(0.5) <= 0.0 {
            Ok(0.5)
        } else {
            Ok(bisect_newton(gx, dg, lo, 0.5, ROOT_XTOL, 3)?)
        }
    };

    if a >= a_pf {
        let s = upper(0.0)?;
        return Ok(RootSet {
            x,
            a,
            regime: Regime::Single,
            s_minus: None,
            s_mid: Some(s),
            s_plus: None,
            varphi: None,
            chi: None,
            degenerate: a == a_pf,
        });
    }

    let c = decreasing_half_width(p, a)?;
    let s_c = -c;
    let x0 = s_c + p.f(s_c) / a;
    let s_plus = upper(c)?;

    if x > x0 {
        return Ok(RootSet {
            x,
            a,
            regime: Regime::PostFold,
            s_minus: None,
            s_mid: None,
            s_plus: Some(s_plus),
            varphi: None,
            chi: None,
            degenerate: false,
        });
    }

    let (s_minus, s_mid) = if gx(s_c) <= 0.0 {
        // at the fold itself rounding may erase the sign change: double root
        (s_c, s_c)
    } else {
        (
            bisect_newton(gx, dg, -0.5, s_c, ROOT_XTOL, 3)?,
            bisect_newton(gx, dg, s_c, 0.0, ROOT_XTOL, 3)?,
        )
    };
    let varphi = phase_gap(p, x, a, s_minus, s_plus)?;
    let chi = sqrt((p.f_prime(s_plus) + a) / (p.f_prime(s_minus) + a));
    Ok(RootSet {
        x,
        a,
        regime: Regime::Triple,
        s_minus: Some(s_minus),
        s_mid: Some(s_mid),
        s_plus: Some(s_plus),
        varphi: Some(varphi),
        chi: Some(chi),
        degenerate: false,
    })
}

/// `φ(s-) - φ(s+) = a (s- - s+)(s+ + s- - 2x)/2 - ∫_{s-}^{s+} f`.
fn phase_gap(p: &Profile, x: f64, a: f64, s_minus: f64, s_plus: f64) -> Result<f64, AsymptoticsError> {
    let integral = integrate_scalar(|s| p.f(s), s_minus, s_plus, 1e-14, 1e-16)?;
    Ok(0.5 * a * (s_minus - s_plus) * (s_plus + s_minus - 2.0 * x) - integral)
}

/// All critical points of `φ_{x,a}` on the real line, sorted by position.
///
/// Every root of `g` lies in `[x - M/a, x + M/a]` with `M = max |f|`, so the
/// search is exhaustive, periodic images included.
pub fn phase_critical_points(p: &Profile, x: f64, a: f64) -> Result<Vec<CriticalPoint>, AsymptoticsError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(AsymptoticsError::NonPositiveA { a });
    }
    let reach = p.max_abs_f() / a;
    let lo = x - reach - 1e-12;
    let hi = x + reach + 1e-12;
    let a_pf = -p.f_prime_at_zero();
    let gx = |s: f64| g(p, x, a, s);
    let dg = |s: f64| p.f_prime(s) + a;

    let make = |y: f64| {
        let curvature = p.f_prime(y) + a;
        CriticalPoint {
            y,
            kind: if curvature >= 0.0 {
                CriticalKind::Minimum
            } else {
                CriticalKind::Maximum
            },
            phase: phase_value(p, x, a, y),
            curvature,
        }
    };

    if a >= a_pf {
        let y = bisect_newton(gx, dg, lo, hi, ROOT_XTOL * (1.0 + abs(x)), 3)?;
        let mut cp = make(y);
        cp.kind = CriticalKind::Minimum;
        return Ok(alloc::vec![cp]);
    }

    let c = decreasing_half_width(p, a)?;
    let mut edges = Vec::new();
    edges.push(lo);
    let n_lo = floor(lo) as i64 - 1;
    let n_hi = ceil(hi) as i64 + 1;
    for n in n_lo..=n_hi {
        for e in [n as f64 - c, n as f64 + c] {
            if e > lo && e < hi {
                edges.push(e);
            }
        }
    }
    edges.push(hi);
    edges.sort_by(|u, v| u.partial_cmp(v).unwrap());

    let mut out: Vec<CriticalPoint> = Vec::new();
    for w in edges.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (gu, gv) = (gx(u), gx(v));
        if (gu < 0.0 && gv < 0.0) || (gu > 0.0 && gv > 0.0) {
            continue;
        }
        let y = if gu == 0.0 {
            u
        } else if gv == 0.0 {
            v
        } else {
            bisect_newton(gx, dg, u, v, ROOT_XTOL * (1.0 + abs(u)), 3)
                .or_else(|_| bisect(gx, u, v, ROOT_XTOL))?
        };
        if out.last().is_some_and(|q| abs(q.y - y) < 1e-13) {
            continue;
        }
        let mut cp = make(y);
        // increasing pieces of g host minima, decreasing pieces maxima
        cp.kind = if gv > gu {
            CriticalKind::Minimum
        } else {
            CriticalKind::Maximum
        };
        out.push(cp);
    }
    if out.is_empty() {
        return Err(AsymptoticsError::NoMinimum { x, a });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{PI, TAU};
    use crate::profiles::make_sine_profile;

    #[test]
    fn single_regime_root_tends_to_x() {
        let p = make_sine_profile();
        for &a in &[1e3, 1e5, 1e7] {
            let r = find_roots(&p, 0.3, a).unwrap();
            assert_eq!(r.regime, Regime::Single);
            let s = r.s_mid.unwrap();
            assert!((s - 0.3).abs() <= 1.2 * TAU / a);
        }
    }

    #[test]
    fn symmetric_roots_at_origin() {
        let p = make_sine_profile();
        let r = find_roots(&p, 0.0, 2.0 * PI * PI).unwrap();
        assert_eq!(r.regime, Regime::Triple);
        assert!((r.s_minus.unwrap() + r.s_plus.unwrap()).abs() < 1e-14);
        assert!(r.s_mid.unwrap().abs() < 1e-14);
        assert!(r.varphi.unwrap().abs() < 1e-12);
        assert!((r.chi.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn a_star_places_s_plus_at_x_star() {
        let p = make_sine_profile();
        let a_star = TAU / 0.25;
        let r = find_roots(&p, 0.0, a_star).unwrap();
        assert!((r.s_plus.unwrap() - 0.25).abs() < 1e-13);
    }

    #[test]
    fn sine_fold_closed_form() {
        let p = make_sine_profile();
        let a = 2.0 * PI * PI;
        let fold = fold_location(&p, a).unwrap();
        assert!((fold.s_c + 1.0 / 6.0).abs() < 1e-13);
        let x0 = -1.0 / 6.0 + 3f64.sqrt() / TAU;
        assert!((fold.x0 - x0).abs() < 1e-13);
        let detected = fold_by_coalescence(&p, a).unwrap();
        assert!((detected - x0).abs() < 1e-8);
    }

    #[test]
    fn roots_coalesce_at_fold() {
        let p = make_sine_profile();
        let a = 2.0 * PI * PI;
        let fold = fold_location(&p, a).unwrap();
        let r = find_roots(&p, fold.x0, a).unwrap();
        assert_eq!(r.regime, Regime::Triple);
        assert!((r.s_minus.unwrap() - r.s_mid.unwrap()).abs() < 1e-8);
        assert!((p.f_prime(r.s_mid.unwrap()) + a).abs() < 1e-8);
    }

    #[test]
    fn fold_approaches_origin_at_pitchfork() {
        let p = make_sine_profile();
        let a_pf = 4.0 * PI * PI;
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6] {
            let x0 = fold_location(&p, a_pf * (1.0 - eps)).unwrap().x0;
            assert!(x0 > 0.0 && x0 < prev);
            prev = x0;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn fold_rejects_out_of_range() {
        let p = make_sine_profile();
        assert!(fold_location(&p, 50.0).is_err());
        assert!(fold_location(&p, 0.0).is_err());
    }

    #[test]
    fn post_fold_has_only_s_plus() {
        let p = make_sine_profile();
        let a = 2.0 * PI * PI;
        let x0 = fold_location(&p, a).unwrap().x0;
        let r = find_roots(&p, x0 + 0.01, a).unwrap();
        assert_eq!(r.regime, Regime::PostFold);
        assert!(r.s_minus.is_none() && r.s_plus.is_some());
    }

    #[test]
    fn pitchfork_classification() {
        let p = make_sine_profile();
        let a_pf = 4.0 * PI * PI;
        assert_eq!(find_roots(&p, 1e-4, a_pf * (1.0 + 1e-6)).unwrap().regime, Regime::Single);
        assert_eq!(find_roots(&p, 1e-9, a_pf * (1.0 - 1e-3)).unwrap().regime, Regime::Triple);
        let d = find_roots(&p, 0.1, a_pf).unwrap();
        assert!(d.degenerate && d.regime == Regime::Single);
    }

    #[test]
    fn critical_points_include_periodic_images() {
        let p = make_sine_profile();
        let cps = phase_critical_points(&p, 0.0, 1.0).unwrap();
        assert!(cps.iter().any(|c| c.y.abs() > 0.5));
        for c in &cps {
            assert!((p.f(c.y) + (c.y - 0.0)).abs() < 1e-12);
        }
        let global = cps
            .iter()
            .filter(|c| c.kind == CriticalKind::Minimum)
            .min_by(|u, v| u.phase.partial_cmp(&v.phase).unwrap())
            .unwrap();
        // images of minima carry larger phase than the minima in the fundamental cell
        assert!(global.y.abs() < 0.5);
    }
}
