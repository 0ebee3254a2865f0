//! Leading-order fields `u` and `u_x` for large amplitude `k`.
//!
//! Before the pitchfork (`a > |f'(0)|`) a single minimum drives the solution
//! and `u ~ k f(s)`. Afterwards, on `[0, x1]` both minima contribute and the
//! field is the weighted two-spike average; on `[x1, 1/2]` only `s+` matters.
//! Negative `x` follow from oddness.

use crate::math::{abs, exp};
use crate::profiles::Profile;
use crate::rootfind::bisect;

use super::roots::{find_roots, fold_location, Regime, RootSet};
use super::AsymptoticsError;

/// Weight `k φ` beyond which the second spike is below double precision.
pub const SEAM_WEIGHT: f64 = 36.0;

/// Pitchfork and fold data at one reparametrised time `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationData {
    /// `t0 = 1 / (2 k |f'(0)|)`.
    pub t0: f64,
    pub a_pitchfork: f64,
    /// Fold location, present for `a < |f'(0)|`.
    pub x0: Option<f64>,
    /// Seam between the two-spike and one-spike expansions.
    pub x1: Option<f64>,
    /// `a* = |f(x*)| / x*`.
    pub a_star: f64,
}

/// Computes `t0`, `a*`, and, after the pitchfork, `x0(a)` and `x1(a, k)`.
///
/// `x1` is the smallest `x` with `k φ_{x,a} >= 36`, clamped to `[x0/100, x0/2]`
/// (with `x0` capped at `1/2`).
pub fn bifurcation_data(p: &Profile, a: f64, k: f64) -> Result<BifurcationData, AsymptoticsError> {
    let a_pf = -p.f_prime_at_zero();
    let a_star = p.max_abs_f() / p.x_star();
    let t0 = 1.0 / (2.0 * k * a_pf);
    if a >= a_pf {
        return Ok(BifurcationData {
            t0,
            a_pitchfork: a_pf,
            x0: None,
            x1: None,
            a_star,
        });
    }
    let x0 = fold_location(p, a)?.x0;
    // for small a the fold lies beyond the half cell and both minima persist up to 1/2
    let reach = x0.min(0.5);
    let (lo, hi) = (reach / 100.0, reach / 2.0);
    let weight = |x: f64| -> Result<f64, AsymptoticsError> {
        let r = find_roots(p, x, a)?;
        Ok(k * r.varphi.unwrap_or(f64::INFINITY) - SEAM_WEIGHT)
    };
    let x1 = if weight(lo)? >= 0.0 {
        lo
    } else if weight(hi)? <= 0.0 {
        hi
    } else {
        let mut failure = None;
        let x = bisect(
            |x| match weight(x) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            1e-13,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        x?
    };
    Ok(BifurcationData {
        t0,
        a_pitchfork: a_pf,
        x0: Some(x0),
        x1: Some(x1),
        a_star,
    })
}

/// Leading-order field at fixed `(a, k)`; reuses the fold and seam for every `x`.
#[derive(Debug, Clone)]
pub struct AsymptoticField<'p> {
    profile: &'p Profile,
    a: f64,
    k: f64,
    data: BifurcationData,
}

impl<'p> AsymptoticField<'p> {
    pub fn new(profile: &'p Profile, a: f64, k: f64) -> Result<Self, AsymptoticsError> {
        if !(a > 0.0) {
            return Err(AsymptoticsError::NonPositiveA { a });
        }
        Ok(Self {
            profile,
            a,
            k,
            data: bifurcation_data(profile, a, k)?,
        })
    }

    pub fn bifurcation(&self) -> &BifurcationData {
        &self.data
    }

    fn two_spike(&self, r: &RootSet) -> bool {
        r.regime == Regime::Triple && self.data.x1.is_some_and(|x1| r.x <= x1)
    }

    /// Leading-order `u(x)`.
    pub fn u(&self, x: f64) -> Result<f64, AsymptoticsError> {
        let (x, sign) = fold_into_half(x);
        let p = self.profile;
        let k = self.k;
        let r = find_roots(p, x, self.a)?;
        let v = match r.regime {
            Regime::Single => k * p.f(r.dominant()),
            _ if self.two_spike(&r) => {
                let (fp, fm) = (p.f(r.s_plus.unwrap()), p.f(r.s_minus.unwrap()));
                let w = r.chi.unwrap() * exp(-k * r.varphi.unwrap());
                k * (fp + w * fm) / (1.0 + w)
            }
            _ => k * p.f(r.s_plus.unwrap()),
        };
        Ok(sign * v)
    }

    /// Leading-order `u_x(x)`. On `[x1, 1/2]` after the pitchfork this is the
    /// single-root formula evaluated at `s+`, which only matches the `O(k)` size.
    pub fn ux(&self, x: f64) -> Result<f64, AsymptoticsError> {
        let (x, _) = fold_into_half(x);
        let p = self.profile;
        let (k, a) = (self.k, self.a);
        let r = find_roots(p, x, a)?;
        let single = |s: f64| {
            let d = p.f_prime(s);
            k * a * d / (a + d)
        };
        Ok(match r.regime {
            Regime::Single => single(r.dominant()),
            _ if self.two_spike(&r) => {
                let (fp, fm) = (p.f(r.s_plus.unwrap()), p.f(r.s_minus.unwrap()));
                let w = r.chi.unwrap() * exp(-k * r.varphi.unwrap());
                let jump = fp - fm;
                -k * k * jump * jump * w / ((1.0 + w) * (1.0 + w))
            }
            _ => single(r.s_plus.unwrap()),
        })
    }
}

/// Maps `x` into `[0, 1/2]` by periodicity and oddness; returns the sign to reapply to `u`.
fn fold_into_half(x: f64) -> (f64, f64) {
    let w = crate::math::wrap_to_cell(x);
    if w < 0.0 {
        (abs(w).min(0.5), -1.0)
    } else {
        (w, 1.0)
    }
}

/// Leading-order `u(x, t)` with `t = 1/(2ka)`.
pub fn asymptotic_u(p: &Profile, x: f64, a: f64, k: f64) -> Result<f64, AsymptoticsError> {
    AsymptoticField::new(p, a, k)?.u(x)
}

/// Leading-order `u_x(x, t)` with `t = 1/(2ka)`.
pub fn asymptotic_ux(p: &Profile, x: f64, a: f64, k: f64) -> Result<f64, AsymptoticsError> {
    AsymptoticField::new(p, a, k)?.ux(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{PI, TAU};
    use crate::profiles::make_sine_profile;
    use crate::quadrature::integrate_scalar;

    #[test]
    fn origin_is_zero_in_every_regime() {
        let p = make_sine_profile();
        for a in [80.0, 8.0 * PI, 5.0] {
            assert!(asymptotic_u(&p, 0.0, a, 100.0).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn pre_pitchfork_derivative_tends_to_initial_slope() {
        let p = make_sine_profile();
        let k = 10.0;
        let x = 0.1;
        let v = asymptotic_ux(&p, x, 1e9, k).unwrap();
        assert!((v - k * p.f_prime(x)).abs() < 1e-6 * k * p.f_prime(x).abs());
    }

    #[test]
    fn shock_slope_at_origin() {
        // χ = 1, φ = 0 and f(s-) = -f(s+) at x = 0 give -k² f(s+)²
        let p = make_sine_profile();
        let (a, k) = (8.0 * PI, 100.0);
        let s_plus = find_roots(&p, 0.0, a).unwrap().s_plus.unwrap();
        let expected = -k * k * p.f(s_plus).powi(2);
        let v = asymptotic_ux(&p, 0.0, a, k).unwrap();
        assert!((v - expected).abs() < 1e-9 * expected.abs());
    }

    #[test]
    fn expansions_agree_at_the_seam() {
        let p = make_sine_profile();
        let (a, k) = (8.0 * PI, 200.0);
        let field = AsymptoticField::new(&p, a, k).unwrap();
        let x1 = field.bifurcation().x1.unwrap();
        let r = find_roots(&p, x1, a).unwrap();
        let two = field.u(x1).unwrap();
        let one = k * p.f(r.s_plus.unwrap());
        let bound = k * exp(-k * r.varphi.unwrap()) * r.chi.unwrap() * (p.f(r.s_plus.unwrap()) - p.f(r.s_minus.unwrap())).abs();
        assert!((two - one).abs() <= bound * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn seam_lies_inside_fold() {
        let p = make_sine_profile();
        for a in [2.0 * PI * PI, 8.0 * PI, 30.0] {
            let d = bifurcation_data(&p, a, 100.0).unwrap();
            let (x0, x1) = (d.x0.unwrap(), d.x1.unwrap());
            assert!(0.0 < x1 && x1 < x0 && x0 < 0.5);
        }
        let late = bifurcation_data(&p, 5.0, 100.0).unwrap();
        assert!(late.x0.unwrap() > 0.5 && late.x1.unwrap() <= 0.25);
        let d = bifurcation_data(&p, 1.0, 1.0).unwrap();
        assert!(d.a_star > 0.0 && d.a_star < d.a_pitchfork);
        assert!((d.a_star - 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn odd_in_x() {
        let p = make_sine_profile();
        let f = AsymptoticField::new(&p, 8.0 * PI, 50.0).unwrap();
        for x in [0.01, 0.1, 0.3, 0.45] {
            assert_eq!(f.u(-x).unwrap(), -f.u(x).unwrap());
            assert_eq!(f.ux(-x).unwrap(), f.ux(x).unwrap());
        }
    }

    /// The two-spike derivative is `-k²J² w/(1+w)²` with `w = e^{-kφ}` and
    /// `φ ≈ |J| x` near the origin (J = 2|f(s+)|), so `∫_0^∞ u_x² dx` equals
    /// `k³|J|³ ∫_0^1 v/(1+v)^4 dv = k³|J|³/12 = (2/3) k³ |f(s+)|³`.
    #[test]
    fn two_spike_enstrophy_integral() {
        let p = make_sine_profile();
        let (a, k) = (8.0 * PI, 400.0);
        let field = AsymptoticField::new(&p, a, k).unwrap();
        let x1 = field.bifurcation().x1.unwrap();
        let width = 1.0 / (k * TAU);
        let mut bps = alloc::vec::Vec::new();
        let mut x = 0.0;
        while x < x1 {
            bps.push(x);
            x += width;
        }
        bps.push(x1);
        let mut total = 0.0;
        for w in bps.windows(2) {
            total += integrate_scalar(|x| field.ux(x).unwrap().powi(2), w[0], w[1], 1e-10, 0.0).unwrap();
        }
        let fs = p.f(find_roots(&p, 0.0, a).unwrap().s_plus.unwrap()).abs();
        let closed = 2.0 / 3.0 * k * k * k * fs * fs * fs;
        let rel = (total / closed - 1.0).abs();
        assert!(rel < 3.0 / k, "rel = {rel}");
    }
}
