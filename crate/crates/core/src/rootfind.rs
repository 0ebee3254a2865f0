//! Bracketed scalar root finding: bisection to a tight bracket, then Newton
//! polishing that is only accepted while it stays inside the bracket.

use crate::math::abs;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },
    #[error("function is not finite at {x}")]
    NonFinite { x: f64 },
}

/// Finds a root of `g` in `[lo, hi]` to absolute tolerance `xtol`.
///
/// An endpoint that is an exact zero is returned as is.
pub fn bisect<G>(mut g: G, lo: f64, hi: f64, xtol: f64) -> Result<f64, RootError>
where
    G: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut ga = g(a);
    let gb = g(b);
    if !ga.is_finite() {
        return Err(RootError::NonFinite { x: a });
    }
    if !gb.is_finite() {
        return Err(RootError::NonFinite { x: b });
    }
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if (ga < 0.0) == (gb < 0.0) {
        return Err(RootError::NoSignChange {
            lo: a,
            hi: b,
            g_lo: ga,
            g_hi: gb,
        });
    }
    // 200 halvings exhaust f64 resolution for any bracket
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= xtol || m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if !gm.is_finite() {
            return Err(RootError::NonFinite { x: m });
        }
        if gm == 0.0 {
            return Ok(m);
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisection followed by Newton steps on `(g, g')`, each kept only if it
/// lands inside the final bracket and reduces `|g|`.
pub fn bisect_newton<G, D>(mut g: G, mut dg: D, lo: f64, hi: f64, xtol: f64, polish_steps: usize) -> Result<f64, RootError>
where
    G: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let mut x = bisect(&mut g, lo, hi, xtol)?;
    let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut gx = g(x);
    for _ in 0..polish_steps {
        let d = dg(x);
        if d == 0.0 || !d.is_finite() || gx == 0.0 {
            break;
        }
        let cand = x - gx / d;
        if !(a..=b).contains(&cand) {
            break;
        }
        let gc = g(cand);
        if abs(gc) > abs(gx) {
            break;
        }
        x = cand;
        gx = gc;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = bisect_newton(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0, 1e-12, 2).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn no_sign_change_reports_values() {
        let e = bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, RootError::NoSignChange { g_lo, .. } if g_lo == 2.0));
    }

    #[test]
    fn exact_endpoint_zero() {
        assert_eq!(bisect(|x| x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn reversed_bracket() {
        let r = bisect(|x| x - 0.3, 1.0, 0.0, 1e-14).unwrap();
        assert!((r - 0.3).abs() < 1e-14);
    }
}
