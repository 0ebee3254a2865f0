//! Golden-section search for the maximum of a unimodal function.

use crate::math::sqrt;

/// Location, value and evaluation count of a golden-section maximisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenMax {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximises `f` on `[lo, hi]` until the bracket is narrower than `xtol`.
///
/// `f` may fail; the first error aborts the search.
pub fn golden_section_max<F, E>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<GoldenMax, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let inv_phi = (sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evaluations = 2;
    while b - a > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
        if evaluations > 500 {
            break;
        }
    }
    let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(GoldenMax { x, value, evaluations })
}
