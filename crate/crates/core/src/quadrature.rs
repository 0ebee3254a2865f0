//! Adaptive Gauss–Kronrod (7/15) quadrature for vector-valued integrands.
//!
//! Several moments of the same weight are integrated in one pass so that every
//! component is evaluated on identical nodes. The caller supplies the initial
//! breakpoints (typically the window ends plus the location and scale of every
//! spike of the integrand) and a tolerance rule mapping the current totals to
//! the admissible absolute error of each component.

use alloc::vec::Vec;

use crate::math::{abs, powf};

/// Kronrod abscissae on [0, 1); odd indices are the Gauss-7 nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Failure modes of the adaptive integrator.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("panel budget of {max_panels} exhausted (worst panel [{worst_a}, {worst_b}])")]
    PanelBudget {
        max_panels: usize,
        worst_a: f64,
        worst_b: f64,
    },
    #[error("integrand returned a non-finite value at y = {y}")]
    NonFinite { y: f64 },
    #[error("need at least two distinct breakpoints")]
    EmptyDomain,
}

/// Totals, error estimates and work count of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutput<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    splittable: bool,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = abs(err);
    if res_asc != 0.0 && scaled != 0.0 {
        let s = powf(200.0 * scaled / res_asc, 1.5);
        scaled = if s < 1.0 { res_asc * s } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor > scaled {
            scaled = floor;
        }
    }
    scaled
}

fn gauss_kronrod_panel<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Panel<N>, QuadError>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [[0.0; N]; 7];
    let mut fv2 = [[0.0; N]; 7];

    let fc = f(center);
    check_finite(&fc, center)?;
    let mut gauss = [0.0; N];
    let mut kronrod = [0.0; N];
    let mut res_abs = [0.0; N];
    for i in 0..N {
        gauss[i] = fc[i] * WG[3];
        kronrod[i] = fc[i] * WGK[7];
        res_abs[i] = abs(kronrod[i]);
    }

    for j in 0..7 {
        let dx = half * XGK[j];
        let (y1, y2) = (center - dx, center + dx);
        let v1 = f(y1);
        check_finite(&v1, y1)?;
        let v2 = f(y2);
        check_finite(&v2, y2)?;
        for i in 0..N {
            let sum = v1[i] + v2[i];
            kronrod[i] += WGK[j] * sum;
            res_abs[i] += WGK[j] * (abs(v1[i]) + abs(v2[i]));
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * sum;
            }
        }
        fv1[j] = v1;
        fv2[j] = v2;
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let habs = abs(half);
    for i in 0..N {
        let mean = 0.5 * kronrod[i];
        let mut res_asc = WGK[7] * abs(fc[i] - mean);
        for j in 0..7 {
            res_asc += WGK[j] * (abs(fv1[j][i] - mean) + abs(fv2[j][i] - mean));
        }
        value[i] = kronrod[i] * half;
        error[i] = rescale_error((kronrod[i] - gauss[i]) * half, res_abs[i] * habs, res_asc * habs);
    }
    // a panel whose estimate sits on the round-off floor cannot improve by bisection
    let at_floor = (0..N).all(|i| error[i] <= 50.0 * f64::EPSILON * res_abs[i] * habs * 1.000_001);
    let splittable = center > a && center < b && !at_floor;
    Ok(Panel {
        a,
        b,
        value,
        error,
        splittable,
    })
}

fn check_finite<const N: usize>(v: &[f64; N], y: f64) -> Result<(), QuadError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(QuadError::NonFinite { y })
    }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// `breakpoints` is sorted and deduplicated internally. `allowed` receives the
/// current totals and returns the admissible absolute error per component; the
/// panel whose error is worst relative to that budget is bisected until every
/// component fits or `max_panels` is reached.
pub fn integrate<const N: usize, F, A>(
    mut f: F,
    breakpoints: &[f64],
    allowed: A,
    max_panels: usize,
) -> Result<QuadOutput<N>, QuadError>
where
    F: FnMut(f64) -> [f64; N],
    A: Fn(&[f64; N]) -> [f64; N],
{
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|b, a| abs(*b - *a) <= 1e-15 * (1.0 + abs(*a)));
    if pts.len() < 2 {
        return Err(QuadError::EmptyDomain);
    }

    let mut panels: Vec<Panel<N>> = Vec::with_capacity(4 * pts.len());
    for w in pts.windows(2) {
        panels.push(gauss_kronrod_panel(&mut f, w[0], w[1])?);
    }
    let mut evaluations = 15 * panels.len();

    loop {
        let mut total = [0.0; N];
        let mut total_err = [0.0; N];
        for p in &panels {
            for i in 0..N {
                total[i] += p.value[i];
                total_err[i] += p.error[i];
            }
        }
        let budget = allowed(&total);
        if (0..N).all(|i| total_err[i] <= budget[i]) {
            return Ok(QuadOutput {
                value: total,
                error: total_err,
                evaluations,
            });
        }

        let score = |p: &Panel<N>| {
            (0..N)
                .map(|i| {
                    if budget[i] > 0.0 {
                        p.error[i] / budget[i]
                    } else if p.error[i] > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max)
        };
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|(_, p), (_, q)| score(p).partial_cmp(&score(q)).unwrap())
            .map(|(i, _)| i);
        let Some(worst) = worst else {
            // every remaining panel is at floating-point resolution
            return Ok(QuadOutput {
                value: total,
                error: total_err,
                evaluations,
            });
        };
        if panels.len() >= max_panels {
            let p = panels[worst];
            return Err(QuadError::PanelBudget {
                max_panels,
                worst_a: p.a,
                worst_b: p.b,
            });
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gauss_kronrod_panel(&mut f, p.a, mid)?);
        panels.push(gauss_kronrod_panel(&mut f, mid, p.b)?);
        evaluations += 30;
    }
}

/// Scalar convenience wrapper with a mixed relative/absolute tolerance.
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64, QuadError>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let out = integrate(
        |y| [f(y)],
        &[lo, hi],
        |t| [f64::max(abs_tol, rel_tol * abs(t[0]))],
        4000,
    )?;
    Ok(sign * out.value[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, sin, sqrt, PI};

    #[test]
    fn polynomial_exact_on_one_panel() {
        // K15 integrates degree-22 polynomials exactly
        let v = integrate_scalar(|x| x.powi(10) - 3.0 * x.powi(3), 0.0, 2.0, 1e-14, 0.0).unwrap();
        let exact = 2f64.powi(11) / 11.0 - 3.0 * 16.0 / 4.0;
        assert!((v - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn narrow_gaussian_with_breakpoints() {
        let k = 1.0e4;
        let s = 1.0 / sqrt(k);
        let bps = [-1.0, -3.0 * s, -s, 0.0, s, 3.0 * s, 1.0];
        let out = integrate(
            |y| [exp(-0.5 * k * y * y), y * y * exp(-0.5 * k * y * y)],
            &bps,
            |t| [1e-12 * t[0].abs(), 1e-12 * t[1].abs()],
            500,
        )
        .unwrap();
        let g = sqrt(2.0 * PI / k);
        assert!((out.value[0] - g).abs() < 1e-11 * g);
        assert!((out.value[1] - g / k).abs() < 1e-11 * g / k);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate_scalar(|x| sin(40.0 * x), 0.0, PI, 1e-12, 1e-14).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate_scalar(|x| x * x, 0.0, 1.0, 1e-13, 0.0).unwrap();
        let b = integrate_scalar(|x| x * x, 1.0, 0.0, 1e-13, 0.0).unwrap();
        assert!((a + b).abs() < 1e-15 && (a - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_is_reported() {
        let err = integrate_scalar(|x| 1.0 / x, 0.0, 1.0, 1e-10, 0.0).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite { .. } | QuadError::PanelBudget { .. }));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let err = integrate(
            |x: f64| [x.abs().sqrt().recip().min(1e300)],
            &[-1.0, 1.0],
            |_| [1e-300],
            8,
        )
        .unwrap_err();
        assert!(matches!(err, QuadError::PanelBudget { max_panels: 8, .. }));
    }
}
