//! Ordinary least squares for power laws `y = C x^p` fitted in log-log space.

use alloc::vec::Vec;

use crate::math::ln;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("non-positive value at index {index}; log-log fit undefined")]
    NonPositive { index: usize },
    #[error("abscissae are all identical")]
    Degenerate,
}

/// Result of a straight-line fit `ln y = log_prefactor + exponent * ln x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least-squares line through `(xs[i], ys[i])`: returns (slope, intercept, r²).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64), FitError> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return Err(FitError::TooFewPoints { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(FitError::Degenerate);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok((slope, intercept, r2))
}

/// Fits `y = C x^p`; requires `min_points` strictly positive pairs.
pub fn power_law_fit(xs: &[f64], ys: &[f64], min_points: usize) -> Result<PowerLawFit, FitError> {
    let n = xs.len().min(ys.len());
    if n < min_points {
        return Err(FitError::TooFewPoints { needed: min_points, got: n });
    }
    let mut lx = Vec::with_capacity(n);
    let mut ly = Vec::with_capacity(n);
    for i in 0..n {
        if !(xs[i] > 0.0 && ys[i] > 0.0) {
            return Err(FitError::NonPositive { index: i });
        }
        lx.push(ln(xs[i]));
        ly.push(ln(ys[i]));
    }
    let (exponent, log_prefactor, r_squared) = linear_fit(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent,
        log_prefactor,
        r_squared,
        points: n,
    })
}
