//! Fourier helpers on the uniform grid `x_j = -1/2 + j/n`.
//!
//! Coefficients are normalised so that `u(x_j) = Σ_m c_m e^{2πi m (x_j + 1/2)}`,
//! which makes them independent of `n` and lets resampling copy modes directly.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Signed wavenumber of FFT bin `j` for length `n`.
pub fn wavenumber(j: usize, n: usize) -> f64 {
    if j <= n / 2 {
        j as f64
    } else {
        j as f64 - n as f64
    }
}

/// Forward and inverse plans for one length.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, u: &[f64]) -> Vec<Complex64> {
        assert_eq!(u.len(), self.n, "sample count does not match the plan");
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    pub fn forward_complex(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
    }

    /// Real part of the synthesis.
    pub fn inverse(&self, c: &[Complex64]) -> Vec<f64> {
        let mut buf = c.to_vec();
        self.inverse.process(&mut buf);
        buf.iter().map(|z| z.re).collect()
    }

    pub fn inverse_complex(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// `d^order u / dx^order`; the Nyquist mode is dropped.
    pub fn derivative(&self, u: &[f64], order: u32) -> Vec<f64> {
        let mut c = self.forward(u);
        apply_derivative(&mut c, order);
        self.inverse(&c)
    }

    /// Fraction of `Σ |c_m|²` carried by `|m| > n/4`.
    pub fn tail_fraction(&self, u: &[f64]) -> f64 {
        tail_fraction(&self.forward(u), self.n / 4)
    }
}

/// Multiplies coefficients by `(2πi m)^order` and zeroes the Nyquist bin.
pub fn apply_derivative(c: &mut [Complex64], order: u32) {
    let n = c.len();
    for (j, z) in c.iter_mut().enumerate() {
        if n.is_multiple_of(2) && j == n / 2 {
            *z = Complex64::new(0.0, 0.0);
            continue;
        }
        let ik = Complex64::new(0.0, TAU * wavenumber(j, n));
        *z *= ik.powu(order);
    }
}

/// Fraction of `Σ |c_m|²` in modes with `|m| > cutoff`; `0` for a zero field.
pub fn tail_fraction(c: &[Complex64], cutoff: usize) -> f64 {
    let n = c.len();
    let (mut tail, mut total) = (0.0, 0.0);
    for (j, z) in c.iter().enumerate() {
        let e = z.norm_sqr();
        total += e;
        if wavenumber(j, n).abs() > cutoff as f64 {
            tail += e;
        }
    }
    if total > 0.0 {
        tail / total
    } else {
        0.0
    }
}

/// Moves coefficients from length `c.len()` to length `m`, splitting or
/// folding the Nyquist bin so that real fields stay real.
pub fn resample_coefficients(c: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = c.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let half_n = n / 2;
    let half_m = m / 2;
    for (j, &z) in c.iter().enumerate() {
        let w = wavenumber(j, n) as i64;
        let nyquist_in = n.is_multiple_of(2) && j == half_n;
        if nyquist_in && m > n {
            // split cos(π n x) evenly between +n/2 and -n/2
            out[half_n] += 0.5 * z;
            out[m - half_n] += 0.5 * z;
            continue;
        }
        let aw = w.unsigned_abs() as usize;
        if aw > half_m || (m.is_multiple_of(2) && aw == half_m && m < n) {
            continue;
        }
        let idx = if w >= 0 { w as usize } else { (m as i64 + w) as usize };
        out[idx] += z;
    }
    out
}

/// Trigonometric interpolation of `u` onto `m` points.
pub fn resample(u: &[f64], m: usize) -> Vec<f64> {
    if u.len() == m {
        return u.to_vec();
    }
    let c = Spectral::new(u.len()).forward(u);
    Spectral::new(m).inverse(&resample_coefficients(&c, m))
}
