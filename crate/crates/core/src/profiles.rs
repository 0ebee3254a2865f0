//! Initial-condition shapes `f` for data `u0 = k f`.
//!
//! An admissible shape is odd and periodic on the unit circle, negative on
//! `(0, 1/2)` and convex there (`f'' >= 0`). Consequently `f'` increases
//! monotonically on `[0, 1/2]` and vanishes exactly once, at `x_star`, where
//! `|f|` attains its maximum. The antiderivative `F(x) = ∫_0^x f` is even,
//! periodic and decreasing on `[0, 1/2]`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{abs, sin, sin_cos, wrap_to_cell, PI, TAU};
use crate::quadrature::{integrate_scalar, QuadError};
use crate::rootfind::{bisect, RootError};

/// Grid used by [`validate_profile`] when none is given.
pub const DEFAULT_VALIDATION_POINTS: usize = 4096;

/// Slack allowed on `f'' >= 0` before a shape counts as non-convex.
pub const CONVEXITY_SLACK: f64 = 1e-10;

/// Pointwise access to a shape and its derivatives.
pub trait ShapeFunction: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn d1(&self, x: f64) -> f64;
    fn d2(&self, x: f64) -> f64;
    fn d3(&self, x: f64) -> f64;
    /// `F(x) = ∫_0^x f(s) ds`.
    fn antiderivative(&self, x: f64) -> f64;

    /// `(F, f, f')` at one point; implementors override this to share trig work.
    fn phase_parts(&self, y: f64) -> (f64, f64, f64) {
        (self.antiderivative(y), self.value(y), self.d1(y))
    }
}

/// `f(x) = -Σ_n a_n sin(2π n x)`, `n = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSeries {
    coeffs: Vec<f64>,
}

impl SineSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Calls `visit(n, a_n, cos(2πnx), sin(2πnx))` for every term.
    #[inline]
    fn for_each_term(&self, x: f64, mut visit: impl FnMut(f64, f64, f64, f64)) {
        let (s1, c1) = sin_cos(TAU * x);
        let (mut s, mut c) = (s1, c1);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                let sn = s * c1 + c * s1;
                let cn = c * c1 - s * s1;
                s = sn;
                c = cn;
            }
            if a != 0.0 {
                visit((i + 1) as f64, a, c, s);
            }
        }
    }
}

impl ShapeFunction for SineSeries {
    fn value(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        self.for_each_term(x, |_, a, _, s| acc -= a * s);
        acc
    }

    fn d1(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        self.for_each_term(x, |n, a, c, _| acc -= a * TAU * n * c);
        acc
    }

    fn d2(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        self.for_each_term(x, |n, a, _, s| {
            let w = TAU * n;
            acc += a * w * w * s;
        });
        acc
    }

    fn d3(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        self.for_each_term(x, |n, a, c, _| {
            let w = TAU * n;
            acc += a * w * w * w * c;
        });
        acc
    }

    fn antiderivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        self.for_each_term(x, |n, a, c, _| acc += a * (c - 1.0) / (TAU * n));
        acc
    }

    fn phase_parts(&self, y: f64) -> (f64, f64, f64) {
        let (mut big_f, mut f, mut fp) = (0.0, 0.0, 0.0);
        self.for_each_term(y, |n, a, c, s| {
            let w = TAU * n;
            big_f += a * (c - 1.0) / w;
            f -= a * s;
            fp -= a * w * c;
        });
        (big_f, f, fp)
    }
}

pub type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied shape. Only `f` is mandatory; missing derivatives are taken
/// from a spectral (sine-series) fit of dense samples of `f`, and a missing
/// antiderivative is tabulated by adaptive quadrature.
pub struct ProfileClosures {
    pub f: ScalarFn,
    pub f_prime: Option<ScalarFn>,
    pub f_double_prime: Option<ScalarFn>,
    pub f_triple_prime: Option<ScalarFn>,
    pub antiderivative: Option<ScalarFn>,
}

impl ProfileClosures {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Box::new(f),
            f_prime: None,
            f_double_prime: None,
            f_triple_prime: None,
            antiderivative: None,
        }
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d3: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.f_prime = Some(Box::new(d1));
        self.f_double_prime = Some(Box::new(d2));
        self.f_triple_prime = Some(Box::new(d3));
        self
    }

    pub fn with_antiderivative(mut self, big_f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.antiderivative = Some(Box::new(big_f));
        self
    }
}

/// Quintic Hermite table of `F` on `[0, 1/2]`, extended by evenness and periodicity.
struct AntiderivativeTable {
    h: f64,
    // (F, F' = f, F'' = f') at the nodes
    nodes: Vec<(f64, f64, f64)>,
}

impl AntiderivativeTable {
    const PANELS: usize = 2048;

    fn build(f: &dyn Fn(f64) -> f64, fp: &dyn Fn(f64) -> f64) -> Result<Self, QuadError> {
        let n = Self::PANELS;
        let h = 0.5 / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        nodes.push((0.0, f(0.0), fp(0.0)));
        for j in 0..n {
            let a = j as f64 * h;
            let b = (j + 1) as f64 * h;
            acc += integrate_scalar(f, a, b, 1e-15, 1e-18)?;
            nodes.push((acc, f(b), fp(b)));
        }
        Ok(Self { h, nodes })
    }

    fn eval(&self, x: f64) -> f64 {
        let x = abs(wrap_to_cell(x));
        let pos = x / self.h;
        let j = (pos as usize).min(self.nodes.len() - 2);
        let t = pos - j as f64;
        let (p0, m0, a0) = self.nodes[j];
        let (p1, m1, a1) = self.nodes[j + 1];
        let h = self.h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 0.5 * t3 - t4 + 0.5 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        h0 * p0 + h * h1 * m0 + h * h * h2 * a0 + h * h * h3 * a1 + h * h4 * m1 + h5 * p1
    }
}

struct ClosureShape {
    f: ScalarFn,
    d1: ScalarFn,
    d2: ScalarFn,
    d3: ScalarFn,
    big_f: AntiderivativeKind,
}

enum AntiderivativeKind {
    Closure(ScalarFn),
    Table(AntiderivativeTable),
}

impl ShapeFunction for ClosureShape {
    fn value(&self, x: f64) -> f64 {
        (self.f)(wrap_to_cell(x))
    }
    fn d1(&self, x: f64) -> f64 {
        (self.d1)(wrap_to_cell(x))
    }
    fn d2(&self, x: f64) -> f64 {
        (self.d2)(wrap_to_cell(x))
    }
    fn d3(&self, x: f64) -> f64 {
        (self.d3)(wrap_to_cell(x))
    }
    fn antiderivative(&self, x: f64) -> f64 {
        match &self.big_f {
            AntiderivativeKind::Closure(g) => g(wrap_to_cell(x)),
            AntiderivativeKind::Table(t) => t.eval(x),
        }
    }
}

/// Fits `f(x) = -Σ a_n sin(2πnx)` to `n` uniform samples of an odd periodic function
/// taken at `x_j = -1/2 + j/n`.
pub fn sine_coefficients_from_samples(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let modes = n / 2;
    let mut coeffs = vec![0.0; modes.saturating_sub(1)];
    for (m, c) in coeffs.iter_mut().enumerate() {
        let w = TAU * (m + 1) as f64;
        let mut acc = 0.0;
        for (j, &v) in samples.iter().enumerate() {
            let x = -0.5 + j as f64 / n as f64;
            acc += v * sin(w * x);
        }
        *c = -2.0 * acc / n as f64;
    }
    // round-off in the sums leaves ~1e-15 noise in every mode; high modes would
    // amplify it in the derivatives
    let peak = coeffs.iter().fold(0.0f64, |m, c| m.max(abs(*c)));
    for c in coeffs.iter_mut() {
        if abs(*c) <= 1e-13 * peak {
            *c = 0.0;
        }
    }
    let keep = coeffs.iter().rposition(|c| *c != 0.0).map_or(0, |i| i + 1);
    coeffs.truncate(keep);
    coeffs
}

/// Number of samples used when a closure lacks derivatives.
const SPECTRAL_SAMPLES: usize = 1024;

/// Which admissibility condition a shape breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Oddness,
    EndpointValues,
    Sign,
    Convexity,
    DerivativeMonotonicity,
    AntiderivativeMismatch,
    AntiderivativeParity,
    DerivativeMismatch,
    NoCriticalPoint,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::Oddness => "f is not odd",
            Violation::EndpointValues => "f(0) or f(1/2) is nonzero",
            Violation::Sign => "f is not negative on (0, 1/2)",
            Violation::Convexity => "f'' is negative somewhere on [0, 1/2]",
            Violation::DerivativeMonotonicity => "f' is not increasing on [0, 1/2]",
            Violation::AntiderivativeMismatch => "F' does not reproduce f",
            Violation::AntiderivativeParity => "F is not even and periodic",
            Violation::DerivativeMismatch => "supplied derivatives disagree with finite differences",
            Violation::NoCriticalPoint => "f' has no zero in (0, 1/2)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("inadmissible profile: {0}")]
    Inadmissible(Violation),
    #[error("coefficient list is empty or all zero")]
    EmptySeries,
    #[error("need at least 16 samples, got {0}")]
    TooFewSamples(usize),
    #[error("antiderivative tabulation failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("critical point search failed: {0}")]
    Root(#[from] RootError),
}

/// An admissible initial-condition shape with its distinguished values.
#[derive(Clone)]
pub struct Profile {
    name: String,
    shape: Arc<dyn ShapeFunction>,
    x_star: f64,
    f_at_x_star: f64,
    f_prime_at_zero: f64,
    f_prime_at_half: f64,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("name", &self.name)
            .field("x_star", &self.x_star)
            .field("f_at_x_star", &self.f_at_x_star)
            .field("f_prime_at_zero", &self.f_prime_at_zero)
            .finish()
    }
}

/// `f(x) = -2π sin(2πx)`, the shape that saturates the Poincaré inequality.
pub fn make_sine_profile() -> Profile {
    let shape = SineSeries::new(vec![TAU]);
    Profile {
        name: String::from("sine"),
        shape: Arc::new(shape),
        x_star: 0.25,
        f_at_x_star: -TAU,
        f_prime_at_zero: -4.0 * PI * PI,
        f_prime_at_half: 4.0 * PI * PI,
    }
}

/// Source of a custom shape.
pub enum CustomShape {
    /// Coefficients `a_n` of `-Σ a_n sin(2πnx)`.
    SineSeries(Vec<f64>),
    /// Uniform samples at `x_j = -1/2 + j/n`.
    Samples(Vec<f64>),
    Closures(ProfileClosures),
}

/// Builds a validated profile, locating `x_star` by bisection on `f'`.
pub fn make_custom_profile(source: CustomShape) -> Result<Profile, ProfileError> {
    let (name, shape): (String, Arc<dyn ShapeFunction>) = match source {
        CustomShape::SineSeries(coeffs) => {
            if coeffs.iter().all(|c| *c == 0.0) {
                return Err(ProfileError::EmptySeries);
            }
            (String::from("sine-series"), Arc::new(SineSeries::new(coeffs)))
        }
        CustomShape::Samples(samples) => {
            if samples.len() < 16 {
                return Err(ProfileError::TooFewSamples(samples.len()));
            }
            let coeffs = sine_coefficients_from_samples(&samples);
            if coeffs.is_empty() {
                return Err(ProfileError::EmptySeries);
            }
            (String::from("samples"), Arc::new(SineSeries::new(coeffs)))
        }
        CustomShape::Closures(c) => (String::from("custom"), Arc::new(closure_shape(c)?)),
    };
    Profile::from_shape(name, shape)
}

fn closure_shape(c: ProfileClosures) -> Result<ClosureShape, ProfileError> {
    let ProfileClosures {
        f,
        f_prime,
        f_double_prime,
        f_triple_prime,
        antiderivative,
    } = c;
    let spectral = if f_prime.is_none() || f_double_prime.is_none() || f_triple_prime.is_none() {
        let samples: Vec<f64> = (0..SPECTRAL_SAMPLES)
            .map(|j| f(-0.5 + j as f64 / SPECTRAL_SAMPLES as f64))
            .collect();
        Some(Arc::new(SineSeries::new(sine_coefficients_from_samples(&samples))))
    } else {
        None
    };
    let from_series = |order: u8| -> ScalarFn {
        let s = spectral.clone().expect("spectral fit present when a derivative is missing");
        match order {
            1 => Box::new(move |x| s.d1(x)),
            2 => Box::new(move |x| s.d2(x)),
            _ => Box::new(move |x| s.d3(x)),
        }
    };
    let d1 = f_prime.unwrap_or_else(|| from_series(1));
    let d2 = f_double_prime.unwrap_or_else(|| from_series(2));
    let d3 = f_triple_prime.unwrap_or_else(|| from_series(3));
    let big_f = match antiderivative {
        Some(g) => AntiderivativeKind::Closure(g),
        None => AntiderivativeKind::Table(AntiderivativeTable::build(&|x| f(wrap_to_cell(x)), &|x| {
            d1(wrap_to_cell(x))
        })?),
    };
    Ok(ClosureShape { f, d1, d2, d3, big_f })
}

impl Profile {
    fn from_shape(name: String, shape: Arc<dyn ShapeFunction>) -> Result<Self, ProfileError> {
        let report = validate_shape(shape.as_ref(), DEFAULT_VALIDATION_POINTS);
        if let Some(v) = report.violations().first() {
            return Err(ProfileError::Inadmissible(*v));
        }
        let x_star = locate_x_star(shape.as_ref())?;
        Ok(Self {
            name,
            f_at_x_star: shape.value(x_star),
            f_prime_at_zero: shape.d1(0.0),
            f_prime_at_half: shape.d1(0.5),
            shape,
            x_star,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> &dyn ShapeFunction {
        self.shape.as_ref()
    }

    #[inline]
    pub fn f(&self, x: f64) -> f64 {
        self.shape.value(x)
    }
    #[inline]
    pub fn f_prime(&self, x: f64) -> f64 {
        self.shape.d1(x)
    }
    #[inline]
    pub fn f_double_prime(&self, x: f64) -> f64 {
        self.shape.d2(x)
    }
    #[inline]
    pub fn f_triple_prime(&self, x: f64) -> f64 {
        self.shape.d3(x)
    }
    #[inline]
    #[allow(non_snake_case)]
    pub fn F(&self, x: f64) -> f64 {
        self.shape.antiderivative(x)
    }
    #[inline]
    pub fn phase_parts(&self, y: f64) -> (f64, f64, f64) {
        self.shape.phase_parts(y)
    }

    /// The zero of `f'` in `(0, 1/2)`.
    pub fn x_star(&self) -> f64 {
        self.x_star
    }
    pub fn f_at_x_star(&self) -> f64 {
        self.f_at_x_star
    }
    /// `f'(0) < 0`; `|f'(0)| = max(-f')` sets the pitchfork time.
    pub fn f_prime_at_zero(&self) -> f64 {
        self.f_prime_at_zero
    }
    /// `max |f| = |f(x_star)|`.
    pub fn max_abs_f(&self) -> f64 {
        abs(self.f_at_x_star)
    }
    /// `max |f'| = max(|f'(0)|, f'(1/2))`.
    pub fn max_abs_f_prime(&self) -> f64 {
        abs(self.f_prime_at_zero).max(abs(self.f_prime_at_half))
    }
    /// `max F - min F = -F(1/2)`.
    pub fn phase_range(&self) -> f64 {
        -self.F(0.5)
    }
}

/// Bisection on `f'` over `[1e-6, 1/2 - 1e-6]` to `1e-12`, then one Newton step.
fn locate_x_star(shape: &dyn ShapeFunction) -> Result<f64, ProfileError> {
    let (lo, hi) = (1e-6, 0.5 - 1e-6);
    if !(shape.d1(lo) < 0.0 && shape.d1(hi) > 0.0) {
        return Err(ProfileError::Inadmissible(Violation::NoCriticalPoint));
    }
    let x = bisect(|x| shape.d1(x), lo, hi, 1e-12)?;
    let d2 = shape.d2(x);
    let polished = if d2 > 0.0 { x - shape.d1(x) / d2 } else { x };
    Ok(if polished > lo && polished < hi && abs(shape.d1(polished)) <= abs(shape.d1(x)) {
        polished
    } else {
        x
    })
}

/// Largest residual of each admissibility condition on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub points: usize,
    pub oddness: f64,
    pub endpoints: f64,
    /// `max f` over the open interval `(0, 1/2)`; admissible shapes have it `<= 0`.
    pub sign: f64,
    /// `max(0, -min f'')` on `[0, 1/2]`.
    pub convexity: f64,
    /// Largest decrease of `f'` between neighbouring grid points on `[0, 1/2]`.
    pub derivative_monotonicity: f64,
    /// `max |F'(x) - f(x)|` with `F'` by central differences.
    pub antiderivative: f64,
    pub antiderivative_parity: f64,
    /// Largest relative disagreement of `f', f'', f'''` with central differences.
    pub derivative_consistency: f64,
    pub scale: f64,
}

impl ValidationReport {
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let tol = 1e-9 * (1.0 + self.scale);
        if self.oddness > tol {
            v.push(Violation::Oddness);
        }
        if self.endpoints > tol {
            v.push(Violation::EndpointValues);
        }
        if self.sign > 1e-10 * (1.0 + self.scale) {
            v.push(Violation::Sign);
        }
        if self.convexity > CONVEXITY_SLACK {
            v.push(Violation::Convexity);
        }
        if self.derivative_monotonicity > CONVEXITY_SLACK {
            v.push(Violation::DerivativeMonotonicity);
        }
        if self.antiderivative > 1e-6 * (1.0 + self.scale) {
            v.push(Violation::AntiderivativeMismatch);
        }
        if self.antiderivative_parity > tol {
            v.push(Violation::AntiderivativeParity);
        }
        if self.derivative_consistency > 1e-4 {
            v.push(Violation::DerivativeMismatch);
        }
        v
    }

    pub fn is_admissible(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Checks every admissibility condition of `p` on `points` grid intervals of `[0, 1/2]`.
pub fn validate_profile(p: &Profile, points: usize) -> ValidationReport {
    validate_shape(p.shape(), points)
}

fn validate_shape(s: &dyn ShapeFunction, points: usize) -> ValidationReport {
    let n = points.max(8);
    let dx = 0.5 / n as f64;
    let fd = 1e-5;
    let mut r = ValidationReport {
        points: n,
        oddness: 0.0,
        endpoints: abs(s.value(0.0)).max(abs(s.value(0.5))),
        sign: f64::NEG_INFINITY,
        convexity: 0.0,
        derivative_monotonicity: 0.0,
        antiderivative: 0.0,
        antiderivative_parity: abs(s.antiderivative(0.5) - s.antiderivative(-0.5)),
        derivative_consistency: 0.0,
        scale: 0.0,
    };
    let mut prev_d1 = s.d1(0.0);
    let mut d_scale = [0.0f64; 3];
    let mut d_err = [0.0f64; 3];
    for j in 0..=n {
        let x = j as f64 * dx;
        let f = s.value(x);
        r.scale = r.scale.max(abs(f));
        r.oddness = r.oddness.max(abs(f + s.value(-x)));
        if j > 0 && j < n {
            r.sign = r.sign.max(f);
        }
        let d1 = s.d1(x);
        let d2 = s.d2(x);
        r.convexity = r.convexity.max(-d2);
        if j > 0 {
            r.derivative_monotonicity = r.derivative_monotonicity.max(prev_d1 - d1);
        }
        prev_d1 = d1;
        let big_f_fd = (s.antiderivative(x + fd) - s.antiderivative(x - fd)) / (2.0 * fd);
        r.antiderivative = r.antiderivative.max(abs(big_f_fd - f));
        r.antiderivative_parity = r
            .antiderivative_parity
            .max(abs(s.antiderivative(x) - s.antiderivative(-x)));
        let fds = [
            (s.value(x + fd) - s.value(x - fd)) / (2.0 * fd),
            (s.d1(x + fd) - s.d1(x - fd)) / (2.0 * fd),
            (s.d2(x + fd) - s.d2(x - fd)) / (2.0 * fd),
        ];
        let exact = [d1, d2, s.d3(x)];
        for i in 0..3 {
            d_scale[i] = d_scale[i].max(abs(exact[i]));
            d_err[i] = d_err[i].max(abs(fds[i] - exact[i]));
        }
    }
    r.sign = r.sign.max(0.0);
    r.derivative_consistency = (0..3)
        .map(|i| d_err[i] / (1.0 + d_scale[i]))
        .fold(0.0, f64::max);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_scalar;

    fn sine_closures() -> ProfileClosures {
        ProfileClosures::new(|x| -TAU * sin(TAU * x))
    }

    #[test]
    fn sine_profile_values() {
        let p = make_sine_profile();
        assert!((p.f(0.25) + TAU).abs() < 1e-14);
        assert_eq!(p.x_star(), 0.25);
        assert!(p.f(0.0).abs() < 1e-15 && p.f(0.5).abs() < 1e-14);
        assert!((p.f_prime_at_zero() + 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn sine_antiderivative_matches_quadrature() {
        let p = make_sine_profile();
        // closed form cos(π) - 1
        assert!((p.F(0.5) + 2.0).abs() < 1e-14);
        let q = integrate_scalar(|s| p.f(s), 0.0, 0.5, 1e-14, 0.0).unwrap();
        assert!((q + 2.0).abs() < 1e-13);
    }

    #[test]
    fn sine_profile_validates_cleanly() {
        let r = validate_profile(&make_sine_profile(), DEFAULT_VALIDATION_POINTS);
        assert!(r.oddness < 1e-12, "{r:?}");
        assert!(r.endpoints < 1e-12);
        assert!(r.sign <= 1e-12);
        assert!(r.convexity < 1e-12);
        assert!(r.derivative_monotonicity < 1e-12);
        assert!(r.antiderivative_parity < 1e-12);
        assert!(r.is_admissible());
    }

    #[test]
    fn closure_profile_matches_builtin() {
        let p = make_custom_profile(CustomShape::Closures(sine_closures())).unwrap();
        let s = make_sine_profile();
        assert!((p.x_star() - s.x_star()).abs() < 1e-12);
        for j in 0..=200 {
            let x = -0.7 + j as f64 * 0.007;
            assert!((p.f(x) - s.f(x)).abs() < 1e-12);
            // derivatives come from the spectral fit, so compare against max |f'|
            assert!((p.f_prime(x) - s.f_prime(x)).abs() < 1e-12 * s.max_abs_f_prime(), "{x}: {} {}", p.f_prime(x), s.f_prime(x));
            assert!((p.F(x) - s.F(x)).abs() < 1e-12, "F at {x}: {} vs {}", p.F(x), s.F(x));
        }
    }

    #[test]
    fn rescaled_sine_has_quarter_critical_point() {
        let p = make_custom_profile(CustomShape::SineSeries(vec![1.0, 0.0])).unwrap();
        assert!((p.x_star() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn two_mode_profile_critical_point_by_grid_scan() {
        let p = make_custom_profile(CustomShape::SineSeries(vec![1.0, 0.05])).unwrap();
        assert!(p.f_prime(p.x_star()).abs() < 1e-10);
        // independent oracle: sign change of f' on a dense grid
        let n = 100_000;
        let mut bracket = None;
        for j in 0..n {
            let (a, b) = (0.5 * j as f64 / n as f64, 0.5 * (j + 1) as f64 / n as f64);
            let fa = -TAU * (TAU * a).cos() - 0.05 * 2.0 * TAU * (2.0 * TAU * a).cos();
            let fb = -TAU * (TAU * b).cos() - 0.05 * 2.0 * TAU * (2.0 * TAU * b).cos();
            if fa < 0.0 && fb >= 0.0 {
                bracket = Some((a, b));
                break;
            }
        }
        let (a, b) = bracket.unwrap();
        assert!(p.x_star() >= a - 1e-12 && p.x_star() <= b + 1e-12);
        let r = validate_profile(&p, DEFAULT_VALIDATION_POINTS);
        assert!(r.convexity < 1e-12);
    }

    #[test]
    fn wrong_sign_is_flagged() {
        let err = make_custom_profile(CustomShape::Closures(
            ProfileClosures::new(|x| sin(TAU * x)),
        ))
        .unwrap_err();
        assert!(matches!(err, ProfileError::Inadmissible(_)));
        let shape = SineSeries::new(vec![-1.0]);
        let r = validate_shape(&shape, DEFAULT_VALIDATION_POINTS);
        assert!(r.violations().contains(&Violation::Sign));
    }

    #[test]
    fn non_convex_is_flagged() {
        // -sin(6πx) = -Σ a_n sin(2πnx) with a_3 = 1
        let shape = SineSeries::new(vec![0.0, 0.0, 1.0]);
        let r = validate_shape(&shape, DEFAULT_VALIDATION_POINTS);
        // oracle: f''(x) = (6π)² sin(6πx) is negative at x = 0.25
        assert!(shape.d2(0.25) < 0.0);
        assert!(r.violations().contains(&Violation::Convexity));
        assert!(matches!(
            make_custom_profile(CustomShape::SineSeries(vec![0.0, 0.0, 1.0])),
            Err(ProfileError::Inadmissible(_))
        ));
    }

    #[test]
    fn samples_reproduce_series() {
        let n = 256;
        let samples: Vec<f64> = (0..n)
            .map(|j| {
                let x = -0.5 + j as f64 / n as f64;
                -sin(TAU * x) - 0.05 * sin(2.0 * TAU * x)
            })
            .collect();
        let p = make_custom_profile(CustomShape::Samples(samples)).unwrap();
        let q = make_custom_profile(CustomShape::SineSeries(vec![1.0, 0.05])).unwrap();
        assert!((p.x_star() - q.x_star()).abs() < 1e-12);
        assert!((p.F(0.3) - q.F(0.3)).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_differentiates_to_f() {
        let p = make_custom_profile(CustomShape::SineSeries(vec![1.0, 0.05])).unwrap();
        for h in [1e-2, 5e-3] {
            let err = (0..50)
                .map(|j| {
                    let x = 0.01 * j as f64;
                    ((p.F(x + h) - p.F(x - h)) / (2.0 * h) - p.f(x)).abs()
                })
                .fold(0.0, f64::max);
            // O(h^2): f''' ~ (2π)^3 · 1.4, err <= h^2/6 · max|f'''|
            assert!(err < h * h / 6.0 * 400.0, "h={h} err={err}");
        }
    }

    #[test]
    fn poincare_saturation_of_sine() {
        let p = make_sine_profile();
        let k2 = integrate_scalar(|x| 0.5 * p.f(x) * p.f(x), -0.5, 0.5, 1e-14, 0.0).unwrap();
        let e2 = integrate_scalar(|x| 0.5 * p.f_prime(x) * p.f_prime(x), -0.5, 0.5, 1e-14, 0.0).unwrap();
        assert!((e2 - 4.0 * PI * PI * k2).abs() < 1e-10 * e2);
    }

    #[test]
    fn empty_series_rejected() {
        assert_eq!(
            make_custom_profile(CustomShape::SineSeries(vec![0.0])).unwrap_err(),
            ProfileError::EmptySeries
        );
    }
}
