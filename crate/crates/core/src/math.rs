//! Thin libm shims so the numerical code reads the same with or without std.

pub use core::f64::consts::PI;

pub const TAU: f64 = 2.0 * PI;

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Reduces `x` to the fundamental cell `[-1/2, 1/2)` of the unit circle.
#[inline]
pub fn wrap_to_cell(x: f64) -> f64 {
    let r = x - floor(x + 0.5);
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_stays_in_cell() {
        for &x in &[-3.7, -0.5, 0.0, 0.49, 0.5, 1.25, 17.9] {
            let w = wrap_to_cell(x);
            assert!((-0.5..0.5).contains(&w), "{x} -> {w}");
            assert!(abs(round(x - w) - (x - w)) < 1e-12);
        }
    }
}
