// Platform-independent elementary functions.

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
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

/// `(cosh(t·√d), sinh(t·√d)/√d)` for any real `d`.
///
/// For `d < 0` this is the trigonometric branch `(cos(t·√-d), sin(t·√-d)/√-d)`;
/// at `d = 0` the second entry is `t`.
pub fn cosh_sinhc(t: f64, d: f64) -> (f64, f64) {
    let x2 = t * t * d;
    if x2.abs() < 1e-8 {
        // Taylor expansion around x = 0, accurate to O(x^6).
        let c = 1.0 + x2 / 2.0 + x2 * x2 / 24.0;
        let s = t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
        return (c, s);
    }
    if d > 0.0 {
        let w = sqrt(d);
        (cosh(t * w), sinh(t * w) / w)
    } else {
        let w = sqrt(-d);
        (cos(t * w), sin(t * w) / w)
    }
}
