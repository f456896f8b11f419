//! Gaussian tail functions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF, `Phi(x) = Q(-x)`.
pub fn normal_cdf(x: f64) -> f64 {
    q_function(-x)
}

/// Gaussian complementary tail `Q(x) = P[Z > x]`.
///
/// Evaluated through `erfc` so that deep tails keep full relative precision.
pub fn q_function(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of [`q_function`] on `(0, 1)`.
///
/// Newton iteration on `log Q` inside a bracket that shrinks every step; the
/// bracket fallback keeps the iteration safe far in the tails.
pub fn q_inverse(p: f64) -> f64 {
    if !(p > 0.0 && p < 1.0) {
        return if p <= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    if p > 0.5 {
        return -q_inverse(1.0 - p);
    }
    // Q is decreasing; for p <= 0.5 the root lies in [0, 40].
    let (mut lo, mut hi) = (0.0_f64, 40.0_f64);
    let target = p.ln();
    let mut x = (-2.0 * p.ln()).sqrt().min(39.0);
    for _ in 0..200 {
        let q = q_function(x);
        let g = q.ln() - target;
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if g.abs() < 1e-15 || hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
        // d/dx ln Q(x) = -phi(x) / Q(x)
        let slope = -normal_pdf(x) / q;
        let mut next = x - g / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    x
}
