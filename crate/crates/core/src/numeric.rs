//! Small numerical kernels shared by the analysis modules.

use crate::error::{Error, Result};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_DEPTH: u32 = 50;
    // Start from a uniform split so narrow peaks are not missed by the first estimate.
    const PIECES: usize = 16;
    let h = (b - a) / PIECES as f64;
    let mut total = 0.0;
    for i in 0..PIECES {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (flo, fhi) = (f(lo), f(hi));
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += simpson_step(&f, lo, hi, flo, fmid, fhi, whole, tol / PIECES as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            detail: format!("interval [{a}, {b}] error estimate {delta:e}"),
        });
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Adaptive Simpson with a local relative criterion, for integrands whose
/// magnitude is not known in advance. `abs_floor` stops refinement on
/// regions that contribute nothing.
pub fn adaptive_simpson_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_floor: f64) -> Result<f64> {
    const PIECES: usize = 16;
    let h = (b - a) / PIECES as f64;
    let mut total = 0.0;
    for i in 0..PIECES {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += simpson_rel_step(&f, lo, hi, flo, fmid, fhi, whole, rel_tol, abs_floor, 50)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rel_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    rel_tol: f64,
    abs_floor: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * (rel_tol * (left + right).abs()).max(abs_floor) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            detail: format!("interval [{a}, {b}] error estimate {delta:e}"),
        });
    }
    Ok(
        simpson_rel_step(f, a, m, fa, flm, fm, left, rel_tol, 0.5 * abs_floor, depth - 1)?
            + simpson_rel_step(f, m, b, fm, frm, fb, right, rel_tol, 0.5 * abs_floor, depth - 1)?,
    )
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
///
/// Stops when the bracket width falls below `rel_tol` times its midpoint.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..500 {
        if hi - lo <= rel_tol * 0.5 * (hi + lo).abs() {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Bisection for the sign change of `f` on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, abs_tol: f64) -> f64 {
    let lo_sign = f(lo) > 0.0;
    while hi - lo > abs_tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_gaussian() {
        let v = adaptive_simpson(|x| (-x * x).exp(), -10.0, 10.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let x = golden_section(|x| (x - 0.7).powi(2) + 3.0, 0.0, 5.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-6);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-13);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
