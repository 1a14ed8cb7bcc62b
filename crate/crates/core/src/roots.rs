//! Bracketed scalar root finding.

use crate::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` by bisection.
///
/// The bracket must contain a sign change. Iteration stops once the bracket
/// is narrower than `x_tol` or `f` evaluates to exactly zero.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotFound { what: "bracket has no sign change" });
    }
    // 200 halvings exhaust the f64 mantissa for any finite bracket.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `[start, end]` in steps of `step` and returns the first bracket
/// `(a, b)` across which `f` changes sign.
pub fn first_sign_change<F>(mut f: F, start: f64, end: f64, step: f64) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut a = start;
    let mut fa = f(a);
    let mut i = 1u32;
    loop {
        let b = start + step * f64::from(i);
        if b > end {
            return None;
        }
        let fb = f(b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            return Some((a, b));
        }
        a = b;
        fa = fb;
        i += 1;
    }
}
