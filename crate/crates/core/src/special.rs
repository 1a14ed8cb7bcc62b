//! Bessel functions of the first kind for real non-negative order.
//!
//! `J_ν(x)` is summed from its power series for `x <= SERIES_LIMIT` and from
//! the Hankel asymptotic expansion above it. At the switchover the largest
//! series term is about 3e4 (so cancellation costs ~1e-12) while the smallest
//! asymptotic term is below 1e-12.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::roots::{bisect, first_sign_change};
use crate::{Error, Result};

/// Arguments at or below this value use the power series.
pub const SERIES_LIMIT: f64 = 14.0;

/// Evaluates `J_nu(x)` for `nu >= 0` and `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain { what: "Bessel order", value: nu });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "Bessel argument", value: x });
    }
    Ok(if x <= SERIES_LIMIT { series(nu, x) } else { hankel(nu, x) })
}

/// `J_{1/4}(x)`, the order that appears in the HCM buckling mode.
pub fn bessel_j_quarter(x: f64) -> Result<f64> {
    bessel_j(0.25, x)
}

/// First positive zero of `J_{1/4}`, located by scanning for a sign change
/// and bisecting to machine precision.
pub fn first_zero_j_quarter() -> Result<f64> {
    let f = |x: f64| series(0.25, x);
    let (a, b) = first_sign_change(f, 0.5, SERIES_LIMIT, 0.25)
        .ok_or(Error::RootNotFound { what: "no sign change of J_1/4 below the series limit" })?;
    bisect(f, a, b, 1e-15)
}

pub(crate) fn series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = libm::pow(half, nu) / libm::tgamma(nu + 1.0);
    let mut sum = term;
    let mut k = 1.0;
    // terms grow until k ~ x/2, then decay factorially
    while k < 500.0 {
        term *= q / (k * (nu + k));
        sum += term;
        if k > half && libm::fabs(term) <= 1e-17 * libm::fabs(sum) {
            break;
        }
        k += 1.0;
    }
    sum
}

fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev_mag = f64::INFINITY;
    let mut k = 1u32;
    while k < 200 {
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        let mag = libm::fabs(term);
        // asymptotic series: stop at the smallest term
        if mag > prev_mag || mag < 1e-17 {
            break;
        }
        prev_mag = mag;
        // a_k / x^k enters P for even k, Q for odd k, with alternating sign
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        k += 1;
    }
    let chi = x - (0.5 * nu * PI + FRAC_PI_4);
    libm::sqrt(1.0 / (FRAC_PI_2 * x)) * (p * libm::cos(chi) - q * libm::sin(chi))
}

#[cfg(test)]
mod tests {
    use super::*;

    // J_{1/4}(x) from a 30-digit arbitrary-precision evaluation.
    const REFERENCE: [(f64, f64); 14] = [
        (0.1, 0.520_657_875_630_456_7),
        (0.5, 0.741_656_570_157_146),
        (1.0, 0.752_231_333_340_790_1),
        (2.0, 0.397_811_064_338_178_37),
        (2.7809, -0.000_005_904_392_650_619_172),
        (5.0, -0.280_972_065_761_376),
        (10.0, -0.206_393_786_855_172_82),
        (12.0, -0.041_552_439_750_366_53),
        (14.0, 0.206_625_734_411_039_87),
        (15.0, 0.065_084_575_573_504_8),
        (20.0, 0.178_298_338_534_274_9),
        (30.0, -0.124_604_430_008_803_75),
        (40.0, 0.054_911_752_342_599_734),
        (50.0, 0.014_106_062_680_889_887),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, want) in REFERENCE {
            let got = bessel_j_quarter(x).unwrap();
            assert!((got - want).abs() < 1e-10, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_at_origin() {
        assert_eq!(bessel_j_quarter(0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn leading_term_for_small_argument() {
        let x: f64 = 1e-4;
        let lead = libm::pow(x / 2.0, 0.25) / libm::tgamma(1.25);
        let got = bessel_j_quarter(x).unwrap();
        assert!(((got - lead) / lead).abs() < 1e-8);
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(bessel_j_quarter(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn branches_agree_near_switchover() {
        for x in [13.0, 14.0, 15.0, 16.0] {
            let s = series(0.25, x);
            let h = hankel(0.25, x);
            assert!((s - h).abs() < 1e-10, "x = {x}: series {s} hankel {h}");
            let s = series(1.25, x);
            let h = hankel(1.25, x);
            assert!((s - h).abs() < 1e-10, "order 5/4, x = {x}: series {s} hankel {h}");
        }
    }

    #[test]
    fn recurrence_links_neighbouring_orders() {
        // J_{ν-1} + J_{ν+1} = (2ν/x) J_ν, checked with ν = 5/4 on both branches
        for x in [0.7, 3.0, 9.0, 22.0, 45.0] {
            let lhs = bessel_j(0.25, x).unwrap() + bessel_j(2.25, x).unwrap();
            let rhs = 2.5 / x * bessel_j(1.25, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn first_zero() {
        let z = first_zero_j_quarter().unwrap();
        assert!((z - 2.780_887_723_994_977_6).abs() < 1e-13);
        assert!(bessel_j_quarter(z).unwrap().abs() < 1e-14);
    }
}
