//! Imaginary error function erfi(x) = (2/√π)∫₀ˣ e^{z²} dz and its inverse on
//! the nonnegative half-line.

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
/// Switch from the power series to the asymptotic expansion.
const ASYMPTOTIC_CUTOFF: f64 = 10.0;
const INVERSE_MAX_ITER: usize = 200;

/// erfi(x). Odd and strictly increasing; overflows to ±∞ near |x| ≈ 26.6.
pub fn erfi(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let a = x.abs();
    let v = if a <= ASYMPTOTIC_CUTOFF {
        series(a)
    } else {
        asymptotic(a)
    };
    v.copysign(x)
}

/// Power series (2/√π) Σ x^{2n+1} / (n!(2n+1)); every term is positive so
/// there is no cancellation.
fn series(x: f64) -> f64 {
    let x2 = x * x;
    // a_n = x^{2n+1}/n!, term_n = a_n/(2n+1)
    let mut a = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        a *= x2 / n;
        let term = a / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}

/// e^{x²}/(√π x) · Σ (2n-1)!!/(2x²)^n, truncated before the terms start to
/// grow.
fn asymptotic(x: f64) -> f64 {
    let inv2x2 = 0.5 / (x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 1.0;
    loop {
        let next = term * (2.0 * n - 1.0) * inv2x2;
        if next >= term || next < sum * 1e-17 {
            break;
        }
        sum += next;
        term = next;
        n += 1.0;
    }
    (x * x).exp() * FRAC_1_SQRT_PI / x * sum
}

/// Inverse of erfi on [0, ∞), by bracketed bisection.
pub fn erfi_inverse(v: f64) -> Result<f64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::domain(
            "erfi_inverse",
            format!("argument must be finite and nonnegative, got {v}"),
        ));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while erfi(hi) < v {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..INVERSE_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if erfi(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
