//! Owen's T function T(x, y) = (1/2π) ∫₀^y e^{-x²(1+z²)/2} / (1+z²) dz.

use std::f64::consts::PI;

use super::normal;
use super::quadrature::integrate_adaptive;

const ABS_TOL: f64 = 1e-16;
const REL_TOL: f64 = 1e-13;

/// Owen's T function. `y` may be ±∞.
///
/// For |y| ≤ 1 the defining integral is integrated adaptively. For |y| > 1
/// the reflection T(h, a) = ½(p + q) - pq - T(ah, 1/a) with p = 1 - Φ(h),
/// q = 1 - Φ(ah) moves the work onto [0, 1/a], and y = ∞ reduces to
/// ½[1 - Φ(|x|)].
pub fn owens_t(x: f64, y: f64) -> f64 {
    if y == 0.0 || x.is_nan() || y.is_nan() {
        return if y.is_nan() || x.is_nan() {
            f64::NAN
        } else {
            0.0
        };
    }
    if y < 0.0 {
        return -owens_t(x, -y);
    }
    let h = x.abs();
    if y.is_infinite() {
        return 0.5 * normal::sf(h);
    }
    if y <= 1.0 {
        return integral(h, y);
    }
    let hy = h * y;
    let p = normal::sf(h);
    let q = normal::sf(hy);
    0.5 * (p + q) - p * q - integral(hy, 1.0 / y)
}

fn integral(h: f64, y: f64) -> f64 {
    let h2 = 0.5 * h * h;
    let scale = (-h2).exp() / (2.0 * PI);
    if scale == 0.0 {
        return 0.0;
    }
    let inner = integrate_adaptive(
        |z| (-h2 * z * z).exp() / (1.0 + z * z),
        0.0,
        y,
        ABS_TOL,
        REL_TOL,
    );
    scale * inner
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_second_argument() {
        assert_eq!(owens_t(1.7, 0.0), 0.0);
    }

    #[test]
    fn arctan_case() {
        assert!((owens_t(0.0, 1.0) - 0.125).abs() < 1e-15);
        // T(0, a) = atan(a)/(2π) on both sides of the reflection
        for &a in &[0.3, 2.0, 40.0, 1e6] {
            let expect = f64::atan(a) / (2.0 * PI);
            assert!((owens_t(0.0, a) - expect).abs() < 1e-14, "a={a}");
        }
    }

    #[test]
    fn infinite_y() {
        for &x in &[0.3, 1.0, 2.5] {
            let expect = 0.5 * (1.0 - normal::cdf(x));
            assert!((owens_t(x, f64::INFINITY) - expect).abs() < 1e-15);
            assert!((owens_t(-x, f64::INFINITY) - expect).abs() < 1e-15);
            // large finite y approaches the limit
            assert!((owens_t(x, 1e9) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn continuity_across_reflection() {
        for &x in &[0.0, 0.5, 1.5, 4.0] {
            let below = owens_t(x, 1.0 - 1e-12);
            let above = owens_t(x, 1.0 + 1e-12);
            assert!((below - above).abs() < 1e-12, "x={x}");
        }
    }
}
