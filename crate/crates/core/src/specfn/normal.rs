//! Standard normal density, distribution function and the tail quantities
//! built from them (Mills ratio, the antiderivative of the CDF).
//!
//! The CDF goes through the FreeBSD `erfc` kernel from `libm`, which is
//! accurate to about one ulp over the whole real line, so upper-tail
//! probabilities keep full relative precision.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// 1/√(2π)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// √(2/π), the mean of |Z|.
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
/// √(2π)
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_2;

/// Beyond this point Ψ and ln Φ take their tail bracket from the Mills
/// continued fraction.
const MILLS_CF_CUTOFF: f64 = 5.0;
/// Below this point the Mills ratio is the quotient (1 - Φ)/φ, whose factors
/// both keep full relative precision; above it φ nears underflow and the
/// continued fraction takes over.
const MILLS_DIRECT_LIMIT: f64 = 30.0;
const MILLS_CF_TERMS: usize = 80;
/// Depth that suffices once x ≥ MILLS_DIRECT_LIMIT.
const MILLS_CF_TERMS_FAR: usize = 16;

/// Standard normal density φ(x).
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function Φ(x).
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail 1 - Φ(x), computed without cancellation.
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Error function, re-exported so callers need only this module.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Density of N(mu, sigma²) at x.
pub fn pdf_scaled(x: f64, mu: f64, sigma: f64) -> f64 {
    pdf((x - mu) / sigma) / sigma
}

/// Mills ratio m(x) = (1 - Φ(x)) / φ(x).
///
/// For large positive x the continued fraction
/// m(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))) is used, which keeps relative
/// accuracy where both numerator and denominator underflow.
pub fn mills(x: f64) -> f64 {
    if x >= MILLS_DIRECT_LIMIT {
        1.0 / (x + mills_cf_tail_depth(x, MILLS_CF_TERMS_FAR))
    } else {
        sf(x) / pdf(x)
    }
}

/// Tail K₁(x) = 1/(x + 2/(x + 3/(x + ...))) of the Mills continued fraction,
/// evaluated backwards from a fixed depth.
fn mills_cf_tail(x: f64) -> f64 {
    mills_cf_tail_depth(x, MILLS_CF_TERMS)
}

fn mills_cf_tail_depth(x: f64, depth: usize) -> f64 {
    let mut tail = 0.0;
    for j in (1..=depth).rev() {
        tail = j as f64 / (x + tail);
    }
    tail
}

/// Ψ(x) = ∫_{-∞}^x Φ(z) dz = xΦ(x) + φ(x).
///
/// Deep in the left tail this is φ(|x|)·(1 - |x| m(|x|)), and the bracket is
/// taken from the continued fraction to avoid cancellation.
pub fn cdf_integral(x: f64) -> f64 {
    if x <= -MILLS_CF_CUTOFF {
        let a = -x;
        let k1 = mills_cf_tail(a);
        let m = 1.0 / (a + k1);
        pdf(a) * k1 * m
    } else {
        x * cdf(x) + pdf(x)
    }
}

/// ln Φ(x), accurate in the far left tail.
pub fn log_cdf(x: f64) -> f64 {
    if x < -MILLS_CF_CUTOFF {
        mills(-x).ln() - 0.5 * x * x - 0.5 * (2.0 * PI).ln()
    } else {
        cdf(x).ln()
    }
}

/// ln Ψ(x) with Ψ from [`cdf_integral`], accurate in the far left tail.
pub fn log_cdf_integral(x: f64) -> f64 {
    if x <= -MILLS_CF_CUTOFF {
        let a = -x;
        let k1 = mills_cf_tail(a);
        let m = 1.0 / (a + k1);
        -0.5 * a * a - 0.5 * (2.0 * PI).ln() + k1.ln() + m.ln()
    } else {
        cdf_integral(x).ln()
    }
}

/// Φ(x)/φ(x), finite for all finite x (it equals m(-x)).
pub fn cdf_over_pdf(x: f64) -> f64 {
    mills(-x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_at_zero_is_half() {
        assert_eq!(cdf(0.0), 0.5);
    }

    #[test]
    fn cdf_upper_limit() {
        assert!(cdf(40.0) >= 1.0 - 1e-300);
        assert!(sf(37.0) > 0.0);
    }

    #[test]
    fn cdf_symmetry() {
        for i in 0..200 {
            let x = -10.0 + 0.1 * i as f64;
            assert!((cdf(-x) - (1.0 - cdf(x))).abs() <= 1e-15);
        }
    }

    #[test]
    fn mills_quotient_matches_continued_fraction() {
        for x in [MILLS_CF_CUTOFF, 12.0, MILLS_DIRECT_LIMIT] {
            let quotient = sf(x) / pdf(x);
            let cf = 1.0 / (x + mills_cf_tail(x));
            assert!(
                (quotient - cf).abs() / cf < 1e-13,
                "x={x}: {quotient} vs {cf}"
            );
        }
        for x in [MILLS_DIRECT_LIMIT, 45.0, 1e3] {
            let full = 1.0 / (x + mills_cf_tail(x));
            assert!((mills(x) - full).abs() / full < 1e-15, "x={x}");
        }
    }

    #[test]
    fn cdf_integral_continuity_at_cutoff() {
        let x = -MILLS_CF_CUTOFF;
        let direct = x * cdf(x) + pdf(x);
        let cf = cdf_integral(x);
        assert!((direct - cf).abs() / cf < 1e-12, "{direct} vs {cf}");
    }

    #[test]
    fn log_forms_match_direct_forms() {
        for &x in &[-4.0, -1.0, 0.0, 2.0] {
            assert!((log_cdf(x) - cdf(x).ln()).abs() < 1e-13);
            assert!((log_cdf_integral(x) - cdf_integral(x).ln()).abs() < 1e-12);
        }
        // deep tail stays finite
        assert!(log_cdf(-60.0).is_finite());
        assert!(log_cdf_integral(-60.0).is_finite());
    }
}
