//! Regret prefactors of √T for the Stein learner and its baselines, and the
//! gaps between them.

use crate::error::{Error, Result};
use crate::specfn::normal::{self, cdf_integral};
use crate::targets::TargetFunction;

/// All prefactors at one (u, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prefactors {
    pub u: f64,
    pub alpha: f64,
    pub gamma_huber: f64,
    pub gamma_ogd: f64,
    pub gamma_lse: f64,
    pub gamma_mwu: f64,
    pub gamma_sth: f64,
    pub gap_ogd: f64,
    pub gap_mwu: f64,
}

pub fn prefactors(u: f64, alpha: f64) -> Result<Prefactors> {
    check(u, alpha)?;
    Ok(Prefactors {
        u,
        alpha,
        gamma_huber: gamma_huber(u, alpha),
        gamma_ogd: gamma_ogd(u, alpha),
        gamma_lse: gamma_lse(u, alpha),
        gamma_mwu: gamma_mwu(u, alpha),
        gamma_sth: gamma_sth(u, alpha),
        gap_ogd: gap_ogd(alpha),
        gap_mwu: gap_mwu(alpha),
    })
}

fn check(u: f64, alpha: f64) -> Result<()> {
    if !(u.abs() <= 1.0) {
        return Err(Error::domain(
            "prefactors",
            format!("u must lie in [-1, 1], got {u}"),
        ));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(
            "prefactors",
            format!("alpha must be positive, got {alpha}"),
        ));
    }
    Ok(())
}

/// u²/(2α) + (α + 1/α)Φ(1/α) + φ(1/α) - α/2 - 1/α
pub fn gamma_huber(u: f64, alpha: f64) -> f64 {
    let x = 1.0 / alpha;
    u * u / (2.0 * alpha) + (alpha + x) * normal::cdf(x) + normal::pdf(x) - 0.5 * alpha - x
}

/// ½(u²/α + α)
pub fn gamma_ogd(u: f64, alpha: f64) -> f64 {
    0.5 * (u * u / alpha + alpha)
}

/// [(1+u)ln(1+u) + (1-u)ln(1-u)]/(2α) + E[ln cosh(αZ)]/α
pub fn gamma_lse(u: f64, alpha: f64) -> f64 {
    entropy_term(u, alpha) + log_cosh_mean(alpha)
}

/// [(1+u)ln(1+u) + (1-u)ln(1-u)]/(2α) + α/2
pub fn gamma_mwu(u: f64, alpha: f64) -> f64 {
    entropy_term(u, alpha) + 0.5 * alpha
}

/// |u|/α + (2/α)Φ(1/α) + 2φ(1/α) - 2/α, evaluated as |u|/α + 2Ψ(-1/α) with
/// Ψ(x) = xΦ(x) + φ(x).
pub fn gamma_sth(u: f64, alpha: f64) -> f64 {
    u.abs() / alpha + 2.0 * cdf_integral(-1.0 / alpha)
}

/// γ_OGD - γ_Huber = (α + 1/α)(1 - Φ(1/α)) - φ(1/α), written as
/// φ(x)[(x + 1/x)m(x) - 1] with x = 1/α and m the Mills ratio.
pub fn gap_ogd(alpha: f64) -> f64 {
    let x = 1.0 / alpha;
    normal::pdf(x) * ((x + alpha) * normal::mills(x) - 1.0)
}

/// γ_MWU - γ_LSE = α/2 - E[ln cosh(αZ)]/α
pub fn gap_mwu(alpha: f64) -> f64 {
    0.5 * alpha - log_cosh_mean(alpha)
}

fn entropy_term(u: f64, alpha: f64) -> f64 {
    TargetFunction::LogCosh { eta: alpha }
        .conjugate_at_neg(u)
        .expect("u checked by caller")
}

/// E[ln cosh(αZ)]/α
fn log_cosh_mean(alpha: f64) -> f64 {
    TargetFunction::LogCosh { eta: alpha }.gaussian_expectation(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::normal::SQRT_2_OVER_PI;

    #[test]
    fn gap_ogd_positive() {
        for a in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            assert!(gap_ogd(a) > 0.0, "alpha={a}");
            let direct = (a + 1.0 / a) * (1.0 - normal::cdf(1.0 / a)) - normal::pdf(1.0 / a);
            assert!((gap_ogd(a) - direct).abs() < 1e-14);
            assert!((gap_ogd(a) - (gamma_ogd(0.3, a) - gamma_huber(0.3, a))).abs() < 1e-12);
        }
    }

    #[test]
    fn huber_large_alpha_limit() {
        for u in [-1.0, 0.0, 0.4, 1.0] {
            assert!((gamma_huber(u, 1e3) - SQRT_2_OVER_PI).abs() < 1e-3);
        }
    }

    #[test]
    fn sth_endpoint_difference() {
        for a in [0.2, 1.0, 7.0] {
            assert!((gamma_sth(0.0, a) - gamma_sth(1.0, a) + 1.0 / a).abs() < 1e-14);
            let direct = (2.0 / a) * normal::cdf(1.0 / a) + 2.0 * normal::pdf(1.0 / a) - 2.0 / a;
            assert!((gamma_sth(0.0, a) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(prefactors(1.5, 1.0).is_err());
        assert!(prefactors(0.0, 0.0).is_err());
    }
}
