//! Optimal loss/regret tradeoff: for a total-loss budget ε√T, the smallest
//! uniform-regret prefactor γ(ε), which solves ∫_{-∞}^{ε-γ} Φ(x) dx = ε/2.

use std::f64::consts::{PI, SQRT_2};

use super::game::GameTranscript;
use super::prefactors::gamma_sth;
use crate::error::{Error, Result};
use crate::specfn::erfi_inverse;
use crate::specfn::normal::{cdf_integral, SQRT_2_OVER_PI};

const BRACKET_WIDTH: f64 = 20.0;
const BISECTION_TOL: f64 = 1e-12;

/// (ε, γ(ε), α) with α = 1/(γ - ε) the soft-threshold scale that attains it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub eps: f64,
    pub gamma: f64,
    /// +∞ at ε = √(2/π), where γ = ε.
    pub alpha: f64,
    /// |Ψ(ε - γ) - ε/2| with Ψ(x) = xΦ(x) + φ(x)
    pub residual: f64,
}

impl TradeoffPoint {
    /// γ_STh(1, α), which equals γ when the solution is exact.
    pub fn gamma_via_soft_threshold(&self) -> f64 {
        if self.alpha.is_infinite() {
            self.eps
        } else {
            gamma_sth(1.0, self.alpha)
        }
    }
}

/// Solves for γ(ε) by bisection on [ε, ε + 20] (widened if ever needed).
pub fn solve_gamma_eps(eps: f64) -> Result<TradeoffPoint> {
    if !(eps > 0.0 && eps <= SQRT_2_OVER_PI) {
        return Err(Error::domain(
            "solve_gamma_eps",
            format!("eps must lie in (0, sqrt(2/pi)], got {eps}"),
        ));
    }
    let f = |gamma: f64| cdf_integral(eps - gamma) - 0.5 * eps;
    let mut lo = eps;
    let gamma = if f(lo) <= 0.0 {
        lo
    } else {
        let mut hi = eps + BRACKET_WIDTH;
        while f(hi) > 0.0 {
            lo = hi;
            hi += BRACKET_WIDTH;
        }
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    Ok(TradeoffPoint {
        eps,
        gamma,
        alpha: 1.0 / (gamma - eps),
        residual: f(gamma).abs(),
    })
}

/// ε + √2·erfi⁻¹(√2/(√π ε)): the prefactor of the comparison bound.
pub fn baseline_prefactor(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(
            "baseline_tradeoff",
            format!("eps must be positive, got {eps}"),
        ));
    }
    Ok(eps + SQRT_2 * erfi_inverse(SQRT_2 / (PI.sqrt() * eps))?)
}

/// ε√T + √(2T)·erfi⁻¹(√2/(√π ε)).
pub fn baseline_tradeoff(eps: f64, horizon: usize) -> Result<f64> {
    Ok(baseline_prefactor(eps)? * (horizon as f64).sqrt())
}

/// Both sides of the two-point equivalence on a 201-point u-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoPointCheck {
    /// Loss_T ≤ a and Reg^unif ≤ b
    pub endpoints: bool,
    /// Reg_T(u) ≤ a + (b - a)|u| for every grid u
    pub regret_line: bool,
}

impl TwoPointCheck {
    pub fn agree(&self) -> bool {
        self.endpoints == self.regret_line
    }
}

pub fn two_point_check(transcript: &GameTranscript, a: f64, b: f64) -> TwoPointCheck {
    let endpoints = transcript.loss_total <= a && transcript.reg_unif() <= b;
    let regret_line = (0..=200).all(|i| {
        let u = (i as f64 - 100.0) / 100.0;
        transcript.regret_at(u) <= a + (b - a) * u.abs()
    });
    TwoPointCheck {
        endpoints,
        regret_line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_of_range_is_fixed_point() {
        let p = solve_gamma_eps(SQRT_2_OVER_PI).unwrap();
        assert!((p.gamma - SQRT_2_OVER_PI).abs() < 1e-8);
        assert!(p.alpha.is_infinite() || p.alpha > 1e6);
    }

    #[test]
    fn residual_and_soft_threshold_consistency() {
        for eps in [1e-6, 0.01, 0.1, 0.3, 0.5, 0.79] {
            let p = solve_gamma_eps(eps).unwrap();
            assert!(p.residual < 1e-10, "eps={eps}");
            assert!(
                (p.gamma_via_soft_threshold() - p.gamma).abs() < 1e-9,
                "eps={eps}"
            );
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(solve_gamma_eps(0.0).is_err());
        assert!(solve_gamma_eps(0.8).is_err());
        assert!(baseline_prefactor(-1.0).is_err());
    }

    #[test]
    fn two_point_zero_loss() {
        let tr = GameTranscript::from_rounds(vec![1.0, -1.0], vec![1.0, 1.0]);
        assert_eq!(tr.loss_total, 0.0);
        let b = tr.reg_unif();
        let c = two_point_check(&tr, 0.0, b);
        assert!(c.endpoints && c.regret_line);
        let c = two_point_check(&tr, -0.1, b);
        assert!(!c.endpoints && !c.regret_line);
    }
}
