//! Single-round decisions x_t = E_Z[f_{s,ρ_{t-1},h}(s + ρ_t Z)].
//!
//! The generic path integrates out the Stein solution:
//! x_t = -∫₀¹ E_Z[h'(s + √(ρ²_{t-1} - u² c_t) Z)] du, evaluated with u = sin θ
//! by adaptive Gauss–Kronrod so that the last round (ρ²_{t-1} = c_t), where
//! the inner scale vanishes at u = 1, stays smooth. Abs and Huber targets
//! additionally have closed forms in terms of Φ, φ and Owen's T.
//!
//! The functions here return the raw value; [`decide`] clamps it to [-1, 1].

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use crate::error::{Error, Result};
use crate::specfn::normal::{self, cdf_integral, SQRT_2PI};
use crate::specfn::owens_t;
use crate::specfn::quadrature::integrate_adaptive;
use crate::stein::SteinSolution;
use crate::targets::TargetFunction;

/// Inner scales below this are treated as a point mass.
pub const DEGENERATE_SCALE: f64 = 1e-12;
/// Relative gap ρ²_{t-1} - c_t below which the last-round formulas apply.
const LAST_ROUND_REL: f64 = 1e-14;
const GENERIC_ABS_TOL: f64 = 1e-11;
const GENERIC_REL_TOL: f64 = 1e-10;

/// Everything one round's decision depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundState {
    /// s_{t-1} = g_1 + … + g_{t-1}
    pub s_prev: f64,
    /// ρ²_{t-1}
    pub var_prev: f64,
    /// c_t = ρ²_{t-1} - ρ²_t
    pub c: f64,
}

impl RoundState {
    pub fn new(s_prev: f64, var_prev: f64, c: f64) -> Result<Self> {
        let st = RoundState {
            s_prev,
            var_prev,
            c,
        };
        st.validate()?;
        Ok(st)
    }

    /// From ρ_{t-1} and ρ_t rather than variances.
    pub fn from_rho(s_prev: f64, rho_prev: f64, rho: f64) -> Result<Self> {
        Self::new(s_prev, rho_prev * rho_prev, rho_prev * rho_prev - rho * rho)
    }

    pub fn rho_prev(&self) -> f64 {
        self.var_prev.sqrt()
    }

    /// ρ_t
    pub fn rho(&self) -> f64 {
        (self.var_prev - self.c).max(0.0).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s_prev.is_finite() {
            return Err(Error::Numeric(format!(
                "running sum is not finite: {}",
                self.s_prev
            )));
        }
        if !(self.var_prev > 0.0 && self.var_prev.is_finite()) {
            return Err(Error::Schedule(format!(
                "rho_(t-1)^2 must be positive and finite, got {}",
                self.var_prev
            )));
        }
        if !(self.c >= 0.0 && self.c <= self.var_prev) {
            return Err(Error::Schedule(format!(
                "increment c_t = {} must lie in [0, rho_(t-1)^2 = {}]",
                self.c, self.var_prev
            )));
        }
        Ok(())
    }

    fn is_last_round(&self) -> bool {
        self.var_prev - self.c <= LAST_ROUND_REL * self.var_prev
    }
}

/// The decision in [-1, 1]. Uses a closed form for Abs and Huber targets and
/// the generic integral otherwise.
pub fn decide(target: &TargetFunction, st: &RoundState) -> Result<f64> {
    st.validate()?;
    let raw = match *target {
        TargetFunction::Abs => closed_abs(st),
        TargetFunction::Huber { k } => closed_huber(k, st),
        _ => generic_raw(target, st),
    };
    finish(raw)
}

/// Closed form for h = |x| (unclamped).
pub fn decide_closed_abs(st: &RoundState) -> Result<f64> {
    st.validate()?;
    Ok(closed_abs(st))
}

/// Closed form for the Huber target with parameter k (unclamped).
pub fn decide_closed_huber(k: f64, st: &RoundState) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain(
            "decide_closed_huber",
            format!("k must be positive, got {k}"),
        ));
    }
    st.validate()?;
    Ok(closed_huber(k, st))
}

/// Generic integral path for any target (unclamped).
pub fn decide_generic(target: &TargetFunction, st: &RoundState) -> Result<f64> {
    st.validate()?;
    Ok(generic_raw(target, st))
}

/// Coefficient k·erf(1/(√2 k ρ)) multiplying -s in the Huber decision's
/// linear zone.
pub fn effective_learning_rate(k: f64, rho: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) || !(rho > 0.0) {
        return Err(Error::domain(
            "effective_learning_rate",
            format!("k and rho must be positive, got k={k}, rho={rho}"),
        ));
    }
    Ok(k * normal::erf(1.0 / (SQRT_2 * k * rho)))
}

pub(crate) fn finish(raw: f64) -> Result<f64> {
    if raw.is_finite() {
        Ok(raw.clamp(-1.0, 1.0))
    } else {
        Err(Error::Numeric(format!("decision evaluated to {raw}")))
    }
}

pub(crate) fn generic_raw(target: &TargetFunction, st: &RoundState) -> f64 {
    let (s, v, c) = (st.s_prev, st.var_prev, st.c);
    let integrand = |theta: f64| {
        let (sn, cs) = theta.sin_cos();
        let scale = (v - sn * sn * c).max(0.0).sqrt();
        let inner = if scale < DEGENERATE_SCALE {
            target.derivative(s)
        } else {
            target.derivative_expectation(s, scale)
        };
        inner * cs
    };
    -integrate_adaptive(integrand, 0.0, FRAC_PI_2, GENERIC_ABS_TOL, GENERIC_REL_TOL)
}

fn closed_abs(st: &RoundState) -> f64 {
    let (s, v, c) = (st.s_prev, st.var_prev, st.c);
    let sigma = v.sqrt();
    if c == 0.0 {
        return -normal::erf(s / (SQRT_2 * sigma));
    }
    if st.is_last_round() {
        return last_round_abs(s / sigma);
    }
    gaussian_sign_integral(s, v, c)
}

/// f_{s,ρ,|·|}(s) with a = s/ρ: 1 - √(2π)Ψ(a) for s ≤ 0 and
/// -1 + √(2π)Ψ(-a) for s > 0.
fn last_round_abs(a: f64) -> f64 {
    if a <= 0.0 {
        1.0 - SQRT_2PI * cdf_integral(a)
    } else {
        -1.0 + SQRT_2PI * cdf_integral(-a)
    }
}

/// -∫₀¹ E[sign(μ + √(σ² - u²c) Z)] du for 0 < c < σ².
fn gaussian_sign_integral(mu: f64, var: f64, c: f64) -> f64 {
    let sigma = var.sqrt();
    let rest = (var - c).sqrt();
    let sc = c.sqrt();
    let a = mu / sigma;
    let q = sc / rest;
    // 1 - 2Φ(y) = -erf(y/√2) keeps small arguments exact
    let one_minus_2cdf = |y: f64| -normal::erf(y / SQRT_2);
    one_minus_2cdf(mu / rest)
        - SQRT_2PI * sigma / sc * normal::pdf(a) * one_minus_2cdf(a * q)
        - 2.0 * SQRT_2PI * mu / sc * owens_t(a, q)
}

/// Companion of [`gaussian_sign_integral`] that accounts for the linear zone
/// of the Huber derivative in [`closed_huber`].
fn gaussian_linear_integral(mu: f64, var: f64, c: f64) -> f64 {
    let sigma = var.sqrt();
    let rest = (var - c).sqrt();
    let sc = c.sqrt();
    let a = mu / sigma;
    let q = sc / rest;
    rest * normal::pdf(mu / rest)
        + SQRT_2PI * mu * sigma / sc * normal::pdf(a) * (0.5 * normal::erf(a * q / SQRT_2))
        + SQRT_2PI / sc * (var - mu * mu) * owens_t(a, q)
}

fn closed_huber(k: f64, st: &RoundState) -> f64 {
    let (s, v, c) = (st.s_prev, st.var_prev, st.c);
    let h = TargetFunction::Huber { k };
    if c == 0.0 {
        return -h.derivative_expectation(s, v.sqrt());
    }
    if st.is_last_round() {
        return SteinSolution::solve(s, v.sqrt(), h)
            .expect("positive scale")
            .eval(s);
    }
    let inv = 1.0 / k;
    let r3 = |m: f64| gaussian_sign_integral(m, v, c);
    let r4 = |m: f64| gaussian_linear_integral(m, v, c);
    0.5 * ((1.0 - k * s) * r3(s - inv)
        + (1.0 + k * s) * r3(s + inv)
        + k * (r4(s - inv) - r4(s + inv)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: f64, v: f64, c: f64) -> RoundState {
        RoundState::new(s, v, c).unwrap()
    }

    #[test]
    fn symmetric_start_is_zero() {
        assert_eq!(
            decide(&TargetFunction::Abs, &st(0.0, 5.0, 0.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn abs_no_increment() {
        let x = decide(&TargetFunction::Abs, &st(2.0, 4.0, 0.0)).unwrap();
        assert!((x - (1.0 - 2.0 * normal::cdf(1.0))).abs() < 1e-15);
        assert!((x + 0.682_689_492_1).abs() < 1e-10);
    }

    #[test]
    fn abs_last_round() {
        assert_eq!(decide_closed_abs(&st(0.0, 1.0, 1.0)).unwrap(), 0.0);
        let a: f64 = 0.5;
        let r = (std::f64::consts::PI / 2.0).sqrt();
        let expect =
            -(1.0 + r * a - r * a * (2.0 * normal::cdf(a) - 1.0) - SQRT_2PI * normal::pdf(a));
        let x = decide_closed_abs(&st(0.5, 1.0, 1.0)).unwrap();
        assert!((x - expect).abs() < 1e-15, "{x} vs {expect}");
    }

    #[test]
    fn abs_general_case_matches_generic() {
        let s = st(1.5, 10.0, 1.0);
        let a = decide_closed_abs(&s).unwrap();
        let g = decide_generic(&TargetFunction::Abs, &s).unwrap();
        assert!((a - g).abs() < 1e-10, "{a} vs {g}");
    }

    #[test]
    fn huber_paths_agree() {
        for &(s, v, c) in &[
            (0.3, 4.0, 1.0),
            (-2.0, 2.0, 0.5),
            (5.0, 9.0, 9.0),
            (1.0, 3.0, 0.0),
            (0.01, 1.0, 1.0),
        ] {
            for &k in &[0.5, 1.0, 3.0] {
                let state = st(s, v, c);
                let a = decide_closed_huber(k, &state).unwrap();
                let g = decide_generic(&TargetFunction::Huber { k }, &state).unwrap();
                assert!((a - g).abs() < 1e-10, "k={k} {state:?}: {a} vs {g}");
            }
        }
    }

    #[test]
    fn effective_rate() {
        let r = effective_learning_rate(1.0, 1.0).unwrap();
        assert!((r - (2.0 * normal::cdf(1.0) - 1.0)).abs() < 1e-15);
        assert!(effective_learning_rate(2.0, 1e12).unwrap() < 1e-11);
        assert!((effective_learning_rate(2.0, 1e-12).unwrap() - 2.0).abs() < 1e-15);
        assert!(effective_learning_rate(0.0, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_state() {
        assert!(RoundState::new(0.0, 0.0, 0.0).is_err());
        assert!(RoundState::new(0.0, 1.0, 1.5).is_err());
        assert!(RoundState::new(f64::NAN, 1.0, 0.5).is_err());
    }
}
