//! Variance-budget schedules ρ_0 ≥ ρ_1 ≥ … ≥ ρ_T.

use crate::error::{Error, Result};

/// A fixed schedule ρ_0..ρ_T, stored as variances ρ_t² so that the
/// increments c_t = ρ²_{t-1} - ρ²_t are exact for integer variances.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSchedule {
    var: Vec<f64>,
}

impl RhoSchedule {
    /// Builds a schedule from ρ_0..ρ_T.
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if let Some(bad) = rho.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::Schedule(format!(
                "rho values must be finite and nonnegative, got {bad}"
            )));
        }
        Self::from_variances(rho.iter().map(|r| r * r).collect())
    }

    /// Builds a schedule from ρ_0²..ρ_T².
    pub fn from_variances(var: Vec<f64>) -> Result<Self> {
        validate_variances(&var)?;
        Ok(RhoSchedule { var })
    }

    /// ρ_t = √(T - t).
    pub fn sqrt_horizon(horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Schedule("horizon must be at least 1".into()));
        }
        Self::from_variances((0..=horizon).rev().map(|v| v as f64).collect())
    }

    pub fn horizon(&self) -> usize {
        self.var.len() - 1
    }

    pub fn rho(&self, t: usize) -> f64 {
        self.var[t].sqrt()
    }

    pub fn variance(&self, t: usize) -> f64 {
        self.var[t]
    }

    pub fn variances(&self) -> &[f64] {
        &self.var
    }

    /// c_t = ρ²_{t-1} - ρ²_t for t in 1..=T.
    pub fn increment(&self, t: usize) -> f64 {
        self.var[t - 1] - self.var[t]
    }
}

/// Shorthand for [`RhoSchedule::sqrt_horizon`].
pub fn rho_sqrt_horizon(horizon: usize) -> Result<RhoSchedule> {
    RhoSchedule::sqrt_horizon(horizon)
}

pub(crate) fn validate_variances(var: &[f64]) -> Result<()> {
    if var.len() < 2 {
        return Err(Error::Schedule(
            "a schedule needs rho_0..rho_T with T >= 1".into(),
        ));
    }
    let horizon = var.len() - 1;
    for (t, &v) in var.iter().enumerate() {
        check_next(t, horizon, if t == 0 { None } else { Some(var[t - 1]) }, v)?;
    }
    Ok(())
}

/// Checks a single entry ρ_t² against its predecessor.
pub(crate) fn check_next(t: usize, horizon: usize, prev: Option<f64>, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::Schedule(format!(
            "rho_{t}^2 = {v} is not a finite nonnegative number"
        )));
    }
    if t < horizon && v == 0.0 {
        return Err(Error::Schedule(format!(
            "rho_{t} must be positive before the last round"
        )));
    }
    if let Some(p) = prev {
        if v > p {
            return Err(Error::Schedule(format!(
                "rho_{t}^2 = {v} exceeds rho_{}^2 = {p}",
                t - 1
            )));
        }
    }
    Ok(())
}

/// Chooses ρ_t online from the gradients g_1..g_{t-1}.
///
/// No particular adaptive rule is provided; implementors must return a value
/// in [0, ρ_{t-1}], positive unless t = T.
pub trait RhoPolicy: Send {
    fn next_rho(&mut self, t: usize, rho_prev: f64, past_gradients: &[f64]) -> f64;
}

impl<F> RhoPolicy for F
where
    F: FnMut(usize, f64, &[f64]) -> f64 + Send,
{
    fn next_rho(&mut self, t: usize, rho_prev: f64, past_gradients: &[f64]) -> f64 {
        self(t, rho_prev, past_gradients)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_horizon_has_unit_increments() {
        let s = rho_sqrt_horizon(5).unwrap();
        assert_eq!(s.horizon(), 5);
        assert_eq!(s.rho(0), 5f64.sqrt());
        assert_eq!(s.rho(5), 0.0);
        assert!((1..=5).all(|t| s.increment(t) == 1.0));
    }

    #[test]
    fn rejects_invalid_schedules() {
        assert!(RhoSchedule::new(vec![1.0]).is_err());
        assert!(RhoSchedule::new(vec![1.0, 2.0]).is_err());
        assert!(RhoSchedule::new(vec![1.0, 0.0, 0.0]).is_err());
        assert!(RhoSchedule::new(vec![0.0, 0.0]).is_err());
        assert!(RhoSchedule::new(vec![1.0, f64::NAN]).is_err());
        assert!(RhoSchedule::new(vec![2.0, 1.0, 0.5]).is_ok());
        assert!(rho_sqrt_horizon(0).is_err());
    }
}
