//! Pathwise total-loss bound for the Stein learner and the matching
//! lower-bound reference value.

use super::game::GameTranscript;
use crate::error::{Error, Result};
use crate::olo::RhoSchedule;
use crate::specfn::normal::SQRT_2_OVER_PI;
use crate::targets::TargetFunction;

/// Terms of the pathwise bound
/// Loss_T ≤ -E h(Σg + ρ_T Z) + E h(ρ_0 Z) + Σ_t err_t.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLedger {
    /// -E_Z[h(Σg + ρ_T Z)] + E_Z[h(ρ_0 Z)]
    pub psi_bar_term: f64,
    /// Per round: [√(2/π)·D_t/ρ_{t-1}, (2c_t|g_t| + |g_t|³)/ρ²_{t-1}], where
    /// D_t = max{g_t² - c_t, 0} in convex mode and |g_t² - c_t| otherwise.
    pub err_terms: Vec<[f64; 2]>,
    pub convex_mode: bool,
}

impl BoundLedger {
    pub fn err_total(&self) -> f64 {
        self.err_terms.iter().map(|e| e[0] + e[1]).sum()
    }

    pub fn total(&self) -> f64 {
        self.psi_bar_term + self.err_total()
    }

    /// Whether `loss` respects the bound up to `slack`.
    pub fn holds(&self, loss: f64, slack: f64) -> bool {
        loss <= self.total() + slack
    }
}

/// Bound ledger for a transcript played under `schedule` with target `h`.
/// `convex_mode = false` switches to the |g² - c| error form, valid without
/// convexity of h.
pub fn pathwise_bound(
    transcript: &GameTranscript,
    schedule: &RhoSchedule,
    h: &TargetFunction,
    convex_mode: bool,
) -> Result<BoundLedger> {
    let horizon = transcript.horizon();
    if schedule.horizon() != horizon {
        return Err(Error::config(
            "T",
            format!(
                "schedule covers {} rounds, transcript has {horizon}",
                schedule.horizon()
            ),
        ));
    }
    let psi_bar_term = -h.gaussian_expectation(transcript.s_final, schedule.rho(horizon))
        + h.gaussian_expectation(0.0, schedule.rho(0));
    let err_terms = transcript
        .g
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let t = i + 1;
            let (var_prev, c) = (schedule.variance(t - 1), schedule.increment(t));
            let excess = if convex_mode {
                (g * g - c).max(0.0)
            } else {
                (g * g - c).abs()
            };
            let ag = g.abs();
            [
                SQRT_2_OVER_PI * excess / var_prev.sqrt(),
                (2.0 * c * ag + ag * ag * ag) / var_prev,
            ]
        })
        .collect();
    Ok(BoundLedger {
        psi_bar_term,
        err_terms,
        convex_mode,
    })
}

/// -h(Σg) + E_Z[h(√T Z)]: the lower-bound reference value without its
/// absolute constant.
pub fn lower_bound_value(h: &TargetFunction, horizon: usize, sum_g: f64) -> f64 {
    -h.eval(sum_g) + h.gaussian_expectation(0.0, (horizon as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::olo::rho_sqrt_horizon;

    #[test]
    fn abs_zero_sum_psi_bar() {
        let horizon = 100;
        let tr = GameTranscript::from_rounds(vec![0.0; horizon], [1.0, -1.0].repeat(horizon / 2));
        let l = pathwise_bound(
            &tr,
            &rho_sqrt_horizon(horizon).unwrap(),
            &TargetFunction::Abs,
            true,
        )
        .unwrap();
        let expect = (2.0 * horizon as f64 / std::f64::consts::PI).sqrt();
        assert!((l.psi_bar_term - expect).abs() < 1e-12);
        // Boolean gradients with c_t = 1 leave the first component at zero
        assert!(l.err_terms.iter().all(|e| e[0] == 0.0));
        assert!(l.err_total() <= 3.0 * (1.0 + (horizon as f64).ln()));
    }

    #[test]
    fn lower_bound_examples() {
        let horizon = 64;
        let r = (2.0 * horizon as f64 / std::f64::consts::PI).sqrt();
        assert!((lower_bound_value(&TargetFunction::Abs, horizon, 0.0) - r).abs() < 1e-12);
        assert!(
            (lower_bound_value(&TargetFunction::Abs, horizon, 64.0) - (r - 64.0)).abs() < 1e-12
        );
    }

    #[test]
    fn length_mismatch_rejected() {
        let tr = GameTranscript::from_rounds(vec![0.0; 3], vec![1.0; 3]);
        assert!(pathwise_bound(
            &tr,
            &rho_sqrt_horizon(4).unwrap(),
            &TargetFunction::Abs,
            true
        )
        .is_err());
    }
}
