//! Monte Carlo check of the in-expectation total-loss bound against
//! stochastic adversaries with E[G_t² | past] ≤ 1:
//!
//! E[Loss_T] ≤ -E h(ΣG) + E_Z h(√T Z) + Σ_t (2E|G_t| + E|G_t|³)/(T - t + 1),
//!
//! plus Σ_t √(2/π)|E G_t² - 1|/√(T - t + 1) when h is not convex.

use rayon::prelude::*;

use super::adversary::{Adversary, AdversaryKind};
use super::game::play;
use crate::error::{Error, Result};
use crate::olo::{rho_sqrt_horizon, LearnerState};
use crate::specfn::normal::SQRT_2_OVER_PI;
use crate::targets::TargetFunction;

pub const MIN_TRIALS: usize = 1000;

/// Per-trial statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub loss: f64,
    /// h(Σ G_t)
    pub h_terminal: f64,
    /// Σ_t (2|G_t| + |G_t|³)/(T - t + 1)
    pub moment_sum: f64,
}

#[derive(Debug, Clone)]
pub struct StochasticReport {
    pub trials: Vec<TrialRecord>,
    pub mean_loss: f64,
    /// Standard error of the mean loss alone.
    pub loss_stderr: f64,
    /// Plug-in estimate of the right-hand side.
    pub bound_rhs: f64,
    /// Standard error of mean(loss - rhs), the paired statistic the check
    /// is made on.
    pub stderr: f64,
    /// E_Z h(√T Z), exact.
    pub gaussian_term: f64,
    /// Deterministic extra term for nonconvex targets (0 otherwise).
    pub nonconvex_term: f64,
}

impl StochasticReport {
    /// mean_loss ≤ bound_rhs + z·stderr
    pub fn holds(&self, z: f64) -> bool {
        self.mean_loss <= self.bound_rhs + z * self.stderr
    }
}

/// Runs `trials` independent games of the Stein learner (ρ_t = √(T - t))
/// against `adversary`. Trial i uses stream i of the generator seeded with
/// `seed`, so the per-trial records do not depend on thread scheduling.
pub fn run_stochastic(
    target: &TargetFunction,
    adversary: &AdversaryKind,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<StochasticReport> {
    if trials < MIN_TRIALS {
        return Err(Error::config(
            "trials",
            format!("need at least {MIN_TRIALS} trials, got {trials}"),
        ));
    }
    let m2 = match adversary.second_moment() {
        Some(m) if m <= 1.0 && !matches!(adversary, AdversaryKind::SignWorst) => m,
        _ => {
            return Err(Error::config(
                "adversary",
                format!("`{adversary}` is not a stochastic adversary with E[g^2] <= 1"),
            ))
        }
    };
    let schedule = rho_sqrt_horizon(horizon)?;

    let records = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut adv = Adversary::for_trial(adversary.clone(), seed, i)?;
            let mut learner = LearnerState::new(target.clone(), schedule.clone());
            let tr = play(&mut learner, &mut adv, horizon)?;
            let moment_sum =
                tr.g.iter()
                    .enumerate()
                    .map(|(k, g)| {
                        let a = g.abs();
                        (2.0 * a + a * a * a) / (horizon - k) as f64
                    })
                    .sum();
            Ok(TrialRecord {
                loss: tr.loss_total,
                h_terminal: target.eval(tr.s_final),
                moment_sum,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let gaussian_term = target.gaussian_expectation(0.0, (horizon as f64).sqrt());
    let nonconvex_term = if target.is_convex() {
        0.0
    } else {
        (1..=horizon)
            .map(|t| SQRT_2_OVER_PI * (m2 - 1.0).abs() / ((horizon - t + 1) as f64).sqrt())
            .sum()
    };

    let n = trials as f64;
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(f).sum::<f64>() / n;
    let stderr = |f: &dyn Fn(&TrialRecord) -> f64, m: f64| {
        let var = records.iter().map(|r| (f(r) - m).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };
    let mean_loss = mean(&|r| r.loss);
    let loss_stderr = stderr(&|r| r.loss, mean_loss);
    let paired = |r: &TrialRecord| r.loss + r.h_terminal - r.moment_sum;
    let paired_mean = mean(&paired);
    let bound_rhs =
        -mean(&|r| r.h_terminal) + gaussian_term + mean(&|r| r.moment_sum) + nonconvex_term;

    Ok(StochasticReport {
        mean_loss,
        loss_stderr,
        bound_rhs,
        stderr: stderr(&paired, paired_mean),
        gaussian_term,
        nonconvex_term,
        trials: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_adversary() {
        let r = run_stochastic(
            &TargetFunction::Abs,
            &AdversaryKind::UniformBox { half_width: 0.0 },
            25,
            1000,
            1,
        )
        .unwrap();
        assert_eq!(r.mean_loss, 0.0);
        assert!(
            (r.bound_rhs - (TargetFunction::Abs.gaussian_expectation(0.0, 5.0) - 0.0)).abs()
                < 1e-15
        );
        assert!(r.holds(3.0));
    }

    #[test]
    fn rejects_unsuitable_inputs() {
        let box1 = AdversaryKind::UniformBox { half_width: 1.0 };
        assert!(run_stochastic(&TargetFunction::Abs, &box1, 10, 10, 0).is_err());
        let loud = AdversaryKind::GaussianNoisy {
            drift: 0.0,
            noise: 2.0,
        };
        assert!(run_stochastic(&TargetFunction::Abs, &loud, 10, 1000, 0).is_err());
        assert!(
            run_stochastic(&TargetFunction::Abs, &AdversaryKind::SignWorst, 10, 1000, 0).is_err()
        );
    }
}
