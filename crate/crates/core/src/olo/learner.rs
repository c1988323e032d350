//! The stateful learner: running sum, round counter and schedule.

use std::fmt;

use super::decision::{self, RoundState};
use super::schedule::{check_next, RhoPolicy, RhoSchedule};
use crate::error::{Error, Result};
use crate::targets::TargetFunction;

/// Which evaluation route [`LearnerState::decide`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecisionPath {
    /// Closed form when the target has one, generic integral otherwise.
    #[default]
    Auto,
    /// Always the generic integral.
    Generic,
}

enum Source {
    Fixed,
    Policy(Box<dyn RhoPolicy>),
}

/// State of the Stein learner between rounds.
pub struct LearnerState {
    target: TargetFunction,
    horizon: usize,
    /// next round to play, 1-based; horizon + 1 once the game is over
    t: usize,
    s_prev: f64,
    /// ρ_0²..ρ_t² known so far (all of them for a fixed schedule)
    var: Vec<f64>,
    gradients: Vec<f64>,
    source: Source,
    path: DecisionPath,
}

impl fmt::Debug for LearnerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LearnerState")
            .field("target", &self.target)
            .field("horizon", &self.horizon)
            .field("t", &self.t)
            .field("s_prev", &self.s_prev)
            .field("adaptive", &matches!(self.source, Source::Policy(_)))
            .field("path", &self.path)
            .finish()
    }
}

impl LearnerState {
    pub fn new(target: TargetFunction, schedule: RhoSchedule) -> Self {
        LearnerState {
            target,
            horizon: schedule.horizon(),
            t: 1,
            s_prev: 0.0,
            var: schedule.variances().to_vec(),
            gradients: Vec::new(),
            source: Source::Fixed,
            path: DecisionPath::Auto,
        }
    }

    /// Learner whose ρ_t is chosen online by `policy` from g_1..g_{t-1}.
    pub fn with_policy(
        target: TargetFunction,
        horizon: usize,
        rho0: f64,
        policy: impl RhoPolicy + 'static,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Schedule("horizon must be at least 1".into()));
        }
        check_next(0, horizon, None, rho0 * rho0)?;
        let mut st = LearnerState {
            target,
            horizon,
            t: 1,
            s_prev: 0.0,
            var: vec![rho0 * rho0],
            gradients: Vec::new(),
            source: Source::Policy(Box::new(policy)),
            path: DecisionPath::Auto,
        };
        st.extend_schedule()?;
        Ok(st)
    }

    pub fn with_path(mut self, path: DecisionPath) -> Self {
        self.path = path;
        self
    }

    pub fn target(&self) -> &TargetFunction {
        &self.target
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The round about to be played (1-based).
    pub fn round(&self) -> usize {
        self.t
    }

    pub fn is_over(&self) -> bool {
        self.t > self.horizon
    }

    pub fn s_prev(&self) -> f64 {
        self.s_prev
    }

    pub fn gradients(&self) -> &[f64] {
        &self.gradients
    }

    /// The schedule realized so far; complete once the game is over (or
    /// from the start for a fixed schedule).
    pub fn schedule(&self) -> Result<RhoSchedule> {
        RhoSchedule::from_variances(self.var.clone())
    }

    /// Inputs of the current round's decision.
    pub fn round_state(&self) -> Result<RoundState> {
        if self.is_over() {
            return Err(Error::GameOver {
                round: self.t,
                horizon: self.horizon,
            });
        }
        let (vp, v) = (self.var[self.t - 1], self.var[self.t]);
        RoundState::new(self.s_prev, vp, vp - v)
    }

    /// x_t ∈ [-1, 1].
    pub fn decide(&self) -> Result<f64> {
        let st = self.round_state()?;
        match self.path {
            DecisionPath::Auto => decision::decide(&self.target, &st),
            DecisionPath::Generic => decision::finish(decision::generic_raw(&self.target, &st)),
        }
    }

    /// Feeds g_t and advances to round t + 1. Any finite g is accepted.
    pub fn observe(&mut self, g: f64) -> Result<()> {
        if self.is_over() {
            return Err(Error::GameOver {
                round: self.t,
                horizon: self.horizon,
            });
        }
        if !g.is_finite() {
            return Err(Error::Protocol {
                round: self.t,
                detail: format!("gradient {g} is not finite"),
            });
        }
        self.s_prev += g;
        self.gradients.push(g);
        self.t += 1;
        if !self.is_over() {
            self.extend_schedule()?;
        }
        Ok(())
    }

    /// For policy schedules, fixes ρ_t for the round about to be played.
    fn extend_schedule(&mut self) -> Result<()> {
        if let Source::Policy(p) = &mut self.source {
            if self.var.len() <= self.t {
                let prev = self.var[self.t - 1];
                let rho = p.next_rho(self.t, prev.sqrt(), &self.gradients);
                let v = rho * rho;
                check_next(self.t, self.horizon, Some(prev), v)?;
                self.var.push(v);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::olo::schedule::rho_sqrt_horizon;

    #[test]
    fn observe_tracks_sum_and_ends() {
        let mut l = LearnerState::new(TargetFunction::Abs, rho_sqrt_horizon(3).unwrap());
        l.observe(1.0).unwrap();
        assert_eq!(l.s_prev(), 1.0);
        l.observe(-1.0).unwrap();
        l.observe(10.0).unwrap();
        assert_eq!(l.s_prev(), 10.0);
        assert!(matches!(l.observe(1.0), Err(Error::GameOver { .. })));
        assert!(matches!(l.decide(), Err(Error::GameOver { .. })));
    }

    #[test]
    fn policy_schedule_is_checked() {
        // halve the remaining budget each round, zero at the end
        let policy =
            |t: usize, rho_prev: f64, _g: &[f64]| if t == 4 { 0.0 } else { rho_prev * 0.5 };
        let mut l = LearnerState::with_policy(TargetFunction::Abs, 4, 2.0, policy).unwrap();
        while !l.is_over() {
            let x = l.decide().unwrap();
            l.observe(if x >= 0.0 { 1.0 } else { -1.0 }).unwrap();
        }
        assert_eq!(
            l.schedule().unwrap().variances(),
            &[4.0, 1.0, 0.25, 0.0625, 0.0]
        );

        let growing = |_t: usize, rho_prev: f64, _g: &[f64]| rho_prev * 2.0;
        assert!(matches!(
            LearnerState::with_policy(TargetFunction::Abs, 4, 1.0, growing),
            Err(Error::Schedule(_))
        ));
    }

    #[test]
    fn generic_path_agrees_with_closed_form() {
        let mut a = LearnerState::new(TargetFunction::Abs, rho_sqrt_horizon(20).unwrap());
        let mut g = LearnerState::new(TargetFunction::Abs, rho_sqrt_horizon(20).unwrap())
            .with_path(DecisionPath::Generic);
        for i in 0..20 {
            let (xa, xg) = (a.decide().unwrap(), g.decide().unwrap());
            assert!((xa - xg).abs() < 1e-10, "round {i}: {xa} vs {xg}");
            let grad = if i % 3 == 0 { 1.0 } else { -0.4 };
            a.observe(grad).unwrap();
            g.observe(grad).unwrap();
        }
    }
}
