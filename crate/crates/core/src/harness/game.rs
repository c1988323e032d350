//! The repeated game between a learner and an adversary.

use super::adversary::Adversary;
use crate::error::{Error, Result};
use crate::olo::LearnerState;

/// A learner playing x_t ∈ [-1, 1] and then seeing g_t.
pub trait Learner {
    fn name(&self) -> String;
    fn horizon(&self) -> usize;
    fn decide(&mut self) -> Result<f64>;
    fn observe(&mut self, g: f64) -> Result<()>;
}

impl Learner for LearnerState {
    fn name(&self) -> String {
        format!("stein-{}", self.target().name())
    }

    fn horizon(&self) -> usize {
        LearnerState::horizon(self)
    }

    fn decide(&mut self) -> Result<f64> {
        LearnerState::decide(self)
    }

    fn observe(&mut self, g: f64) -> Result<()> {
        LearnerState::observe(self, g)
    }
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn horizon(&self) -> usize {
        (**self).horizon()
    }

    fn decide(&mut self) -> Result<f64> {
        (**self).decide()
    }

    fn observe(&mut self, g: f64) -> Result<()> {
        (**self).observe(g)
    }
}

/// The full history of one game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTranscript {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    /// Loss_T = Σ g_t x_t
    pub loss_total: f64,
    /// Σ g_t
    pub s_final: f64,
}

impl GameTranscript {
    pub fn from_rounds(x: Vec<f64>, g: Vec<f64>) -> Self {
        assert_eq!(
            x.len(),
            g.len(),
            "decision and gradient histories differ in length"
        );
        let loss_total = x.iter().zip(&g).map(|(x, g)| x * g).sum();
        let s_final = g.iter().sum();
        GameTranscript {
            x,
            g,
            loss_total,
            s_final,
        }
    }

    pub fn horizon(&self) -> usize {
        self.x.len()
    }

    /// Reg_T(u) = Loss_T - u Σ g_t.
    pub fn regret_at(&self, u: f64) -> f64 {
        self.loss_total - self.s_final * u
    }

    /// max over u ∈ [-1, 1] of Reg_T(u), attained at an endpoint.
    pub fn reg_unif(&self) -> f64 {
        self.regret_at(-1.0).max(self.regret_at(1.0))
    }

    /// Running sums s_t and running losses, one entry per round.
    pub fn running(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().zip(&self.g).scan((0.0, 0.0), |acc, (x, g)| {
            acc.0 += g;
            acc.1 += g * x;
            Some(*acc)
        })
    }
}

/// Plays `horizon` rounds; the adversary sees x_t before choosing g_t and the
/// learner sees g_t only after committing to x_t.
pub fn play<L: Learner + ?Sized>(
    learner: &mut L,
    adversary: &mut Adversary,
    horizon: usize,
) -> Result<GameTranscript> {
    if horizon == 0 {
        return Err(Error::config("T", "horizon must be at least 1"));
    }
    if learner.horizon() != horizon {
        return Err(Error::config(
            "T",
            format!(
                "learner was built for horizon {}, game asks for {horizon}",
                learner.horizon()
            ),
        ));
    }
    let mut xs = Vec::with_capacity(horizon);
    let mut gs = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        let x = learner.decide()?;
        if !(x.abs() <= 1.0) {
            return Err(Error::Protocol {
                round: t,
                detail: format!("decision {x} outside [-1, 1]"),
            });
        }
        let g = adversary.gradient(t, x);
        learner.observe(g)?;
        xs.push(x);
        gs.push(g);
    }
    Ok(GameTranscript::from_rounds(xs, gs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::adversary::AdversaryKind;
    use crate::olo::rho_sqrt_horizon;
    use crate::targets::TargetFunction;

    #[test]
    fn regret_identity() {
        let tr = GameTranscript::from_rounds(vec![0.5, -0.25, 1.0], vec![1.0, -2.0, 0.5]);
        assert_eq!(tr.loss_total, 0.5 + 0.5 + 0.5);
        assert_eq!(tr.s_final, -0.5);
        assert_eq!(tr.regret_at(0.0), tr.loss_total);
        assert_eq!(tr.reg_unif(), 2.0);
    }

    #[test]
    fn alternating_script_ends_near_zero() {
        for horizon in [7, 8] {
            let mut l = LearnerState::new(TargetFunction::Abs, rho_sqrt_horizon(horizon).unwrap());
            let mut a = Adversary::new(AdversaryKind::Scripted(vec![1.0, -1.0]), 0).unwrap();
            let tr = play(&mut l, &mut a, horizon).unwrap();
            assert!(tr.s_final == 0.0 || tr.s_final == 1.0);
            assert_eq!(tr.horizon(), horizon);
        }
    }

    #[test]
    fn horizon_mismatch_is_rejected() {
        let mut l = LearnerState::new(TargetFunction::Abs, rho_sqrt_horizon(5).unwrap());
        let mut a = Adversary::new(AdversaryKind::Rademacher, 0).unwrap();
        assert!(play(&mut l, &mut a, 6).is_err());
        assert!(play(&mut l, &mut a, 0).is_err());
    }
}
