//! Huber-target Stein learner next to projected OGD: regret prefactors and
//! the realized regret against a drifting adversary.

use steinolo::baselines::OgdLearner;
use steinolo::harness::{gamma_huber, gamma_ogd, play, Adversary, AdversaryKind, Learner};
use steinolo::olo::{rho_sqrt_horizon, LearnerState};
use steinolo::{Result, TargetFunction};

fn main() -> Result<()> {
    let alpha = 1.0;
    println!("     u   gamma_huber   gamma_ogd");
    for u in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!(
            "{u:>6.2}  {:>11.5}  {:>10.5}",
            gamma_huber(u, alpha),
            gamma_ogd(u, alpha)
        );
    }

    let horizon = 4_000;
    let kind: AdversaryKind = "drift:-0.4".parse()?;
    let stein = LearnerState::new(TargetFunction::huber(alpha)?, rho_sqrt_horizon(horizon)?);
    let ogd = OgdLearner::new(alpha, horizon)?;
    let learners: Vec<Box<dyn Learner>> = vec![Box::new(stein), Box::new(ogd)];
    for mut l in learners {
        let mut adv = Adversary::new(kind.clone(), 7)?;
        let tr = play(&mut l, &mut adv, horizon)?;
        let root = (horizon as f64).sqrt();
        println!(
            "{:<14} reg(u=1)/sqrtT={:+.4}  loss/sqrtT={:+.4}",
            l.name(),
            tr.regret_at(1.0) / root,
            tr.loss_total / root
        );
    }
    Ok(())
}
