//! Log-cosh Stein learner against multiplicative weights on the same random
//! sequence.

use steinolo::baselines::MwuLearner;
use steinolo::harness::{gamma_lse, gamma_mwu, play, Adversary, AdversaryKind, Learner};
use steinolo::olo::{rho_sqrt_horizon, LearnerState};
use steinolo::{Result, TargetFunction};

fn main() -> Result<()> {
    let alpha = 2.0;
    let horizon = 2_000;
    println!(
        "prefactors at u=1: lse={:.5} mwu={:.5}",
        gamma_lse(1.0, alpha),
        gamma_mwu(1.0, alpha)
    );
    let kind = AdversaryKind::Bernoulli { p: 0.3 };
    let stein = LearnerState::new(TargetFunction::log_cosh(alpha)?, rho_sqrt_horizon(horizon)?);
    let mwu = MwuLearner::new(alpha, horizon)?;
    let learners: Vec<Box<dyn Learner>> = vec![Box::new(stein), Box::new(mwu)];
    for mut l in learners {
        let mut adv = Adversary::new(kind.clone(), 11)?;
        let tr = play(&mut l, &mut adv, horizon)?;
        let root = (horizon as f64).sqrt();
        println!(
            "{:<16} reg(-1)/sqrtT={:+.4}  reg(+1)/sqrtT={:+.4}  final x={:+.4}",
            l.name(),
            tr.regret_at(-1.0) / root,
            tr.regret_at(1.0) / root,
            tr.x.last().copied().unwrap_or(0.0)
        );
    }
    Ok(())
}
