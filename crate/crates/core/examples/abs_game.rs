//! The Stein learner with h(x) = |x| against the sign-worst adversary,
//! checked against its pathwise bound.

use steinolo::harness::{play, pathwise_bound, Adversary, AdversaryKind};
use steinolo::olo::{rho_sqrt_horizon, LearnerState};
use steinolo::{Result, TargetFunction};

fn main() -> Result<()> {
    for horizon in [100, 1_000, 10_000] {
        let schedule = rho_sqrt_horizon(horizon)?;
        let mut learner = LearnerState::new(TargetFunction::Abs, schedule.clone());
        let mut adv = Adversary::new(AdversaryKind::SignWorst, 0)?;
        let tr = play(&mut learner, &mut adv, horizon)?;
        let ledger = pathwise_bound(&tr, &schedule, &TargetFunction::Abs, true)?;
        let root = (horizon as f64).sqrt();
        println!(
            "T={horizon:>6}  loss/sqrtT={:+.4}  bound/sqrtT={:+.4}  reg_unif/sqrtT={:.4}  holds={}",
            tr.loss_total / root,
            ledger.total() / root,
            tr.reg_unif() / root,
            ledger.holds(tr.loss_total, 1e-9),
        );
    }
    Ok(())
}
