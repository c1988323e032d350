//! A user-defined target with an adaptive variance schedule.

use steinolo::harness::{play, Adversary, AdversaryKind};
use steinolo::olo::LearnerState;
use steinolo::{CustomTarget, Result, TargetFunction};

fn main() -> Result<()> {
    // h(x) = |x - 0.5|: a kink away from the origin
    let h = CustomTarget::new(
        "abs_shift",
        |x: f64| (x - 0.5).abs(),
        |x: f64| if x >= 0.5 { 1.0 } else { -1.0 },
        vec![0.5],
        true,
    );
    let target = TargetFunction::Custom(h);
    let horizon = 300;
    // ρ_t² = remaining rounds plus the observed squared gradients so far
    let policy = move |t: usize, _rho_prev: f64, past: &[f64]| {
        let seen: f64 = past.iter().map(|g| g * g).sum();
        ((horizon - t) as f64 + 0.1 * seen).sqrt()
    };
    let rho0 = (horizon as f64).sqrt() * 1.2;
    let mut learner = LearnerState::with_policy(target, horizon, rho0, policy)?;
    let mut adv = Adversary::new(AdversaryKind::Rademacher, 5)?;
    let tr = play(&mut learner, &mut adv, horizon)?;
    println!(
        "loss {:+.4}, sum g {:+.1}, reg(0.5) {:+.4}",
        tr.loss_total,
        tr.s_final,
        tr.regret_at(0.5)
    );
    let sched = learner.schedule()?;
    println!("rho_0 {:.4}  rho_T {:.4}", sched.rho(0), sched.rho(horizon));
    Ok(())
}
