//! Cover's algorithm on every ±1 sequence of length T, checked against its
//! achievability value.

use steinolo::baselines::{cover_achievability, CoverLearner, CoverSpec};
use steinolo::harness::{play, Adversary, AdversaryKind};
use steinolo::Result;

fn main() -> Result<()> {
    let horizon = 10;
    let spec = CoverSpec::centered_abs(horizon)?;
    let mut worst = f64::NEG_INFINITY;
    for mask in 0u32..(1 << horizon) {
        let seq: Vec<f64> = (0..horizon)
            .map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let mut learner = CoverLearner::new(spec.clone());
        let mut adv = Adversary::new(AdversaryKind::Scripted(seq), 0)?;
        let tr = play(&mut learner, &mut adv, horizon)?;
        // loss should never exceed -ψ(-S)
        worst = worst.max(tr.loss_total + spec.psi(-tr.s_final));
    }
    println!("T={horizon}: {} sequences", 1 << horizon);
    println!("max(loss + psi(-S)) = {worst:+.3e}");
    println!("achievability value = {:.3e}", cover_achievability(&spec));
    Ok(())
}
