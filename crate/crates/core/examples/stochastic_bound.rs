//! Expected-loss bound under i.i.d. gradients, estimated over many trials.

use steinolo::harness::{run_stochastic, AdversaryKind};
use steinolo::{Result, TargetFunction};

fn main() -> Result<()> {
    let horizon = 400;
    for kind in [
        AdversaryKind::Rademacher,
        AdversaryKind::UniformBox { half_width: 1.0 },
        AdversaryKind::GaussianNoisy { drift: 0.1, noise: 0.6 },
    ] {
        let rep = run_stochastic(&TargetFunction::Abs, &kind, horizon, 2_000, 3)?;
        println!(
            "{:<22} mean loss {:+.3} ± {:.3}   bound {:+.3}   holds(3se)={}",
            kind.to_string(),
            rep.mean_loss,
            rep.loss_stderr,
            rep.bound_rhs,
            rep.holds(3.0)
        );
    }
    Ok(())
}
