//! The optimal loss/regret tradeoff curve γ(ε) and the OGD-style baseline.

use steinolo::harness::{baseline_prefactor, solve_gamma_eps};
use steinolo::Result;

fn main() -> Result<()> {
    println!("   eps     gamma   alpha_sth   baseline   residual");
    for i in 1..=15 {
        let eps = 0.05 * i as f64;
        let p = solve_gamma_eps(eps)?;
        println!(
            "{eps:>6.3}  {:>8.5}  {:>9.4}  {:>9.5}  {:.1e}",
            p.gamma,
            p.alpha,
            baseline_prefactor(eps)?,
            p.residual
        );
    }
    Ok(())
}
