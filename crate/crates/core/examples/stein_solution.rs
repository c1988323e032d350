//! Evaluates the Stein solution f for a few targets through each available
//! representation and checks the factor bounds on a grid.

use steinolo::{Result, SteinSolution, TargetFunction};

fn main() -> Result<()> {
    let grid: Vec<f64> = (-40..=40).map(|i| 0.1 * i as f64).collect();
    for target in [
        TargetFunction::Abs,
        TargetFunction::huber(0.5)?,
        TargetFunction::log_cosh(1.5)?,
        TargetFunction::soft_threshold(1.0)?,
    ] {
        let sol = SteinSolution::solve(0.2, 1.3, target)?;
        let name = sol.target().name();
        println!("{name}: E h = {:.6}", sol.expectation());
        for x in [-2.0, 0.0, 1.0] {
            let ratio = sol
                .eval_density_ratio(x)
                .map(|v| format!("{v:+.8}"))
                .unwrap_or_else(|_| "n/a".into());
            println!(
                "  f({x:+.1}) = {:+.8}   ou {:+.8}   ratio {ratio}",
                sol.eval(x),
                sol.eval_ou(x)
            );
        }
        let rep = sol.check_stein_factors(&grid)?;
        println!(
            "  |f'| max {:.4} (bound {:.4}), |f''| max {:.4} (bound {:.4}), ok={}",
            rep.max_abs_fp,
            rep.fp_bound,
            rep.max_abs_fpp,
            rep.fpp_bound,
            rep.all_ok()
        );
    }
    Ok(())
}
