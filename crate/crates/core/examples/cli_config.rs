//! Driving an experiment through the CLI layer without a subprocess.

use steinolo::cli::{execute, ExperimentConfig, Format};
use steinolo::Result;

fn main() -> Result<()> {
    let mut cfg = ExperimentConfig::from_text(
        "command = verify\nlearner = stein\ntarget = huber\nalpha = 0.5\n\
         adversary = rademacher\nT = 200\ntrials = 20\nseed = 1\n",
    )?;
    cfg.format = Format::Csv;
    cfg.validate()?;
    print!("{}", cfg.to_canonical());
    let outcome = execute(&cfg)?;
    let csv = outcome.report.render(&cfg);
    for line in csv.lines().skip_while(|l| !l.starts_with("metric")) {
        println!("{line}");
    }
    println!("verdict: {:?}", outcome.verdict);
    Ok(())
}
