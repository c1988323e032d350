//! The six experiment commands. Each returns a [`Report`] and, for the
//! checking commands, whether every check passed.

use rayon::prelude::*;

use super::config::{Command, ExperimentConfig, LearnerKind};
use super::output::{Cell, Report};
use crate::baselines::{cover_achievability, CoverLearner, CoverSpec, MwuLearner, OgdLearner};
use crate::error::{Error, Result};
use crate::harness::{
    baseline_prefactor, gamma_mwu, gamma_ogd, play, prefactors, run_stochastic, solve_gamma_eps,
    pathwise_bound, Adversary, AdversaryKind, GameTranscript, Learner,
};
use crate::olo::{rho_sqrt_horizon, LearnerState};
use crate::specfn::normal::SQRT_2_OVER_PI;

/// Slack allowed on the Stein pathwise bound and the baseline bounds.
pub const VERIFY_SLACK: f64 = 1e-6;
/// Slack allowed on Cover's bound.
pub const COVER_SLACK: f64 = 1e-9;
/// z-multiplier for the stochastic check.
pub const STOCHASTIC_Z: f64 = 3.0;

pub struct Outcome {
    pub report: Report,
    /// `Some(false)` when a verification found a violation.
    pub verdict: Option<bool>,
}

pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Run => cmd_run(config).map(|report| Outcome {
            report,
            verdict: None,
        }),
        Command::Verify => cmd_verify(config),
        Command::Prefactors => cmd_prefactors(config).map(|report| Outcome {
            report,
            verdict: None,
        }),
        Command::Tradeoff => cmd_tradeoff(config).map(|report| Outcome {
            report,
            verdict: None,
        }),
        Command::CoverCheck => cmd_cover_check(config),
        Command::Stochastic => cmd_stochastic(config),
    }
}

pub fn build_learner(config: &ExperimentConfig) -> Result<Box<dyn Learner>> {
    let t = config.horizon;
    Ok(match config.learner {
        LearnerKind::Stein => Box::new(LearnerState::new(
            config.target_function()?,
            rho_sqrt_horizon(t)?,
        )),
        LearnerKind::Ogd => Box::new(OgdLearner::new(config.alpha, t)?),
        LearnerKind::Mwu => Box::new(MwuLearner::new(config.alpha, t)?),
        LearnerKind::Cover => Box::new(CoverLearner::new(CoverSpec::centered_abs(t)?)),
    })
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numeric(format!("{name} is {x}")))
    }
}

/// One game; per-round rows plus Loss_T and regret summary.
pub fn cmd_run(config: &ExperimentConfig) -> Result<Report> {
    let mut learner = build_learner(config)?;
    let mut adversary = Adversary::new(config.adversary.clone(), config.seed)?;
    let tr = play(&mut learner, &mut adversary, config.horizon)?;
    let mut r = Report::new("run", vec!["t", "x", "g", "s", "loss"]);
    for (i, (s, loss)) in tr.running().enumerate() {
        r.push(vec![
            (i + 1).into(),
            tr.x[i].into(),
            tr.g[i].into(),
            s.into(),
            loss.into(),
        ]);
    }
    r.note("learner", Cell::Text(learner.name()));
    r.note("loss_total", finite("Loss_T", tr.loss_total)?);
    r.note("reg_minus1", tr.regret_at(-1.0));
    r.note("reg_0", tr.regret_at(0.0));
    r.note("reg_plus1", tr.regret_at(1.0));
    r.note("reg_unif", tr.reg_unif());
    Ok(r)
}

/// (bound, loss - bound) for one transcript under the configured learner's
/// guarantee.
fn bound_for(
    config: &ExperimentConfig,
    tr: &GameTranscript,
    cover: Option<&CoverSpec>,
) -> Result<(f64, f64)> {
    let sqrt_t = (config.horizon as f64).sqrt();
    match config.learner {
        LearnerKind::Stein => {
            let h = config.target_function()?;
            let ledger =
                pathwise_bound(tr, &rho_sqrt_horizon(config.horizon)?, &h, h.is_convex())?;
            let total = ledger.total();
            Ok((total, tr.loss_total - total))
        }
        LearnerKind::Ogd | LearnerKind::Mwu => {
            let gamma = if config.learner == LearnerKind::Ogd {
                gamma_ogd
            } else {
                gamma_mwu
            };
            let (mut worst_bound, mut worst) = (f64::NAN, f64::NEG_INFINITY);
            for u in config.u_grid.values() {
                let b = gamma(u, config.alpha) * sqrt_t;
                let excess = tr.regret_at(u) - b;
                if excess > worst {
                    (worst_bound, worst) = (b, excess);
                }
            }
            Ok((worst_bound, worst))
        }
        LearnerKind::Cover => {
            let spec = cover.expect("cover spec is built for cover runs");
            let bound = -spec.psi(-tr.s_final);
            Ok((bound, tr.loss_total - bound))
        }
    }
}

/// `trials` seeded games, each checked against the learner's pathwise
/// guarantee. Trial i draws from stream i of the seeded generator.
pub fn cmd_verify(config: &ExperimentConfig) -> Result<Outcome> {
    let cover = match config.learner {
        LearnerKind::Cover => Some(CoverSpec::centered_abs(config.horizon)?),
        _ => None,
    };
    let slack = if cover.is_some() {
        COVER_SLACK
    } else {
        VERIFY_SLACK
    };
    let rows = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut learner = build_learner(config)?;
            let mut adv = Adversary::for_trial(config.adversary.clone(), config.seed, i)?;
            let tr = play(&mut learner, &mut adv, config.horizon)?;
            let (bound, excess) = bound_for(config, &tr, cover.as_ref())?;
            finite("loss", tr.loss_total)?;
            Ok((tr.loss_total, bound, excess))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut r = Report::new("verify", vec!["trial", "loss", "bound", "excess", "holds"]);
    let mut violations = 0usize;
    let mut max_excess = f64::NEG_INFINITY;
    for (i, &(loss, bound, excess)) in rows.iter().enumerate() {
        let holds = excess <= slack;
        violations += usize::from(!holds);
        max_excess = max_excess.max(excess);
        r.push(vec![
            i.into(),
            loss.into(),
            bound.into(),
            excess.into(),
            holds.into(),
        ]);
    }
    r.note("trials", rows.len());
    r.note("slack", slack);
    r.note("violations", violations);
    r.note("max_excess", max_excess);
    r.note("holds", violations == 0);
    Ok(Outcome {
        report: r,
        verdict: Some(violations == 0),
    })
}

/// Prefactor table over alpha_grid × u_grid.
pub fn cmd_prefactors(config: &ExperimentConfig) -> Result<Report> {
    let mut r = Report::new(
        "prefactors",
        vec![
            "u",
            "alpha",
            "gamma_huber",
            "gamma_ogd",
            "gamma_lse",
            "gamma_mwu",
            "gap_ogd",
            "gap_mwu",
            "sqrt_2_over_pi",
        ],
    );
    for alpha in config.alpha_grid.values() {
        for u in config.u_grid.values() {
            let p = prefactors(u, alpha)?;
            r.push(
                [
                    p.u,
                    p.alpha,
                    p.gamma_huber,
                    p.gamma_ogd,
                    p.gamma_lse,
                    p.gamma_mwu,
                    p.gap_ogd,
                    p.gap_mwu,
                    SQRT_2_OVER_PI,
                ]
                .map(Cell::Real)
                .to_vec(),
            );
        }
    }
    Ok(r)
}

/// γ(ε) against the comparison prefactor, also scaled by √T.
pub fn cmd_tradeoff(config: &ExperimentConfig) -> Result<Report> {
    let sqrt_t = (config.horizon as f64).sqrt();
    let mut r = Report::new(
        "tradeoff",
        vec![
            "eps",
            "gamma",
            "alpha_sth",
            "residual",
            "baseline",
            "loss_budget",
            "regret_optimal",
            "regret_baseline",
        ],
    );
    for eps in config.eps_grid.values() {
        let p = solve_gamma_eps(eps)?;
        let base = baseline_prefactor(eps)?;
        r.push(
            [
                eps,
                p.gamma,
                p.alpha,
                p.residual,
                base,
                eps * sqrt_t,
                p.gamma * sqrt_t,
                base * sqrt_t,
            ]
            .map(Cell::Real)
            .to_vec(),
        );
    }
    Ok(r)
}

/// Cover's strategy against all 2^T sign sequences.
pub fn cmd_cover_check(config: &ExperimentConfig) -> Result<Outcome> {
    let t = config.horizon;
    let spec = CoverSpec::centered_abs(t)?;
    let mut r = Report::new(
        "cover-check",
        vec!["sequence", "sum_g", "loss", "bound", "excess", "holds"],
    );
    let mut max_excess = f64::NEG_INFINITY;
    for mask in 0u64..(1u64 << t) {
        let g: Vec<f64> = (0..t)
            .map(|k| if mask >> k & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let mut learner = CoverLearner::new(spec.clone());
        let mut adv = Adversary::new(AdversaryKind::Scripted(g), 0)?;
        let tr = play(&mut learner, &mut adv, t)?;
        let bound = -spec.psi(-tr.s_final);
        let excess = tr.loss_total - bound;
        max_excess = max_excess.max(excess);
        r.push(vec![
            Cell::Int(mask as i64),
            tr.s_final.into(),
            tr.loss_total.into(),
            bound.into(),
            excess.into(),
            (excess <= COVER_SLACK).into(),
        ]);
    }
    let achievability = cover_achievability(&spec);
    let holds = max_excess <= COVER_SLACK && achievability.abs() <= 1e-12;
    r.note("games", r.rows.len());
    r.note("max_excess", max_excess);
    r.note("achievability", achievability);
    r.note("holds", holds);
    Ok(Outcome {
        report: r,
        verdict: Some(holds),
    })
}

/// Monte Carlo check of the in-expectation bound.
pub fn cmd_stochastic(config: &ExperimentConfig) -> Result<Outcome> {
    let h = config.target_function()?;
    let rep = run_stochastic(
        &h,
        &config.adversary,
        config.horizon,
        config.trials,
        config.seed,
    )?;
    let mut r = Report::new(
        "stochastic",
        vec!["trial", "loss", "h_terminal", "moment_sum"],
    );
    for (i, t) in rep.trials.iter().enumerate() {
        r.push(vec![
            i.into(),
            t.loss.into(),
            t.h_terminal.into(),
            t.moment_sum.into(),
        ]);
    }
    let holds = rep.holds(STOCHASTIC_Z);
    r.note("trials", rep.trials.len());
    r.note("mean_loss", finite("mean loss", rep.mean_loss)?);
    r.note("loss_stderr", rep.loss_stderr);
    r.note("bound_rhs", rep.bound_rhs);
    r.note("paired_stderr", rep.stderr);
    r.note("gaussian_term", rep.gaussian_term);
    r.note("nonconvex_term", rep.nonconvex_term);
    r.note("z", STOCHASTIC_Z);
    r.note("holds", holds);
    Ok(Outcome {
        report: r,
        verdict: Some(holds),
    })
}
