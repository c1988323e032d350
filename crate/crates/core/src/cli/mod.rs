//! Command-line front end.
//!
//! Settings resolve in three layers: built-in defaults, then an optional
//! `--config` file of `key = value` lines, then individual flags. The
//! resolved configuration is echoed in every JSON output.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{
    build_learner, cmd_cover_check, cmd_prefactors, cmd_run, cmd_stochastic, cmd_tradeoff,
    cmd_verify, execute, Outcome, COVER_SLACK, STOCHASTIC_Z, VERIFY_SLACK,
};
pub use config::{Command, ExperimentConfig, Format, Grid, LearnerKind, COVER_CHECK_MAX_T, KEYS};
pub use output::{fmt_real, Cell, Report};

use crate::error::{Error, Result};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    /// Bad configuration, unreadable input or unwritable output.
    Config = 1,
    /// A numeric fault or protocol breach while running.
    Numeric = 2,
    /// A verification command found a bound violation.
    BoundViolation = 3,
}

impl ExitCode {
    pub fn for_error(e: &Error) -> ExitCode {
        match e {
            Error::Config { .. } | Error::Domain { .. } | Error::Io(_) => ExitCode::Config,
            Error::Numeric(_)
            | Error::Schedule(_)
            | Error::GameOver { .. }
            | Error::Protocol { .. } => ExitCode::Numeric,
        }
    }
}

impl From<ExitCode> for std::process::ExitCode {
    fn from(c: ExitCode) -> Self {
        std::process::ExitCode::from(c as u8)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "steinolo",
    about = "Run, verify and sweep one-dimensional online learners"
)]
struct Flags {
    /// Flat `key = value` file applied before the flags below.
    #[arg(long)]
    config: Option<String>,
    /// run | verify | prefactors | tradeoff | cover-check | stochastic
    #[arg(long)]
    command: Option<String>,
    /// stein | ogd | mwu | cover
    #[arg(long)]
    learner: Option<String>,
    /// abs | huber | logcosh | softthr (stein learner)
    #[arg(long)]
    target: Option<String>,
    /// Target scale, or the step factor for ogd and mwu.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// e.g. sign_worst, rademacher, bernoulli:0.7, drift:0.3, uniform_box:1,
    /// gaussian_noisy:0:1, scripted:1:-1:0.5
    #[arg(long, allow_hyphen_values = true)]
    adversary: Option<String>,
    /// Horizon.
    #[arg(long = "T")]
    horizon: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Output path, `-` for stdout.
    #[arg(long)]
    out: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Comma list or start:stop:count.
    #[arg(long = "alpha-grid", allow_hyphen_values = true)]
    alpha_grid: Option<String>,
    #[arg(long = "u-grid", allow_hyphen_values = true)]
    u_grid: Option<String>,
    #[arg(long = "eps-grid", allow_hyphen_values = true)]
    eps_grid: Option<String>,
    /// Print the resolved configuration in canonical form and exit.
    #[arg(long)]
    print_config: bool,
}

/// Resolves defaults, the config file and flags into a validated config.
/// Returns the config and whether `--print-config` was requested.
pub fn resolve<I, T>(args: I) -> Result<(ExperimentConfig, bool)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let flags =
        Flags::try_parse_from(args).map_err(|e| Error::config("arguments", e.to_string()))?;
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{path}: {e}")))?;
        cfg.apply_text(&text)?;
    }
    let overrides = [
        ("command", &flags.command),
        ("learner", &flags.learner),
        ("target", &flags.target),
        ("alpha", &flags.alpha),
        ("adversary", &flags.adversary),
        ("T", &flags.horizon),
        ("seed", &flags.seed),
        ("trials", &flags.trials),
        ("out", &flags.out),
        ("format", &flags.format),
        ("alpha_grid", &flags.alpha_grid),
        ("u_grid", &flags.u_grid),
        ("eps_grid", &flags.eps_grid),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok((cfg, flags.print_config))
}

fn write_output(cfg: &ExperimentConfig, text: &str) -> Result<()> {
    if cfg.out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()?;
    } else {
        std::fs::write(&cfg.out, text).map_err(|e| Error::Io(format!("{}: {e}", cfg.out)))?;
    }
    Ok(())
}

/// Full CLI run: parse, execute, write. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // --help and --version are not errors
    if let Err(e) = Flags::try_parse_from(&args) {
        if !e.use_stderr() {
            let _ = e.print();
            return ExitCode::Success;
        }
    }
    let result = resolve(&args).and_then(|(cfg, print_only)| {
        if print_only {
            write_output(
                &ExperimentConfig {
                    out: "-".into(),
                    ..cfg.clone()
                },
                &cfg.to_canonical(),
            )?;
            return Ok(ExitCode::Success);
        }
        let outcome = execute(&cfg)?;
        write_output(&cfg, &outcome.report.render(&cfg))?;
        Ok(match outcome.verdict {
            Some(false) => {
                eprintln!("steinolo: {}: bound violation detected", cfg.command);
                ExitCode::BoundViolation
            }
            _ => ExitCode::Success,
        })
    });
    result.unwrap_or_else(|e| {
        eprintln!("steinolo: {e}");
        ExitCode::for_error(&e)
    })
}
