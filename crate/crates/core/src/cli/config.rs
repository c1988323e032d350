//! Experiment configuration: a flat `key = value` file overlaid with
//! command-line flags.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::harness::AdversaryKind;
use crate::specfn::normal::SQRT_2_OVER_PI;
use crate::targets::TargetFunction;

/// Largest horizon `cover-check` will enumerate (2^T games).
pub const COVER_CHECK_MAX_T: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Verify,
    Prefactors,
    Tradeoff,
    CoverCheck,
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    /// Stein learner; the target comes from `target` and its scale from `alpha`.
    Stein,
    Ogd,
    Mwu,
    /// Cover's strategy with the centered |x| potential.
    Cover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A grid given either as an explicit list or as `start:stop:count` with
/// evenly spaced points, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range {
                start, count: 1, ..
            } => vec![*start],
            Grid::Range { start, stop, count } => {
                let step = (stop - start) / (*count - 1) as f64;
                (0..*count)
                    .map(|i| {
                        if i + 1 == *count {
                            *stop
                        } else {
                            start + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }

    fn parse(field: &str, s: &str) -> Result<Grid> {
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(field, format!("`{p}` is not a number")))
                .and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::config(field, format!("`{p}` is not finite")))
                    }
                })
        };
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::config(
                    field,
                    format!("range `{s}` must be start:stop:count"),
                ));
            }
            let count = parts[2].trim().parse::<usize>().map_err(|_| {
                Error::config(
                    field,
                    format!("count `{}` is not a positive integer", parts[2]),
                )
            })?;
            if count == 0 {
                return Err(Error::config(field, "range count must be at least 1"));
            }
            Ok(Grid::Range {
                start: num(parts[0])?,
                stop: num(parts[1])?,
                count,
            })
        } else {
            let v = s.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if v.is_empty() {
                return Err(Error::config(field, "grid is empty"));
            }
            Ok(Grid::List(v))
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            Grid::Range { start, stop, count } => write!(f, "{start}:{stop}:{count}"),
        }
    }
}

/// Fully resolved experiment settings. Every field has a default, so the
/// canonical serialization always lists all keys in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub learner: LearnerKind,
    /// Target name for the Stein learner: abs, huber, logcosh or softthr.
    pub target: String,
    /// Target scale for the Stein learner, step factor for OGD and MWU.
    pub alpha: f64,
    pub adversary: AdversaryKind,
    pub horizon: usize,
    pub seed: u64,
    pub trials: usize,
    /// Output path; `-` writes to stdout.
    pub out: String,
    pub format: Format,
    pub alpha_grid: Grid,
    pub u_grid: Grid,
    pub eps_grid: Grid,
}

/// Keys in canonical order.
pub const KEYS: [&str; 13] = [
    "command",
    "learner",
    "target",
    "alpha",
    "adversary",
    "T",
    "seed",
    "trials",
    "out",
    "format",
    "alpha_grid",
    "u_grid",
    "eps_grid",
];

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: Command::Run,
            learner: LearnerKind::Stein,
            target: "abs".into(),
            alpha: 1.0,
            adversary: AdversaryKind::SignWorst,
            horizon: 1000,
            seed: 0,
            trials: 100,
            out: "-".into(),
            format: Format::Json,
            alpha_grid: Grid::List(vec![1.0]),
            u_grid: Grid::Range {
                start: -1.0,
                stop: 1.0,
                count: 41,
            },
            eps_grid: Grid::Range {
                start: 0.01,
                stop: 0.79,
                count: 79,
            },
        }
    }
}

impl ExperimentConfig {
    /// Sets one key from its text value. `-` and `_` are interchangeable in
    /// key names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "command" => self.command = value.parse()?,
            "learner" => self.learner = value.parse()?,
            "target" => {
                TargetFunction::from_name(value, 1.0)
                    .map_err(|e| Error::config("target", e.to_string()))?;
                self.target = value.to_string();
            }
            "alpha" => self.alpha = parse_num("alpha", value)?,
            "adversary" => self.adversary = value.parse()?,
            "T" | "t" => self.horizon = parse_num("T", value)?,
            "seed" => self.seed = parse_num("seed", value)?,
            "trials" => self.trials = parse_num("trials", value)?,
            "out" => self.out = value.to_string(),
            "format" => self.format = value.parse()?,
            "alpha_grid" => self.alpha_grid = Grid::parse("alpha_grid", value)?,
            "u_grid" => self.u_grid = Grid::parse("u_grid", value)?,
            "eps_grid" => self.eps_grid = Grid::parse("eps_grid", value)?,
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Applies a config file body on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", n + 1),
                    format!("expected key = value, got `{line}`"),
                )
            })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Parses a config file body over the defaults and validates it.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = ExperimentConfig::default();
        c.apply_text(text)?;
        c.validate()?;
        Ok(c)
    }

    /// (key, value) pairs in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        KEYS.iter()
            .map(|&k| {
                let v = match k {
                    "command" => self.command.to_string(),
                    "learner" => self.learner.to_string(),
                    "target" => self.target.clone(),
                    "alpha" => self.alpha.to_string(),
                    "adversary" => self.adversary.to_string(),
                    "T" => self.horizon.to_string(),
                    "seed" => self.seed.to_string(),
                    "trials" => self.trials.to_string(),
                    "out" => self.out.clone(),
                    "format" => self.format.to_string(),
                    "alpha_grid" => self.alpha_grid.to_string(),
                    "u_grid" => self.u_grid.to_string(),
                    "eps_grid" => self.eps_grid.to_string(),
                    _ => unreachable!(),
                };
                (k, v)
            })
            .collect()
    }

    /// Canonical serialization: one `key = value` line per key.
    pub fn to_canonical(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// The Stein target, scaled by `alpha`.
    pub fn target_function(&self) -> Result<TargetFunction> {
        TargetFunction::from_name(&self.target, self.alpha)
            .map_err(|e| Error::config("alpha", e.to_string()))
    }

    /// Rejects settings the selected command cannot run with; the error
    /// names the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(
                "alpha",
                format!("must be positive and finite, got {}", self.alpha),
            ));
        }
        if self.horizon == 0 {
            return Err(Error::config("T", "horizon must be at least 1"));
        }
        if self.out.is_empty() {
            return Err(Error::config("out", "path is empty"));
        }
        let uses_learner = matches!(
            self.command,
            Command::Run | Command::Verify | Command::Stochastic
        );
        if uses_learner && self.learner == LearnerKind::Cover && !self.adversary.is_boolean() {
            return Err(Error::config(
                "adversary",
                format!(
                    "cover learner needs a Boolean (±1) adversary, got `{}`",
                    self.adversary
                ),
            ));
        }
        match self.command {
            Command::Verify if self.trials == 0 => {
                return Err(Error::config("trials", "need at least 1 trial"))
            }
            Command::Verify if matches!(self.learner, LearnerKind::Ogd | LearnerKind::Mwu) => {
                check_grid(
                    &self.u_grid,
                    "u_grid",
                    |u| u.abs() <= 1.0,
                    "values must lie in [-1, 1]",
                )?
            }
            Command::Prefactors => {
                check_grid(
                    &self.alpha_grid,
                    "alpha_grid",
                    |a| a > 0.0,
                    "values must be positive",
                )?;
                check_grid(
                    &self.u_grid,
                    "u_grid",
                    |u| u.abs() <= 1.0,
                    "values must lie in [-1, 1]",
                )?;
            }
            Command::Tradeoff => check_grid(
                &self.eps_grid,
                "eps_grid",
                |e| e > 0.0 && e <= SQRT_2_OVER_PI,
                "values must lie in (0, sqrt(2/pi)]",
            )?,
            Command::CoverCheck if self.horizon > COVER_CHECK_MAX_T => {
                return Err(Error::config(
                    "T",
                    format!(
                        "exhaustive enumeration is limited to T <= {COVER_CHECK_MAX_T}, got {}",
                        self.horizon
                    ),
                ))
            }
            Command::Stochastic => {
                if self.learner != LearnerKind::Stein {
                    return Err(Error::config(
                        "learner",
                        "stochastic runs the stein learner only",
                    ));
                }
                if self.trials < crate::harness::MIN_TRIALS {
                    return Err(Error::config(
                        "trials",
                        format!(
                            "need at least {} trials, got {}",
                            crate::harness::MIN_TRIALS,
                            self.trials
                        ),
                    ));
                }
                let ok = matches!(self.adversary.second_moment(), Some(m) if m <= 1.0)
                    && self.adversary != AdversaryKind::SignWorst;
                if !ok {
                    return Err(Error::config(
                        "adversary",
                        format!(
                            "`{}` is not a stochastic adversary with E[g^2] <= 1",
                            self.adversary
                        ),
                    ));
                }
            }
            _ => {}
        }
        self.target_function()?;
        Ok(())
    }
}

fn check_grid(grid: &Grid, field: &str, ok: impl Fn(f64) -> bool, detail: &str) -> Result<()> {
    match grid.values().into_iter().find(|&v| !ok(v)) {
        Some(bad) => Err(Error::config(field, format!("{detail}, got {bad}"))),
        None => Ok(()),
    }
}

fn parse_num<T: FromStr>(field: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(field, format!("cannot parse `{value}`")))
}

macro_rules! keyword_enum {
    ($ty:ident, $field:literal, $($variant:ident => $text:literal),+ $(,)?) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($text => Ok($ty::$variant),)+
                    other => Err(Error::config(
                        $field,
                        format!("unknown value `{other}`; expected one of: {}", [$($text),+].join(", ")),
                    )),
                }
            }
        }
    };
}

keyword_enum!(Command, "command",
    Run => "run", Verify => "verify", Prefactors => "prefactors",
    Tradeoff => "tradeoff", CoverCheck => "cover-check", Stochastic => "stochastic");
keyword_enum!(LearnerKind, "learner", Stein => "stein", Ogd => "ogd", Mwu => "mwu", Cover => "cover");
keyword_enum!(Format, "format", Csv => "csv", Json => "json");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = ExperimentConfig::default();
        let text = c.to_canonical();
        let back = ExperimentConfig::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_canonical(), text);
    }

    #[test]
    fn grid_forms() {
        assert_eq!(
            Grid::parse("g", "0:1:3").unwrap().values(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(Grid::parse("g", "0.5, 2").unwrap().values(), vec![0.5, 2.0]);
        assert_eq!(Grid::parse("g", "3:9:1").unwrap().values(), vec![3.0]);
        assert!(Grid::parse("g", "0:1").is_err());
        assert!(Grid::parse("g", "0:1:0").is_err());
        assert!(Grid::parse("g", "a,b").is_err());
    }

    #[test]
    fn cover_needs_boolean_adversary() {
        let err = ExperimentConfig::from_text("learner = cover\nadversary = uniform_box:1\n")
            .unwrap_err();
        assert!(
            matches!(err, Error::Config { ref field, .. } if field == "adversary"),
            "{err}"
        );
        assert!(ExperimentConfig::from_text("learner = cover\nadversary = rademacher\n").is_ok());
    }

    #[test]
    fn unknown_key_is_named() {
        let err = ExperimentConfig::from_text("colour = red\n").unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "colour"));
    }

    #[test]
    fn field_specific_errors() {
        for (text, field) in [
            ("alpha = -1", "alpha"),
            ("T = 0", "T"),
            ("command = cover-check\nT = 13", "T"),
            (
                "command = stochastic\ntrials = 10\nadversary = rademacher",
                "trials",
            ),
            ("command = stochastic\ntrials = 1000", "adversary"),
            ("command = tradeoff\neps_grid = 0.5,0.9", "eps_grid"),
            ("format = xml", "format"),
            ("target = cubic", "target"),
        ] {
            let err = ExperimentConfig::from_text(text).unwrap_err();
            assert!(
                matches!(err, Error::Config { field: ref f, .. } if f == field),
                "{text}: {err}"
            );
        }
    }
}
