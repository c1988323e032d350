//! Seeded adversaries producing the gradient sequence g_1, g_2, ….

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Adversary family and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryKind {
    /// g_t = sign(x_t), with +1 at x_t = 0.
    SignWorst,
    /// Independent fair ±1 coins.
    Rademacher,
    /// +1 with probability p, -1 otherwise.
    Bernoulli { p: f64 },
    /// Constant gradient.
    Drift { g: f64 },
    /// Uniform on [-w, w].
    UniformBox { half_width: f64 },
    /// drift + noise·N(0, 1); unbounded.
    GaussianNoisy { drift: f64, noise: f64 },
    /// A fixed sequence, repeated cyclically past its end.
    Scripted(Vec<f64>),
}

impl AdversaryKind {
    /// Whether every emitted gradient is ±1.
    pub fn is_boolean(&self) -> bool {
        match self {
            AdversaryKind::SignWorst
            | AdversaryKind::Rademacher
            | AdversaryKind::Bernoulli { .. } => true,
            AdversaryKind::Drift { g } => g.abs() == 1.0,
            AdversaryKind::Scripted(v) => v.iter().all(|g| g.abs() == 1.0),
            _ => false,
        }
    }

    /// Whether every emitted gradient satisfies |g| ≤ 1.
    pub fn is_bounded(&self) -> bool {
        match self {
            AdversaryKind::Drift { g } => g.abs() <= 1.0,
            AdversaryKind::UniformBox { half_width } => *half_width <= 1.0,
            AdversaryKind::GaussianNoisy { noise, drift } => *noise == 0.0 && drift.abs() <= 1.0,
            AdversaryKind::Scripted(v) => v.iter().all(|g| g.abs() <= 1.0),
            _ => true,
        }
    }

    /// E[g_t²] when it does not depend on the learner or the round.
    pub fn second_moment(&self) -> Option<f64> {
        match *self {
            AdversaryKind::SignWorst
            | AdversaryKind::Rademacher
            | AdversaryKind::Bernoulli { .. } => Some(1.0),
            AdversaryKind::Drift { g } => Some(g * g),
            AdversaryKind::UniformBox { half_width } => Some(half_width * half_width / 3.0),
            AdversaryKind::GaussianNoisy { drift, noise } => Some(drift * drift + noise * noise),
            AdversaryKind::Scripted(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |detail: String| Err(Error::config("adversary", detail));
        match self {
            AdversaryKind::Bernoulli { p } if !(0.0..=1.0).contains(p) => {
                bad(format!("bernoulli probability must lie in [0, 1], got {p}"))
            }
            AdversaryKind::Drift { g } if !g.is_finite() => {
                bad(format!("drift must be finite, got {g}"))
            }
            AdversaryKind::UniformBox { half_width }
                if !(half_width.is_finite() && *half_width >= 0.0) =>
            {
                bad(format!(
                    "uniform_box half-width must be finite and nonnegative, got {half_width}"
                ))
            }
            AdversaryKind::GaussianNoisy { drift, noise }
                if !(drift.is_finite() && noise.is_finite() && *noise >= 0.0) =>
            {
                bad(format!(
                    "gaussian_noisy needs finite drift and nonnegative noise, got {drift}, {noise}"
                ))
            }
            AdversaryKind::Scripted(v) if v.is_empty() => bad("scripted sequence is empty".into()),
            AdversaryKind::Scripted(v) if v.iter().any(|g| !g.is_finite()) => {
                bad("scripted sequence contains a non-finite value".into())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AdversaryKind {
    /// Canonical text form, accepted back by `from_str`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryKind::SignWorst => write!(f, "sign_worst"),
            AdversaryKind::Rademacher => write!(f, "rademacher"),
            AdversaryKind::Bernoulli { p } => write!(f, "bernoulli:{p}"),
            AdversaryKind::Drift { g } => write!(f, "drift:{g}"),
            AdversaryKind::UniformBox { half_width } => write!(f, "uniform_box:{half_width}"),
            AdversaryKind::GaussianNoisy { drift, noise } => {
                write!(f, "gaussian_noisy:{drift}:{noise}")
            }
            AdversaryKind::Scripted(v) => {
                write!(f, "scripted")?;
                v.iter().try_for_each(|g| write!(f, ":{g}"))
            }
        }
    }
}

impl FromStr for AdversaryKind {
    type Err = Error;

    /// Parses `sign_worst`, `rademacher`, `bernoulli:p`, `drift:g`,
    /// `uniform_box:w`, `gaussian_noisy:drift:noise` and `scripted:g1:g2:…`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<f64> = parts
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    Error::config("adversary", format!("`{p}` is not a number in `{s}`"))
                })
            })
            .collect::<Result<_>>()?;
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::config(
                    "adversary",
                    format!("`{name}` takes {n} parameter(s), got {}", args.len()),
                ))
            }
        };
        let kind = match name {
            "sign_worst" => arity(0).map(|_| AdversaryKind::SignWorst)?,
            "rademacher" | "rademacher_iid" => arity(0).map(|_| AdversaryKind::Rademacher)?,
            "bernoulli" | "bernoulli_biased" => {
                arity(1).map(|_| AdversaryKind::Bernoulli { p: args[0] })?
            }
            "drift" => arity(1).map(|_| AdversaryKind::Drift { g: args[0] })?,
            "uniform_box" => arity(1).map(|_| AdversaryKind::UniformBox {
                half_width: args[0],
            })?,
            "gaussian_noisy" => arity(2).map(|_| AdversaryKind::GaussianNoisy {
                drift: args[0],
                noise: args[1],
            })?,
            "scripted" => AdversaryKind::Scripted(args),
            other => {
                return Err(Error::config(
                    "adversary",
                    format!("unknown adversary `{other}`"),
                ))
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// An adversary instance with its own random stream.
#[derive(Debug, Clone)]
pub struct Adversary {
    kind: AdversaryKind,
    seed: u64,
    rng: ChaCha8Rng,
}

impl Adversary {
    pub fn new(kind: AdversaryKind, seed: u64) -> Result<Self> {
        kind.validate()?;
        Ok(Adversary {
            kind,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Adversary for trial `trial` of a batch seeded with `seed`; trials use
    /// disjoint streams of the same generator.
    pub fn for_trial(kind: AdversaryKind, seed: u64, trial: u64) -> Result<Self> {
        let mut adv = Self::new(kind, seed)?;
        adv.rng.set_stream(trial);
        Ok(adv)
    }

    pub fn kind(&self) -> &AdversaryKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Gradient for round `t` (1-based), after seeing the decision `x`.
    pub fn gradient(&mut self, t: usize, x: f64) -> f64 {
        match self.kind {
            AdversaryKind::SignWorst => {
                if x >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            AdversaryKind::Rademacher => {
                if self.rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            AdversaryKind::Bernoulli { p } => {
                if self.rng.random::<f64>() < p {
                    1.0
                } else {
                    -1.0
                }
            }
            AdversaryKind::Drift { g } => g,
            AdversaryKind::UniformBox { half_width } => {
                half_width * (2.0 * self.rng.random::<f64>() - 1.0)
            }
            AdversaryKind::GaussianNoisy { drift, noise } => {
                let z: f64 = self.rng.sample(StandardNormal);
                drift + noise * z
            }
            AdversaryKind::Scripted(ref v) => v[(t - 1) % v.len()],
        }
    }
}
