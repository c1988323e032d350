//! Classical comparators: projected online gradient descent, two-expert
//! multiplicative weights, and Cover's dynamic-programming strategy for
//! Boolean adversaries.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::harness::Learner;

/// Π_{[-1,1]}(x_prev - η g_prev).
pub fn ogd_step(x_prev: f64, g_prev: f64, eta: f64) -> f64 {
    (x_prev - eta * g_prev).clamp(-1.0, 1.0)
}

/// Two-expert MWU on losses [g, -g], played as w₁ - w₂. The softmax
/// collapses to -tanh(η s_prev).
pub fn mwu_decide(s_prev: f64, eta: f64) -> f64 {
    -(eta * s_prev).tanh()
}

/// Projected OGD with step α/√T, started at x₁ = 0.
#[derive(Debug, Clone)]
pub struct OgdLearner {
    eta: f64,
    horizon: usize,
    x: f64,
    t: usize,
}

impl OgdLearner {
    pub fn new(alpha: f64, horizon: usize) -> Result<Self> {
        check_alpha(alpha)?;
        check_horizon(horizon)?;
        Ok(OgdLearner {
            eta: alpha / (horizon as f64).sqrt(),
            horizon,
            x: 0.0,
            t: 1,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

impl Learner for OgdLearner {
    fn name(&self) -> String {
        "ogd".into()
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn decide(&mut self) -> Result<f64> {
        game_on(self.t, self.horizon)?;
        Ok(self.x)
    }

    fn observe(&mut self, g: f64) -> Result<()> {
        game_on(self.t, self.horizon)?;
        self.x = ogd_step(self.x, g, self.eta);
        self.t += 1;
        Ok(())
    }
}

/// Two-expert MWU with learning rate α/√T.
#[derive(Debug, Clone)]
pub struct MwuLearner {
    eta: f64,
    horizon: usize,
    s: f64,
    t: usize,
}

impl MwuLearner {
    pub fn new(alpha: f64, horizon: usize) -> Result<Self> {
        check_alpha(alpha)?;
        check_horizon(horizon)?;
        Ok(MwuLearner {
            eta: alpha / (horizon as f64).sqrt(),
            horizon,
            s: 0.0,
            t: 1,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

impl Learner for MwuLearner {
    fn name(&self) -> String {
        "mwu".into()
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn decide(&mut self) -> Result<f64> {
        game_on(self.t, self.horizon)?;
        Ok(mwu_decide(self.s, self.eta))
    }

    fn observe(&mut self, g: f64) -> Result<()> {
        game_on(self.t, self.horizon)?;
        self.s += g;
        self.t += 1;
        Ok(())
    }
}

type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Horizon, terminal potential ψ* and Rademacher-sum weights for Cover's
/// strategy.
#[derive(Clone)]
pub struct CoverSpec {
    horizon: usize,
    psi: Potential,
    /// ln k! for k = 0..=T
    ln_fact: Vec<f64>,
}

impl fmt::Debug for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverSpec")
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

impl CoverSpec {
    pub fn new(horizon: usize, psi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        check_horizon(horizon)?;
        let mut ln_fact = Vec::with_capacity(horizon + 1);
        let mut acc = 0.0;
        ln_fact.push(0.0);
        for k in 1..=horizon {
            acc += (k as f64).ln();
            ln_fact.push(acc);
        }
        Ok(CoverSpec {
            horizon,
            psi: Arc::new(psi),
            ln_fact,
        })
    }

    /// ψ*(x) = |x| - E|X| with X a sum of T Rademacher signs.
    pub fn centered_abs(horizon: usize) -> Result<Self> {
        let probe = CoverSpec::new(horizon, |x| x.abs())?;
        let mean_abs = probe.rs_expectation(horizon, |x| x.abs());
        CoverSpec::new(horizon, move |x| x.abs() - mean_abs)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn psi(&self, x: f64) -> f64 {
        (self.psi)(x)
    }

    /// P(X = 2k - n), k = 0..=n, for X a sum of n Rademacher signs.
    pub fn rs_pmf(&self, n: usize) -> Vec<f64> {
        assert!(n <= self.horizon, "pmf requested beyond the horizon");
        let ln_norm = n as f64 * std::f64::consts::LN_2;
        (0..=n)
            .map(|k| (self.ln_fact[n] - self.ln_fact[k] - self.ln_fact[n - k] - ln_norm).exp())
            .collect()
    }

    /// E[f(X)] for X a sum of n Rademacher signs, with compensated summation.
    pub fn rs_expectation(&self, n: usize, f: impl Fn(f64) -> f64) -> f64 {
        let pmf = self.rs_pmf(n);
        neumaier_sum(
            pmf.iter()
                .enumerate()
                .map(|(k, p)| p * f((2 * k) as f64 - n as f64)),
        )
    }
}

/// Cover's decision x_t = -½ E[ψ*(s + X + 1) - ψ*(s + X - 1)] with X a sum
/// of T - t Rademacher signs.
pub fn cover_decide(spec: &CoverSpec, t: usize, s_prev: f64) -> Result<f64> {
    if t == 0 || t > spec.horizon {
        return Err(Error::GameOver {
            round: t,
            horizon: spec.horizon,
        });
    }
    if !(s_prev.is_finite() && s_prev.fract() == 0.0) {
        return Err(Error::Protocol {
            round: t,
            detail: format!("running sum {s_prev} is not an integer; the adversary is not Boolean"),
        });
    }
    let diff = spec.rs_expectation(spec.horizon - t, |x| {
        spec.psi(s_prev + x + 1.0) - spec.psi(s_prev + x - 1.0)
    });
    Ok((-0.5 * diff).clamp(-1.0, 1.0))
}

/// E[ψ*(X)] with X a sum of T Rademacher signs; the bound Loss_T ≤ -ψ*(-Σg)
/// is achievable exactly when this is ≤ 0.
pub fn cover_achievability(spec: &CoverSpec) -> f64 {
    spec.rs_expectation(spec.horizon, |x| spec.psi(x))
}

/// Cover's strategy as a [`Learner`]. Rejects non-Boolean gradients.
#[derive(Debug, Clone)]
pub struct CoverLearner {
    spec: CoverSpec,
    s: f64,
    t: usize,
}

impl CoverLearner {
    pub fn new(spec: CoverSpec) -> Self {
        CoverLearner { spec, s: 0.0, t: 1 }
    }
}

impl Learner for CoverLearner {
    fn name(&self) -> String {
        "cover".into()
    }

    fn horizon(&self) -> usize {
        self.spec.horizon
    }

    fn decide(&mut self) -> Result<f64> {
        cover_decide(&self.spec, self.t, self.s)
    }

    fn observe(&mut self, g: f64) -> Result<()> {
        game_on(self.t, self.spec.horizon)?;
        if g.abs() != 1.0 {
            return Err(Error::Protocol {
                round: self.t,
                detail: format!("gradient {g} is not ±1"),
            });
        }
        self.s += g;
        self.t += 1;
        Ok(())
    }
}

fn neumaier_sum(it: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in it {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::config(
            "alpha",
            format!("must be positive and finite, got {alpha}"),
        ))
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        Err(Error::config("T", "horizon must be at least 1"))
    } else {
        Ok(())
    }
}

fn game_on(t: usize, horizon: usize) -> Result<()> {
    if t > horizon {
        Err(Error::GameOver { round: t, horizon })
    } else {
        Ok(())
    }
}
