//! Target functions h that parameterize the Stein learner.
//!
//! Every target is 1-Lipschitz. Each one bundles its value, a fixed choice of
//! subgradient, the convex conjugate evaluated at -u, and Gaussian
//! expectations of h and h'. The built-in kinds have closed forms for both
//! expectations except log-cosh, whose expectations are integrated
//! adaptively.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::specfn::normal::{self, cdf_integral};
use crate::specfn::quadrature::gaussian_expectation_adaptive;

/// Absolute tolerance for numeric Gaussian expectations.
pub const NUMERIC_EXPECTATION_TOL: f64 = 1e-13;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied 1-Lipschitz target.
#[derive(Clone)]
pub struct CustomTarget {
    name: String,
    eval: ScalarFn,
    derivative: ScalarFn,
    kinks: Vec<f64>,
    convex: bool,
}

impl CustomTarget {
    /// `kinks` lists the points where `derivative` jumps; numeric integrals
    /// split there.
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        kinks: Vec<f64>,
        convex: bool,
    ) -> Self {
        CustomTarget {
            name: name.into(),
            eval: Arc::new(eval),
            derivative: Arc::new(derivative),
            kinks,
            convex,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomTarget")
            .field("name", &self.name)
            .field("kinks", &self.kinks)
            .field("convex", &self.convex)
            .finish_non_exhaustive()
    }
}

/// Target function h.
#[derive(Debug, Clone)]
pub enum TargetFunction {
    /// h(x) = |x|
    Abs,
    /// h(x) = (k/2)x² for |x| ≤ 1/k, |x| - 1/(2k) otherwise
    Huber {
        k: f64,
    },
    /// h(x) = ln(cosh(ηx))/η
    LogCosh {
        eta: f64,
    },
    /// h(x) = max(|x| - 1/η, 0)
    SoftThreshold {
        eta: f64,
    },
    Custom(CustomTarget),
}

fn check_scale(function: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(
            function,
            format!("scale must be positive and finite, got {v}"),
        ))
    }
}

impl TargetFunction {
    pub fn huber(k: f64) -> Result<Self> {
        Ok(TargetFunction::Huber {
            k: check_scale("huber", k)?,
        })
    }

    pub fn log_cosh(eta: f64) -> Result<Self> {
        Ok(TargetFunction::LogCosh {
            eta: check_scale("log_cosh", eta)?,
        })
    }

    pub fn soft_threshold(eta: f64) -> Result<Self> {
        Ok(TargetFunction::SoftThreshold {
            eta: check_scale("soft_threshold", eta)?,
        })
    }

    /// Builds a target from its configuration name (`abs`, `huber`,
    /// `logcosh`, `softthr`) and scale parameter. The scale is ignored for
    /// `abs`.
    pub fn from_name(name: &str, scale: f64) -> Result<Self> {
        match name {
            "abs" => Ok(TargetFunction::Abs),
            "huber" => Self::huber(scale),
            "logcosh" => Self::log_cosh(scale),
            "softthr" => Self::soft_threshold(scale),
            other => Err(Error::config("target", format!("unknown target `{other}`"))),
        }
    }

    /// Configuration name of the kind (`custom:<name>` for custom targets).
    pub fn name(&self) -> String {
        match self {
            TargetFunction::Abs => "abs".into(),
            TargetFunction::Huber { .. } => "huber".into(),
            TargetFunction::LogCosh { .. } => "logcosh".into(),
            TargetFunction::SoftThreshold { .. } => "softthr".into(),
            TargetFunction::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// The same target shifted vertically by `c`. The learner only consumes
    /// h', so its decisions are unchanged by the shift.
    pub fn shifted(&self, c: f64) -> TargetFunction {
        let base = self.clone();
        let deriv = self.clone();
        TargetFunction::Custom(CustomTarget::new(
            format!("{}+{c}", self.name()),
            move |x| base.eval(x) + c,
            move |x| deriv.derivative(x),
            self.kinks(),
            self.is_convex(),
        ))
    }

    pub fn lipschitz_constant(&self) -> f64 {
        1.0
    }

    pub fn is_convex(&self) -> bool {
        match self {
            TargetFunction::Custom(c) => c.convex,
            _ => true,
        }
    }

    /// Whether h is known to be even. Custom targets report `false`.
    pub fn is_even(&self) -> bool {
        !matches!(self, TargetFunction::Custom(_))
    }

    /// Points where h' is discontinuous or h'' jumps. Log-cosh reports its
    /// center, where h' changes fastest.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            TargetFunction::Abs => vec![0.0],
            TargetFunction::Huber { k } => vec![-1.0 / k, 1.0 / k],
            TargetFunction::LogCosh { .. } => vec![0.0],
            TargetFunction::SoftThreshold { eta } => vec![-1.0 / eta, 1.0 / eta],
            TargetFunction::Custom(c) => c.kinks.clone(),
        }
    }

    /// Points where h' itself jumps (a subset of [`Self::kinks`]).
    pub fn derivative_jumps(&self) -> Vec<f64> {
        match self {
            TargetFunction::Abs | TargetFunction::SoftThreshold { .. } => self.kinks(),
            TargetFunction::Huber { .. } | TargetFunction::LogCosh { .. } => Vec::new(),
            TargetFunction::Custom(c) => c.kinks.clone(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            TargetFunction::Abs => x.abs(),
            TargetFunction::Huber { k } => {
                let a = x.abs();
                if a <= 1.0 / k {
                    0.5 * k * x * x
                } else {
                    a - 0.5 / k
                }
            }
            TargetFunction::LogCosh { eta } => {
                // |x| + ln((1 + e^{-2η|x|})/2)/η, overflow-free
                let a = x.abs();
                a + ((-2.0 * eta * a).exp().ln_1p() - std::f64::consts::LN_2) / eta
            }
            TargetFunction::SoftThreshold { eta } => (x.abs() - 1.0 / eta).max(0.0),
            TargetFunction::Custom(ref c) => (c.eval)(x),
        }
    }

    /// A subgradient of h at x. Kinks use h'(0) = 0 for `Abs` and
    /// h'(x) = sign(x)·1[|x| > 1/η] for `SoftThreshold`.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            TargetFunction::Abs => sign0(x),
            TargetFunction::Huber { k } => (k * x).clamp(-1.0, 1.0),
            TargetFunction::LogCosh { eta } => (eta * x).tanh(),
            TargetFunction::SoftThreshold { eta } => {
                if x.abs() > 1.0 / eta {
                    sign0(x)
                } else {
                    0.0
                }
            }
            TargetFunction::Custom(ref c) => (c.derivative)(x),
        }
    }

    /// Convex conjugate at -u: h*(-u) = sup_x (-ux - h(x)), for u ∈ [-1, 1].
    pub fn conjugate_at_neg(&self, u: f64) -> Result<f64> {
        if !(u.abs() <= 1.0) {
            return Err(Error::domain(
                "conjugate_at_neg",
                format!("comparator must lie in [-1, 1], got {u}"),
            ));
        }
        Ok(match *self {
            TargetFunction::Abs => 0.0,
            TargetFunction::Huber { k } => u * u / (2.0 * k),
            TargetFunction::LogCosh { eta } => (xlogx(1.0 + u) + xlogx(1.0 - u)) / (2.0 * eta),
            TargetFunction::SoftThreshold { eta } => u.abs() / eta,
            TargetFunction::Custom(_) => self.numeric_conjugate_at_neg(u),
        })
    }

    /// Numeric sup_x(-ux - h(x)). Convex targets use golden-section search on
    /// [-10⁴, 10⁴]; nonconvex ones a grid of step 10⁻³ on [-50, 50].
    pub fn numeric_conjugate_at_neg(&self, u: f64) -> f64 {
        let objective = |x: f64| -u * x - self.eval(x);
        if self.is_convex() {
            golden_max(objective, -1e4, 1e4)
        } else {
            (0..=100_000)
                .map(|i| objective(-50.0 + 1e-3 * i as f64))
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }

    /// E[h(mu + sigma Z)] for Z ~ N(0, 1). The sign of sigma is irrelevant
    /// and sigma = 0 returns h(mu).
    pub fn gaussian_expectation(&self, mu: f64, sigma: f64) -> f64 {
        let sigma = sigma.abs();
        if sigma == 0.0 {
            return self.eval(mu);
        }
        match *self {
            TargetFunction::Abs => {
                let m = mu / sigma;
                sigma * (cdf_integral(m) + cdf_integral(-m))
            }
            TargetFunction::Huber { k } => {
                let a = (-1.0 / k - mu) / sigma;
                let b = (1.0 / k - mu) / sigma;
                let half_k = 0.5 / k;
                let left = sigma * cdf_integral(a) + half_k * normal::cdf(a);
                let right = sigma * cdf_integral(-b) + half_k * normal::sf(b);
                let mass = normal_mass(a, b);
                let (pa, pb) = (normal::pdf(a), normal::pdf(b));
                let second = mass - (b * pb - a * pa);
                let mid = 0.5
                    * k
                    * (mu * mu * mass + 2.0 * mu * sigma * (pa - pb) + sigma * sigma * second);
                left + mid + right
            }
            TargetFunction::SoftThreshold { eta } => {
                let a = (-1.0 / eta - mu) / sigma;
                let b = (1.0 / eta - mu) / sigma;
                sigma * (cdf_integral(a) + cdf_integral(-b))
            }
            TargetFunction::LogCosh { .. } | TargetFunction::Custom(_) => {
                self.numeric_gaussian_expectation(mu, sigma)
            }
        }
    }

    /// E[h(mu + sigma Z)] by adaptive quadrature split at the kinks.
    pub fn numeric_gaussian_expectation(&self, mu: f64, sigma: f64) -> f64 {
        let tol = NUMERIC_EXPECTATION_TOL * (1.0 + mu.abs() + sigma.abs());
        gaussian_expectation_adaptive(|x| self.eval(x), mu, sigma.abs(), &self.kinks(), tol)
    }

    /// E[h'(mu + sigma Z)] for Z ~ N(0, 1); sigma = 0 returns h'(mu).
    pub fn derivative_expectation(&self, mu: f64, sigma: f64) -> f64 {
        let sigma = sigma.abs();
        if sigma == 0.0 {
            return self.derivative(mu);
        }
        match *self {
            TargetFunction::Abs => normal::erf(mu / (sigma * std::f64::consts::SQRT_2)),
            TargetFunction::SoftThreshold { eta } => {
                let a = (-1.0 / eta - mu) / sigma;
                let b = (1.0 / eta - mu) / sigma;
                normal::sf(b) - normal::cdf(a)
            }
            TargetFunction::Huber { k } => {
                let a = (-1.0 / k - mu) / sigma;
                let b = (1.0 / k - mu) / sigma;
                let inner = mu * normal_mass(a, b) + sigma * (normal::pdf(a) - normal::pdf(b));
                normal::sf(b) - normal::cdf(a) + k * inner
            }
            TargetFunction::LogCosh { eta } => log_cosh_derivative_expectation(eta, mu, sigma),
            TargetFunction::Custom(_) => self.numeric_derivative_expectation(mu, sigma),
        }
    }

    /// E[h'(mu + sigma Z)] by adaptive quadrature split at the kinks.
    pub fn numeric_derivative_expectation(&self, mu: f64, sigma: f64) -> f64 {
        gaussian_expectation_adaptive(
            |x| self.derivative(x),
            mu,
            sigma.abs(),
            &self.kinks(),
            NUMERIC_EXPECTATION_TOL,
        )
    }
}

/// E[tanh(η(μ + σZ))].
///
/// Expanding tanh(y) = sign(y)(1 + 2Σ_{j≥1}(-1)^j e^{-2j|y|}) and taking
/// expectations term by term gives, with b = μ/σ and m the Mills ratio,
///
/// E = erf(b/√2) - 2 Σ_{k≥0} (-1)^k F(k+1),
/// F(j) = φ(b)[m(2jησ - b) - m(2jησ + b)].
///
/// F(j) are moments of a signed-constant measure on [0, 1], so the
/// alternating sum is accelerated with the Cohen–Rodriguez Villegas–Zagier
/// weights, whose error decays like 5.8^{-n}.
fn log_cosh_derivative_expectation(eta: f64, mu: f64, sigma: f64) -> f64 {
    const TERMS: usize = 19;
    let b = mu / sigma;
    let step = 2.0 * eta * sigma;
    let term = |j: f64| pdf_times_mills(b, j * step, -1.0) - pdf_times_mills(b, j * step, 1.0);
    let mut d = (3.0 + 8f64.sqrt()).powi(TERMS as i32);
    d = 0.5 * (d + 1.0 / d);
    let (mut bk, mut ck, mut sum) = (-1.0, -d, 0.0);
    let n = TERMS as f64;
    for k in 0..TERMS {
        let kf = k as f64;
        ck = bk - ck;
        sum += ck * term(kf + 1.0);
        bk *= (kf + n) * (kf - n) / ((kf + 0.5) * (kf + 1.0));
    }
    normal::erf(b / std::f64::consts::SQRT_2) - 2.0 * sum / d
}

/// φ(b)·m(a + sb) for s = ±1, without overflow in either factor.
fn pdf_times_mills(b: f64, a: f64, s: f64) -> f64 {
    let x = a + s * b;
    if x > 5.0 {
        normal::pdf(b) * normal::mills(x)
    } else {
        // (x² - b²)/2 = a(a + 2sb)/2, free of cancellation
        normal::sf(x) * (0.5 * a * (a + 2.0 * s * b)).exp()
    }
}

fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// x ln x with 0 ln 0 = 0.
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// P(a < Z < b) without cancellation in either tail.
pub(crate) fn normal_mass(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        normal::sf(a) - normal::sf(b)
    } else if b < 0.0 {
        normal::cdf(b) - normal::cdf(a)
    } else {
        1.0 - normal::cdf(a) - normal::sf(b)
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    f(0.5 * (lo + hi)).max(f1).max(f2)
}
