//! Bounded solutions of the Gaussian Stein equation
//!
//! ```text
//! σ² f'(x) - (x - μ) f(x) = h(x) - E[h(μ + σZ)].
//! ```
//!
//! The unique bounded solution is
//! f(x) = (1/(σ² p(x))) ∫_{-∞}^x (h(y) - E) p(y) dy with p the N(μ, σ²)
//! density, or equivalently the Ornstein–Uhlenbeck average
//! f(x) = -∫₀¹ E[h'(μ + w(x - μ) + σ√(1 - w²) Z)] dw.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::specfn::normal::{self, cdf_integral, log_cdf, log_cdf_integral, SQRT_2_OVER_PI};
use crate::specfn::quadrature::{integrate_adaptive, integrate_with_breaks};
use crate::targets::TargetFunction;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const OU_ABS_TOL: f64 = 1e-13;
const OU_REL_TOL: f64 = 1e-13;

/// Half-width (in σ) of the window on which the density-ratio form is
/// trusted.
pub const DENSITY_RATIO_WINDOW: f64 = 6.0;

/// Distance from a kink of h inside which the factor checker skips a grid
/// point.
pub const KINK_EXCLUSION: f64 = 1e-3;

/// f_{μ,σ,h}, the bounded solution of the Stein equation.
#[derive(Debug, Clone)]
pub struct SteinSolution {
    mu: f64,
    sigma: f64,
    target: TargetFunction,
    expectation: f64,
}

impl SteinSolution {
    pub fn solve(mu: f64, sigma: f64, target: TargetFunction) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain(
                "SteinSolution::solve",
                format!("mu must be finite, got {mu}"),
            ));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(
                "SteinSolution::solve",
                format!("sigma must be positive and finite, got {sigma}"),
            ));
        }
        let expectation = target.gaussian_expectation(mu, sigma);
        Ok(SteinSolution {
            mu,
            sigma,
            target,
            expectation,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn target(&self) -> &TargetFunction {
        &self.target
    }

    /// E[h(μ + σZ)], cached at construction.
    pub fn expectation(&self) -> f64 {
        self.expectation
    }

    /// f(x), routed to the closed form when the target has one and to the
    /// OU representation otherwise.
    pub fn eval(&self, x: f64) -> f64 {
        match self.target {
            TargetFunction::Abs => self.abs_closed(x),
            TargetFunction::Huber { .. } | TargetFunction::SoftThreshold { .. } => {
                self.piecewise_closed(x)
            }
            _ => self.eval_ou(x),
        }
    }

    /// Two-branch closed form for h = |x|. With a = μ/σ, z = (x - μ)/σ and
    /// Ψ(t) = tΦ(t) + φ(t):
    /// f = 1 - 2Ψ(a)Φ(z)/φ(z) for x ≤ 0 and f = -1 + 2Ψ(-a)(1 - Φ(z))/φ(z)
    /// for x > 0.
    pub fn eval_closed_abs(&self, x: f64) -> Result<f64> {
        match self.target {
            TargetFunction::Abs => Ok(self.abs_closed(x)),
            _ => Err(self.kind_mismatch("eval_closed_abs", "abs")),
        }
    }

    /// Closed form for the Huber target, piecewise across ±1/k.
    pub fn eval_closed_huber(&self, x: f64) -> Result<f64> {
        match self.target {
            TargetFunction::Huber { .. } => Ok(self.piecewise_closed(x)),
            _ => Err(self.kind_mismatch("eval_closed_huber", "huber")),
        }
    }

    /// OU representation, integrated over w = sin θ so the integrand stays
    /// smooth as the inner Gaussian collapses at w = 1.
    pub fn eval_ou(&self, x: f64) -> f64 {
        let (mu, sigma, d) = (self.mu, self.sigma, x - self.mu);
        let integrand = |theta: f64| {
            let (s, c) = theta.sin_cos();
            self.target.derivative_expectation(mu + s * d, sigma * c) * c
        };
        -integrate_adaptive(integrand, 0.0, FRAC_PI_2, OU_ABS_TOL, OU_REL_TOL)
    }

    /// Density-ratio form, integrated numerically from whichever side of μ
    /// keeps the ratio bounded. Only valid for |x - μ| ≤ 6σ; meant as an
    /// independent reference for the other evaluators.
    pub fn eval_density_ratio(&self, x: f64) -> Result<f64> {
        let z = (x - self.mu) / self.sigma;
        if !(z.abs() <= DENSITY_RATIO_WINDOW) {
            return Err(Error::domain(
                "eval_density_ratio",
                format!("x = {x} lies more than {DENSITY_RATIO_WINDOW} sigma from mu"),
            ));
        }
        let (mu, sigma, e) = (self.mu, self.sigma, self.expectation);
        // integrate in standardized units, dividing by φ(z) inside the integrand
        let breaks: Vec<f64> = self
            .target
            .kinks()
            .iter()
            .map(|&k| (k - mu) / sigma)
            .collect();
        let integrand =
            |w: f64| (self.target.eval(mu + sigma * w) - e) * (0.5 * (z * z - w * w)).exp();
        let window = crate::specfn::quadrature::GAUSSIAN_WINDOW + DENSITY_RATIO_WINDOW;
        let v = if z <= 0.0 {
            integrate_with_breaks(integrand, -window, z, &breaks, 1e-14, 1e-13)
        } else {
            -integrate_with_breaks(integrand, z, window, &breaks, 1e-14, 1e-13)
        };
        Ok(v / sigma)
    }

    /// Finite-difference check of the Stein factors
    /// ‖f‖ ≤ 1, ‖f'‖ ≤ √(2/π)/σ, ‖f''‖ ≤ 2/σ² and, for convex h, f' ≤ 0.
    ///
    /// Grid points within [`KINK_EXCLUSION`] of a kink of h are skipped,
    /// where the pointwise second difference is not meaningful.
    pub fn check_stein_factors(&self, grid: &[f64]) -> Result<SteinFactorReport> {
        self.check_stein_factors_with(grid, FactorTolerances::default())
    }

    pub fn check_stein_factors_with(
        &self,
        grid: &[f64],
        tol: FactorTolerances,
    ) -> Result<SteinFactorReport> {
        if grid.is_empty() {
            return Err(Error::domain(
                "check_stein_factors",
                "grid must be nonempty",
            ));
        }
        let step = 1e-3 * self.sigma.min(1.0);
        let kinks = self.target.kinks();
        let mut r = SteinFactorReport {
            fp_bound: SQRT_2_OVER_PI / self.sigma,
            fpp_bound: 2.0 / (self.sigma * self.sigma),
            max_fp: f64::NEG_INFINITY,
            ..SteinFactorReport::default()
        };
        for &x in grid {
            if kinks
                .iter()
                .any(|&k| (x - k).abs() < KINK_EXCLUSION + 2.0 * step)
            {
                r.points_excluded += 1;
                continue;
            }
            let (fm, f0, fp) = (self.eval(x - step), self.eval(x), self.eval(x + step));
            let d1 = (fp - fm) / (2.0 * step);
            let d2 = (fp - 2.0 * f0 + fm) / (step * step);
            r.points_checked += 1;
            r.max_abs_f = r.max_abs_f.max(f0.abs());
            r.max_abs_fp = r.max_abs_fp.max(d1.abs());
            r.max_abs_fpp = r.max_abs_fpp.max(d2.abs());
            r.max_fp = r.max_fp.max(d1);
        }
        r.f_ok = r.max_abs_f <= 1.0 + tol.f;
        r.fp_ok = r.max_abs_fp <= r.fp_bound + tol.fp;
        r.fpp_ok = r.max_abs_fpp <= r.fpp_bound + tol.fpp;
        r.monotone_ok = if self.target.is_convex() {
            Some(r.max_fp <= tol.monotone)
        } else {
            None
        };
        Ok(r)
    }

    fn kind_mismatch(&self, function: &'static str, expected: &str) -> Error {
        Error::domain(
            function,
            format!("expected a {expected} target, got {}", self.target.name()),
        )
    }

    fn abs_closed(&self, x: f64) -> f64 {
        let a = self.mu / self.sigma;
        let z = (x - self.mu) / self.sigma;
        if x <= 0.0 {
            // Φ(z)/φ(z) is bounded for z ≤ 0 and may overflow for z > 0
            let ratio_term = if z <= 0.0 {
                2.0 * cdf_integral(a) * normal::cdf_over_pdf(z)
            } else {
                2.0 * (log_cdf_integral(a) + log_cdf(z) + 0.5 * z * z + LN_SQRT_2PI).exp()
            };
            1.0 - ratio_term
        } else {
            let ratio_term = if z >= 0.0 {
                2.0 * cdf_integral(-a) * normal::mills(z)
            } else {
                2.0 * (log_cdf_integral(-a) + log_cdf(-z) + 0.5 * z * z + LN_SQRT_2PI).exp()
            };
            -1.0 + ratio_term
        }
    }

    fn piecewise_closed(&self, x: f64) -> f64 {
        let pieces = piecewise_quadratic(&self.target).expect("piecewise target");
        let (mu, sigma) = (self.mu, self.sigma);
        let z = (x - mu) / sigma;
        let left_side = z <= 0.0;
        let mut acc = 0.0;
        for p in &pieces {
            // standardized coefficients of h(μ + σw) - E
            let q0 = p.c0 + p.c1 * mu + p.c2 * mu * mu - self.expectation;
            let q1 = (p.c1 + 2.0 * p.c2 * mu) * sigma;
            let q2 = p.c2 * sigma * sigma;
            let lo = (p.lo - mu) / sigma;
            let hi = (p.hi - mu) / sigma;
            let (l, r) = if left_side {
                (lo, hi.min(z))
            } else {
                (lo.max(z), hi)
            };
            if !(l < r) {
                continue;
            }
            acc += gaussian_poly_ratio(q0, q1, q2, l, r, z, left_side);
        }
        let f = if left_side { acc } else { -acc };
        f / sigma
    }
}

/// Tolerances added to the Stein-factor bounds by the checker.
#[derive(Debug, Clone, Copy)]
pub struct FactorTolerances {
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
    pub monotone: f64,
}

impl Default for FactorTolerances {
    fn default() -> Self {
        FactorTolerances {
            f: 1e-12,
            fp: 1e-4,
            fpp: 1e-2,
            monotone: 1e-8,
        }
    }
}

/// Outcome of [`SteinSolution::check_stein_factors`].
#[derive(Debug, Clone, Default)]
pub struct SteinFactorReport {
    pub points_checked: usize,
    pub points_excluded: usize,
    pub max_abs_f: f64,
    pub max_abs_fp: f64,
    pub max_abs_fpp: f64,
    /// Largest finite-difference f' seen (≤ 0 for convex h).
    pub max_fp: f64,
    pub fp_bound: f64,
    pub fpp_bound: f64,
    pub f_ok: bool,
    pub fp_ok: bool,
    pub fpp_ok: bool,
    /// `None` for nonconvex targets, where monotonicity is not claimed.
    pub monotone_ok: Option<bool>,
}

impl SteinFactorReport {
    pub fn all_ok(&self) -> bool {
        self.f_ok && self.fp_ok && self.fpp_ok && self.monotone_ok.unwrap_or(true)
    }
}

/// h(x) = c0 + c1 x + c2 x² on [lo, hi].
#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    c0: f64,
    c1: f64,
    c2: f64,
}

fn piecewise_quadratic(h: &TargetFunction) -> Option<Vec<Piece>> {
    let inf = f64::INFINITY;
    match *h {
        TargetFunction::Abs => Some(vec![
            Piece {
                lo: -inf,
                hi: 0.0,
                c0: 0.0,
                c1: -1.0,
                c2: 0.0,
            },
            Piece {
                lo: 0.0,
                hi: inf,
                c0: 0.0,
                c1: 1.0,
                c2: 0.0,
            },
        ]),
        TargetFunction::Huber { k } => Some(vec![
            Piece {
                lo: -inf,
                hi: -1.0 / k,
                c0: -0.5 / k,
                c1: -1.0,
                c2: 0.0,
            },
            Piece {
                lo: -1.0 / k,
                hi: 1.0 / k,
                c0: 0.0,
                c1: 0.0,
                c2: 0.5 * k,
            },
            Piece {
                lo: 1.0 / k,
                hi: inf,
                c0: -0.5 / k,
                c1: 1.0,
                c2: 0.0,
            },
        ]),
        TargetFunction::SoftThreshold { eta } => Some(vec![
            Piece {
                lo: -inf,
                hi: -1.0 / eta,
                c0: -1.0 / eta,
                c1: -1.0,
                c2: 0.0,
            },
            Piece {
                lo: -1.0 / eta,
                hi: 1.0 / eta,
                c0: 0.0,
                c1: 0.0,
                c2: 0.0,
            },
            Piece {
                lo: 1.0 / eta,
                hi: inf,
                c0: -1.0 / eta,
                c1: 1.0,
                c2: 0.0,
            },
        ]),
        _ => None,
    }
}

/// ∫_l^r (q0 + q1 w + q2 w²) φ(w) dw / φ(z).
///
/// On the left side (r ≤ z ≤ 0) masses are taken as Φ-differences, on the
/// right side (0 < z ≤ l) as tail differences, so every ratio Φ(t)/φ(z) or
/// (1 - Φ(t))/φ(z) stays bounded.
fn gaussian_poly_ratio(q0: f64, q1: f64, q2: f64, l: f64, r: f64, z: f64, left_side: bool) -> f64 {
    // φ(t)/φ(z) and t·φ(t)/φ(z), zero at infinite t
    let pdf_ratio = |t: f64| {
        if t.is_infinite() {
            0.0
        } else {
            (0.5 * (z * z - t * t)).exp()
        }
    };
    let tpdf_ratio = |t: f64| {
        if t.is_infinite() {
            0.0
        } else {
            t * pdf_ratio(t)
        }
    };
    let mass_ratio = |t: f64| -> f64 {
        // Φ(t)/φ(z) on the left side, (1 - Φ(t))/φ(z) on the right side;
        // only the vanishing infinite endpoint can occur on each side
        if t.is_infinite() {
            return 0.0;
        }
        let lc = if left_side { log_cdf(t) } else { log_cdf(-t) };
        (lc + 0.5 * z * z + LN_SQRT_2PI).exp()
    };
    let mass = if left_side {
        mass_ratio(r) - mass_ratio(l)
    } else {
        mass_ratio(l) - mass_ratio(r)
    };
    let first = pdf_ratio(l) - pdf_ratio(r);
    let second = mass - (tpdf_ratio(r) - tpdf_ratio(l));
    q0 * mass + q1 * first + if q2 != 0.0 { q2 * second } else { 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_sol(mu: f64, sigma: f64) -> SteinSolution {
        SteinSolution::solve(mu, sigma, TargetFunction::Abs).unwrap()
    }

    #[test]
    fn rejects_degenerate_sigma() {
        assert!(SteinSolution::solve(0.0, 0.0, TargetFunction::Abs).is_err());
        assert!(SteinSolution::solve(0.0, -1.0, TargetFunction::Abs).is_err());
    }

    #[test]
    fn abs_is_odd_at_center() {
        assert_eq!(abs_sol(0.0, 1.0).eval(0.0), 0.0);
        assert!(abs_sol(0.0, 1.0).eval_ou(0.0).abs() < 1e-14);
    }

    #[test]
    fn abs_far_left() {
        let f = abs_sol(0.0, 1.0).eval_closed_abs(-10.0).unwrap();
        let expect = 1.0 - SQRT_2_OVER_PI * normal::cdf(-10.0) / normal::pdf(-10.0);
        assert!((f - expect).abs() < 1e-14);
        assert!((f - (1.0 - SQRT_2_OVER_PI / 10.0)).abs() < 1e-3);
    }

    #[test]
    fn abs_limits() {
        let s = abs_sol(0.7, 2.0);
        assert!((s.eval(-1e4) - 1.0).abs() < 1e-3);
        assert!((s.eval(1e4) + 1.0).abs() < 1e-3);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        assert!(abs_sol(0.0, 1.0).eval_closed_huber(0.0).is_err());
        let h = SteinSolution::solve(0.0, 1.0, TargetFunction::huber(1.0).unwrap()).unwrap();
        assert!(h.eval_closed_abs(0.0).is_err());
    }

    #[test]
    fn huber_odd_at_center() {
        let h = SteinSolution::solve(0.0, 1.0, TargetFunction::huber(1.0).unwrap()).unwrap();
        assert!(h.eval_closed_huber(0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn piecewise_engine_matches_abs_closed_form() {
        for &(mu, sigma) in &[(0.0, 1.0), (-1.0, 1.0), (2.5, 0.7), (-30.0, 2.0)] {
            let s = abs_sol(mu, sigma);
            for i in 0..41 {
                let x = mu + sigma * (-8.0 + 0.4 * i as f64);
                let a = s.abs_closed(x);
                let b = s.piecewise_closed(x);
                assert!(
                    (a - b).abs() < 1e-12,
                    "mu={mu} sigma={sigma} x={x}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn representations_agree() {
        let targets = [
            TargetFunction::Abs,
            TargetFunction::huber(1.0).unwrap(),
            TargetFunction::huber(2.5).unwrap(),
            TargetFunction::soft_threshold(1.5).unwrap(),
            TargetFunction::log_cosh(2.0).unwrap(),
        ];
        for t in targets {
            for &(mu, sigma) in &[(0.0, 1.0), (2.0, 3.0), (-1.3, 0.4)] {
                let s = SteinSolution::solve(mu, sigma, t.clone()).unwrap();
                for i in 0..25 {
                    let x = mu + sigma * (-5.9 + 0.49 * i as f64);
                    let e = s.eval(x);
                    let o = s.eval_ou(x);
                    let d = s.eval_density_ratio(x).unwrap();
                    assert!(
                        (e - o).abs() < 1e-10,
                        "{t:?} mu={mu} x={x}: eval {e} ou {o}"
                    );
                    assert!(
                        (e - d).abs() < 1e-10,
                        "{t:?} mu={mu} x={x}: eval {e} ratio {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn density_ratio_window_enforced() {
        assert!(abs_sol(0.0, 1.0).eval_density_ratio(6.5).is_err());
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(abs_sol(0.0, 1.0).check_stein_factors(&[]).is_err());
    }
}
