//! Gauss–Hermite and Gauss–Legendre rules, plus an adaptive Gauss–Kronrod
//! integrator used wherever an integrand has kinks or sharp transitions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::normal;

/// Default node count for Gauss–Hermite rules.
pub const DEFAULT_HERMITE_NODES: usize = 96;
/// Default node count for Gauss–Legendre rules on [0, 1].
pub const DEFAULT_LEGENDRE_NODES: usize = 64;

const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Weight e^{-x²} on the real line.
    Hermite,
    /// Unit weight on [0, 1].
    Legendre01,
}

/// A fixed quadrature rule. Nodes are strictly increasing and weights are
/// strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// E[f(mu + sigma Z)] for Z ~ N(0,1). Only meaningful for Hermite rules.
    pub fn normal_expectation<F: FnMut(f64) -> f64>(&self, mu: f64, sigma: f64, mut f: F) -> f64 {
        debug_assert_eq!(self.kind, RuleKind::Hermite);
        let scale = std::f64::consts::SQRT_2 * sigma;
        self.integrate(|x| f(mu + scale * x)) / PI.sqrt()
    }
}

/// Gauss–Hermite rule with `n` nodes for the weight e^{-x²}.
///
/// Roots come from Newton iteration on the orthonormal Hermite recurrence,
/// which stays in range for large `n`.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::domain(
            "gauss_hermite",
            "node count must be at least 1",
        ));
    }
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let mut roots = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.166_67),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        for _ in 0..NEWTON_MAX_ITER {
            let (p1, p2) = hermite_orthonormal(n, z, pim4);
            let pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, p2) = hermite_orthonormal(n, z, pim4);
        let pp = (2.0 * nf).sqrt() * p2;
        roots[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    // roots are positive and descending; mirror them into ascending order
    let mut nodes = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..m {
        nodes.push(-roots[i]);
        w.push(weights[i]);
    }
    let mirror_from = if n % 2 == 1 { m - 1 } else { m };
    for i in (0..mirror_from).rev() {
        nodes.push(roots[i]);
        w.push(weights[i]);
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights: w,
        kind: RuleKind::Hermite,
    })
}

/// Returns (p_n(z), p_{n-1}(z)) for the orthonormal Hermite polynomials.
fn hermite_orthonormal(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// Gauss–Legendre rule with `n` nodes mapped to [0, 1].
pub fn gauss_legendre01(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::domain(
            "gauss_legendre01",
            "node count must be at least 1",
        ));
    }
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p1, p2) = legendre(n, z);
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        let (p1, p2) = legendre(n, z);
        if z * z != 1.0 {
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
        }
        // z > 0 descending with i; map [-1,1] -> [0,1]
        let w = 1.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = 0.5 * (1.0 - z);
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::Legendre01,
    })
}

/// Returns (P_n(z), P_{n-1}(z)).
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

/// Shared default Hermite rule ([`DEFAULT_HERMITE_NODES`] nodes).
pub fn default_hermite() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(DEFAULT_HERMITE_NODES).expect("nonzero node count"))
}

/// Shared default Legendre rule on [0, 1] ([`DEFAULT_LEGENDRE_NODES`] nodes).
pub fn default_legendre01() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre01(DEFAULT_LEGENDRE_NODES).expect("nonzero node count"))
}

// Kronrod 15 / Gauss 7 pair (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 400;

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        resk += WGK[j] * pair;
        if j % 2 == 1 {
            resg += WG[j / 2] * pair;
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate falls below max(abs_tol, rel_tol·|I|) or the interval budget is
/// exhausted. The estimate |K15 - G7| is conservative for smooth integrands.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> f64 {
    if a == b {
        return 0.0;
    }
    let (r0, e0) = kronrod15(&mut f, a, b);
    let mut pieces = vec![(a, b, r0, e0)];
    let mut total = r0;
    let mut err = e0;
    while err > abs_tol.max(rel_tol * total.abs()) && pieces.len() < MAX_INTERVALS {
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, r, e) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // cannot split further; keep the piece as is
            pieces.push((lo, hi, r, 0.0));
            err -= e;
            continue;
        }
        let (r1, e1) = kronrod15(&mut f, lo, mid);
        let (r2, e2) = kronrod15(&mut f, mid, hi);
        pieces.push((lo, mid, r1, e1));
        pieces.push((mid, hi, r2, e2));
        total += r1 + r2 - r;
        err += e1 + e2 - e;
    }
    // re-sum to shed the drift of the running updates
    pieces.iter().map(|p| p.2).sum()
}

/// Adaptive integration over [a, b] split at the given interior points.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut lo = a;
    let mut sum = 0.0;
    let per_piece = abs_tol / (cuts.len() + 1) as f64;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        sum += integrate_adaptive(&mut f, lo, hi, per_piece, rel_tol);
        lo = hi;
    }
    sum
}

/// Half-width, in standard deviations, of the window used for numeric
/// Gaussian expectations. The neglected mass is below 1e-32.
pub const GAUSSIAN_WINDOW: f64 = 12.0;

/// E[f(mu + sigma Z)] by adaptive integration against the normal density,
/// split wherever f has a kink (`kinks` are given in x-space).
pub fn gaussian_expectation_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    mu: f64,
    sigma: f64,
    kinks: &[f64],
    abs_tol: f64,
) -> f64 {
    if sigma == 0.0 {
        return f(mu);
    }
    let zbreaks: Vec<f64> = kinks.iter().map(|&k| (k - mu) / sigma).collect();
    integrate_with_breaks(
        |z| f(mu + sigma * z) * normal::pdf(z),
        -GAUSSIAN_WINDOW,
        GAUSSIAN_WINDOW,
        &zbreaks,
        abs_tol,
        1e-13,
    )
}
