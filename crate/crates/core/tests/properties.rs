//! Property tests for invariants that span modules.

use proptest::prelude::*;
use steinolo::baselines::{CoverSpec, MwuLearner, OgdLearner};
use steinolo::harness::{
    gamma_mwu, gamma_ogd, play, pathwise_bound, Adversary, AdversaryKind, GameTranscript,
};
use steinolo::olo::{
    decide, decide_closed_abs, decide_generic, rho_sqrt_horizon, LearnerState, RhoSchedule,
    RoundState,
};
use steinolo::specfn::normal::{self, cdf_integral, mills};
use steinolo::specfn::quadrature::{gauss_hermite, gauss_legendre01, integrate_adaptive};
use steinolo::specfn::{erfi, erfi_inverse, owens_t};
use steinolo::{SteinSolution, TargetFunction};

fn kind(i: usize, scale: f64) -> TargetFunction {
    match i % 4 {
        0 => TargetFunction::Abs,
        1 => TargetFunction::huber(scale).unwrap(),
        2 => TargetFunction::log_cosh(scale).unwrap(),
        _ => TargetFunction::soft_threshold(scale).unwrap(),
    }
}

fn any_kind() -> impl Strategy<Value = TargetFunction> {
    (0usize..4, 0.2f64..5.0).prop_map(|(i, s)| kind(i, s))
}

/// -(1/2)∫₀¹ τ^{-1/2} E[h'(s + √(v - τc)Z)] dτ with τ = u².
fn decide_tau(h: &TargetFunction, s: f64, v: f64, c: f64) -> f64 {
    -integrate_adaptive(
        |u| h.derivative_expectation(s, (v - u * u * c).max(0.0).sqrt()),
        0.0,
        1.0,
        1e-12,
        1e-11,
    )
}

/// -∫₀^∞ e^{-τ} E[h'(s + √(v - e^{-2τ}c)Z)] dτ, truncated where e^{-τ} < 1e-17.
fn decide_exp_mixture(h: &TargetFunction, s: f64, v: f64, c: f64) -> f64 {
    -integrate_adaptive(
        |tau| {
            let w = (-tau).exp();
            w * h.derivative_expectation(s, (v - w * w * c).max(0.0).sqrt())
        },
        0.0,
        40.0,
        1e-12,
        1e-11,
    )
}

/// E[f(mu + sigma Z)] by 20-node Gauss–Legendre on 48 panels of
/// [mu - 12 sigma, mu + 12 sigma], with extra breaks at `kinks`. Gauss–Hermite
/// converges only like 1/n across a kink, so kinked integrands need this.
fn composite_normal_expectation(f: impl Fn(f64) -> f64, mu: f64, sigma: f64, kinks: &[f64]) -> f64 {
    let rule = gauss_legendre01(20).unwrap();
    let mut edges: Vec<f64> = (0..=48).map(|i| -12.0 + 0.5 * i as f64).collect();
    // log-cosh has no kink but bends on the scale 1/η around 0
    let bends = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0].into_iter().flat_map(|b| [b, -b]);
    edges.extend(kinks.iter().copied().chain(bends).map(|k| (k - mu) / sigma).filter(|z| z.abs() < 12.0));
    edges.sort_by(f64::total_cmp);
    edges
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            (b - a) * rule.integrate(|u| {
                let z = a + (b - a) * u;
                normal::pdf(z) * f(mu + sigma * z)
            })
        })
        .sum()
}

/// E_Z[f_{s, ρ_{t-1}, h}(s + ρ_t Z)], integrating the Stein solution directly.
fn decide_direct(h: &TargetFunction, s: f64, v: f64, c: f64) -> f64 {
    let sol = SteinSolution::solve(s, v.sqrt(), h.clone()).unwrap();
    let rho = (v - c).max(0.0).sqrt();
    if rho == 0.0 {
        return sol.eval(s);
    }
    composite_normal_expectation(|x| sol.eval(x), s, rho, &h.kinks())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cdf_derivative_is_pdf(x in -6.0f64..6.0) {
        let d = 1e-5;
        let fd = (normal::cdf(x + d) - normal::cdf(x - d)) / (2.0 * d);
        prop_assert!((fd - normal::pdf(x)).abs() < 1e-6);
    }

    #[test]
    fn cdf_integral_matches_quadrature(x in -8.0f64..8.0) {
        let q = integrate_adaptive(normal::cdf, -40.0, x, 1e-15, 1e-13);
        prop_assert!((q - cdf_integral(x)).abs() < 1e-8);
    }

    #[test]
    fn erfi_inverse_round_trip(v in 0.0f64..1e6) {
        let z = erfi_inverse(v).unwrap();
        prop_assert!((erfi(z) - v).abs() <= 1e-10 * v.max(1e-300));
    }

    #[test]
    fn gaussian_expectation_matches_composite_legendre(h in any_kind(), mu in -3.0f64..3.0, sigma in 0.05f64..20.0) {
        let q = composite_normal_expectation(|x| h.eval(x), mu, sigma, &h.kinks());
        prop_assert!((h.gaussian_expectation(mu, sigma) - q).abs() < 1e-10 * (1.0 + sigma), "{} {} {}", h.name(), mu, sigma);
    }

    #[test]
    fn smooth_gaussian_expectation_matches_hermite(eta in 0.1f64..1.0, mu in -3.0f64..3.0, sigma in 0.3f64..1.0) {
        let h = TargetFunction::log_cosh(eta).unwrap();
        let q = gauss_hermite(96).unwrap().normal_expectation(mu, sigma, |x| h.eval(x));
        prop_assert!((h.gaussian_expectation(mu, sigma) - q).abs() < 1e-6);
    }

    #[test]
    fn targets_are_lipschitz_and_convex(h in any_kind(), x in -20.0f64..20.0, y in -20.0f64..20.0) {
        prop_assert!((h.eval(x) - h.eval(y)).abs() <= (x - y).abs() * (1.0 + 1e-12) + 1e-15);
        prop_assert!(h.eval(0.5 * (x + y)) <= 0.5 * (h.eval(x) + h.eval(y)) + 1e-12);
        prop_assert!(h.derivative(x).abs() <= 1.0);
    }

    #[test]
    fn fenchel_young(h in any_kind(), x in -30.0f64..30.0, u in -0.999f64..0.999) {
        let conj = h.conjugate_at_neg(u).unwrap();
        prop_assert!(-u * x <= h.eval(x) + conj + 1e-12);
    }

    #[test]
    fn stein_residual(h in any_kind(), mu in -3.0f64..3.0, sigma in 0.2f64..5.0, z in -4.0f64..4.0) {
        let x = mu + sigma * z;
        let step = 1e-5;
        prop_assume!(h.kinks().iter().all(|k| (x - k).abs() > 1e-3 + 2.0 * step));
        let sol = SteinSolution::solve(mu, sigma, h.clone()).unwrap();
        let fp = (sol.eval(x + step) - sol.eval(x - step)) / (2.0 * step);
        let res = sigma * sigma * fp - (x - mu) * sol.eval(x) - (h.eval(x) - sol.expectation());
        prop_assert!(res.abs() < 1e-5, "{res}");
        prop_assert!(sol.eval(x).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn stein_vertical_shift_invariance(h in any_kind(), mu in -2.0f64..2.0, sigma in 0.3f64..3.0, x in -5.0f64..5.0) {
        let a = SteinSolution::solve(mu, sigma, h.clone()).unwrap().eval_ou(x);
        let b = SteinSolution::solve(mu, sigma, h.shifted(5.0)).unwrap().eval_ou(x);
        // the shifted target is a custom one, whose h' expectation is numeric
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn output_representations_agree(h in any_kind(), s in -4.0f64..4.0, v in 0.5f64..20.0, frac in 0.0f64..=1.0) {
        let c = v * frac;
        let st = RoundState::new(s, v, c).unwrap();
        let generic = decide_generic(&h, &st).unwrap();
        let direct = decide_direct(&h, s, v, c);
        prop_assert!((generic - decide_tau(&h, s, v, c)).abs() < 1e-5);
        prop_assert!((generic - decide_exp_mixture(&h, s, v, c)).abs() < 1e-5);
        prop_assert!((generic - direct).abs() < 1e-5, "{} vs {}", generic, direct);
    }

    #[test]
    fn decisions_are_odd_for_even_targets(h in any_kind(), s in 0.0f64..30.0, v in 0.01f64..100.0, frac in 0.0f64..=1.0) {
        let a = decide(&h, &RoundState::new(s, v, v * frac).unwrap()).unwrap();
        let b = decide(&h, &RoundState::new(-s, v, v * frac).unwrap()).unwrap();
        prop_assert!((a + b).abs() < 1e-10);
    }

    #[test]
    fn small_increment_continuity(s in -10.0f64..10.0, v in 0.1f64..100.0) {
        let zero = decide_closed_abs(&RoundState::new(s, v, 0.0).unwrap()).unwrap();
        let tiny = decide_closed_abs(&RoundState::new(s, v, 1e-12).unwrap()).unwrap();
        prop_assert!((zero - tiny).abs() < 1e-5);
    }

    #[test]
    fn learner_tracks_running_sum(gs in prop::collection::vec(-3.0f64..3.0, 1..40)) {
        let t = gs.len();
        let mut l = LearnerState::new(TargetFunction::Abs, rho_sqrt_horizon(t).unwrap());
        let mut sum = 0.0;
        for &g in &gs {
            let x = l.decide().unwrap();
            prop_assert!(x.abs() <= 1.0);
            l.observe(g).unwrap();
            sum += g;
            prop_assert_eq!(l.s_prev(), sum);
        }
        prop_assert!(l.decide().is_err());
    }

    #[test]
    fn pathwise_bound_random_schedules(
        h in any_kind(),
        raw in prop::collection::vec(0.0f64..2.0, 2..60),
        seed in any::<u64>(),
        noisy in any::<bool>(),
    ) {
        // ρ² built from positive decrements, ending at 0
        let t = raw.len();
        let mut var = vec![0.0; t + 1];
        for i in (0..t).rev() {
            var[i] = var[i + 1] + raw[i] + 1e-3;
        }
        let schedule = RhoSchedule::from_variances(var).unwrap();
        let kind = if noisy {
            AdversaryKind::GaussianNoisy { drift: 0.2, noise: 1.5 }
        } else {
            AdversaryKind::UniformBox { half_width: 1.0 }
        };
        let mut learner = LearnerState::new(h.clone(), schedule.clone());
        let mut adv = Adversary::new(kind, seed).unwrap();
        let tr = play(&mut learner, &mut adv, t).unwrap();
        let ledger = pathwise_bound(&tr, &schedule, &h, h.is_convex()).unwrap();
        prop_assert!(ledger.err_terms.iter().all(|e| e[0] >= 0.0 && e[1] >= 0.0));
        prop_assert!(ledger.holds(tr.loss_total, 1e-6), "{} > {}", tr.loss_total, ledger.total());
        // regret form: Reg(u) ≤ h*(-u) + E h(ρ_0 Z) + err_T, schedule ends at ρ_T = 0
        let psi0 = h.gaussian_expectation(0.0, schedule.rho(0));
        for i in 0..=20 {
            let u = -0.95 + 0.095 * i as f64;
            let rhs = h.conjugate_at_neg(u).unwrap() + psi0 + ledger.err_total();
            prop_assert!(tr.regret_at(u) <= rhs + 1e-6);
        }
    }

    #[test]
    fn transcript_identities(xs in prop::collection::vec(-1.0f64..=1.0, 1..50), u in -1.0f64..=1.0) {
        let gs: Vec<f64> = xs.iter().map(|x| (x * 7.3).sin()).collect();
        let tr = GameTranscript::from_rounds(xs.clone(), gs.clone());
        let loss: f64 = xs.iter().zip(&gs).map(|(x, g)| x * g).sum();
        prop_assert_eq!(tr.loss_total, loss);
        let direct: f64 = xs.iter().zip(&gs).map(|(x, g)| g * (x - u)).sum();
        prop_assert!((tr.regret_at(u) - direct).abs() < 1e-12);
    }

    #[test]
    fn baseline_regret_bounds(seed in any::<u64>(), alpha in 0.2f64..5.0, t in 1usize..300) {
        let adv = AdversaryKind::UniformBox { half_width: 1.0 };
        let sqrt_t = (t as f64).sqrt();
        let ogd = play(&mut OgdLearner::new(alpha, t).unwrap(), &mut Adversary::new(adv.clone(), seed).unwrap(), t).unwrap();
        let mwu = play(&mut MwuLearner::new(alpha, t).unwrap(), &mut Adversary::new(adv, seed).unwrap(), t).unwrap();
        for i in 0..=40 {
            let u = -1.0 + 0.05 * i as f64;
            prop_assert!(ogd.regret_at(u) <= gamma_ogd(u, alpha) * sqrt_t + 1e-9);
            prop_assert!(mwu.regret_at(u) <= gamma_mwu(u, alpha) * sqrt_t + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn owens_t_symmetries(x in -10.0f64..10.0, y in -50.0f64..50.0) {
        let t = owens_t(x, y);
        prop_assert_eq!(t, owens_t(-x, y));
        prop_assert!((t + owens_t(x, -y)).abs() < 1e-16);
        prop_assert!(t.abs() <= 0.25);
        prop_assert!(y == 0.0 || t == 0.0 || t.signum() == y.signum());
    }

    #[test]
    fn decisions_stay_in_range(h in any_kind(), s in -200.0f64..200.0, lv in -3.0f64..6.0, frac in 0.0f64..=1.0) {
        let v = 10f64.powf(lv);
        let st = RoundState::new(s, v, v * frac).unwrap();
        prop_assert!(decide_generic(&h, &st).unwrap().abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn mills_ratio_bounds() {
    for i in 0..=600 {
        let x = 10f64.powf(-3.0 + i as f64 / 100.0);
        let m = mills(x);
        assert!(x / (x * x + 1.0) < m && m < 1.0 / x, "x={x}");
    }
}

#[test]
fn huber_degenerates_to_abs() {
    let h = TargetFunction::huber(1e6).unwrap();
    for i in 0..=400 {
        let x = -20.0 + 0.1 * i as f64;
        if x.abs() > 0.01 {
            assert!((h.eval(x) - x.abs()).abs() < 1e-5);
            assert!((h.derivative(x) - x.signum()).abs() < 1e-5);
        }
    }
}

#[test]
fn steins_lemma_on_hermite_nodes() {
    let rule = gauss_hermite(96).unwrap();
    for (mu, sigma) in [(0.0, 1.0), (1.3, 0.4), (-2.0, 2.5)] {
        let lhs = sigma * sigma * rule.normal_expectation(mu, sigma, f64::cos);
        let rhs = rule.normal_expectation(mu, sigma, |x| (x - mu) * x.sin());
        assert!((lhs - rhs).abs() < 1e-8);
    }
}

#[test]
fn conjugate_matches_grid_sup() {
    for i in 0..4 {
        let h = kind(i, 1.3);
        for j in 0..20 {
            let u = -0.95 + 0.1 * j as f64;
            let grid = (0..=100_000)
                .map(|k| -50.0 + 1e-3 * k as f64)
                .map(|x| -u * x - h.eval(x))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((h.conjugate_at_neg(u).unwrap() - grid).abs() < 1e-3, "{} u={u}", h.name());
        }
    }
}

#[test]
fn rademacher_pmf_mass() {
    let spec = CoverSpec::new(200, |x| x).unwrap();
    for n in [0, 1, 7, 200] {
        let total: f64 = spec.rs_pmf(n).iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
