use std::f64::consts::{PI, TAU};

use enstrophy_core::asymptotics::{
    bifurcation_data, find_roots, fold_location, leading_energy, leading_energy_closed_form, phase_value, predict,
    AsymptoticField, Regime,
};
use enstrophy_core::exact_solver::{eval_i, SolverConfig};
use enstrophy_core::profiles::{make_custom_profile, make_sine_profile, CustomShape, Profile};
use proptest::prelude::*;

fn sine() -> &'static Profile {
    static P: std::sync::OnceLock<Profile> = std::sync::OnceLock::new();
    P.get_or_init(make_sine_profile)
}

fn two_mode() -> &'static Profile {
    static P: std::sync::OnceLock<Profile> = std::sync::OnceLock::new();
    P.get_or_init(|| make_custom_profile(CustomShape::SineSeries(vec![1.0, 0.05])).unwrap())
}

fn g(p: &Profile, x: f64, a: f64, s: f64) -> f64 {
    p.f(s) + a * (s - x)
}

/// Gaussian Laplace value at the origin, relative error shrinking like `1/k`.
#[test]
fn origin_integral_matches_laplace() {
    let p = sine();
    let a = 8.0 * PI * PI;
    let c = SolverConfig::default();
    let rel = |k: f64| {
        let curvature = p.f_prime(0.0) + a;
        let lap = (TAU / (k * curvature)).sqrt();
        let (m, r) = eval_i(p, 0.0, a, k, &c).unwrap();
        assert!(m.abs() < 1e-14);
        (r / lap - 1.0).abs()
    };
    let (e1, e2) = (rel(100.0), rel(200.0));
    assert!(e1 < 2.0 / 100.0, "{e1}");
    assert!((e1 / e2 - 2.0).abs() < 0.2, "{e1} {e2}");
}

#[test]
fn varphi_slope_by_finite_differences() {
    let p = sine();
    let a = 2.0 * PI * PI;
    let x0 = fold_location(p, a).unwrap().x0;
    let h = 1e-6;
    for i in 1..10 {
        let x = x0 * i as f64 / 10.0;
        let vp = find_roots(p, x + h, a).unwrap().varphi.unwrap();
        let vm = find_roots(p, x - h, a).unwrap().varphi.unwrap();
        let r = find_roots(p, x, a).unwrap();
        let exact = a * (r.s_plus.unwrap() - r.s_minus.unwrap());
        assert!(exact > 0.0);
        assert!(((vp - vm) / (2.0 * h) - exact).abs() < 1e-6 * exact.max(1.0));
        let direct = phase_value(p, x, a, r.s_minus.unwrap()) - phase_value(p, x, a, r.s_plus.unwrap());
        assert!((direct - r.varphi.unwrap()).abs() < 1e-10);
    }
}

/// Near the fold `f'(s-) + a ~ (x0 - x)^{1/2}`, so `chi ~ (x0 - x)^{-1/4}`.
#[test]
fn chi_diverges_at_the_fold() {
    let p = sine();
    let a = 2.0 * PI * PI;
    let x0 = fold_location(p, a).unwrap().x0;
    let chis: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8]
        .iter()
        .map(|d| find_roots(p, x0 - d, a).unwrap().chi.unwrap())
        .collect();
    for w in chis.windows(2) {
        let growth = w[1] / w[0];
        assert!((2.8..3.6).contains(&growth), "{chis:?}");
    }
    assert!(chis[3] > 50.0);
}

#[test]
fn jacobian_positive_on_post_pitchfork_window() {
    for p in [sine(), two_mode()] {
        let a_pf = -p.f_prime_at_zero();
        for frac in [0.1, 0.4, 0.7, 0.95] {
            let a = frac * a_pf;
            let s0 = find_roots(p, 0.0, a).unwrap().s_plus.unwrap();
            for i in 0..=200 {
                let y = s0 + (0.5 - s0) * i as f64 / 200.0;
                assert!(1.0 + p.f_prime(y) / a > 0.0, "a = {a}, y = {y}");
            }
        }
    }
}

#[test]
fn pitchfork_consistency() {
    for p in [sine(), two_mode()] {
        let a_pf = -p.f_prime_at_zero();
        assert_eq!(find_roots(p, 1e-3, a_pf * (1.0 + 1e-6)).unwrap().regime, Regime::Single);
        assert_eq!(find_roots(p, 0.0, a_pf * (1.0 - 1e-6)).unwrap().regime, Regime::Triple);
    }
}

#[test]
fn quadrature_and_closed_form_energy_agree() {
    for p in [sine(), two_mode()] {
        let a_pf = -p.f_prime_at_zero();
        for frac in [0.2, 0.5, 0.9] {
            let a = frac * a_pf;
            let q = leading_energy(p, a, 10.0).unwrap();
            let c = leading_energy_closed_form(p, a, 10.0).unwrap();
            assert!((q / c - 1.0).abs() < 1e-9, "{q} {c}");
        }
    }
}

#[test]
fn two_mode_predictions_are_positive() {
    let p = two_mode();
    let pr = predict(p, 30.0).unwrap();
    assert!(pr.t_star > pr.t0);
    assert!(pr.k_drop_leading > 0.0);
    assert!(pr.e_at_max_shock_integral > pr.e_at_max_leading);
    let b = bifurcation_data(p, 0.5 * (-p.f_prime_at_zero()), 30.0).unwrap();
    assert!(b.x1.unwrap() < b.x0.unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn root_residuals_vanish(x in 0.0f64..=0.5, frac in 0.05f64..3.0) {
        let p = sine();
        let a = frac * (-p.f_prime_at_zero());
        let r = find_roots(p, x, a).unwrap();
        for s in [r.s_minus, r.s_mid, r.s_plus].into_iter().flatten() {
            prop_assert!(g(p, x, a, s).abs() < 1e-12, "g({s}) = {}", g(p, x, a, s));
        }
    }

    #[test]
    fn varphi_and_chi_nondecreasing(frac in 0.05f64..0.95, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let p = sine();
        let a = frac * (-p.f_prime_at_zero());
        let x0 = fold_location(p, a).unwrap().x0.min(0.5);
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let r1 = find_roots(p, lo * x0 * 0.999, a).unwrap();
        let r2 = find_roots(p, hi * x0 * 0.999, a).unwrap();
        prop_assert!(r2.varphi.unwrap() >= r1.varphi.unwrap() - 1e-14);
        prop_assert!(r2.chi.unwrap() >= r1.chi.unwrap() - 1e-12);
    }

    #[test]
    fn asymptotic_velocity_is_odd(x in 0.0f64..0.5, frac in 0.1f64..3.0) {
        let p = sine();
        let a = frac * (-p.f_prime_at_zero());
        let f = AsymptoticField::new(p, a, 40.0).unwrap();
        prop_assert!((f.u(x).unwrap() + f.u(-x).unwrap()).abs() < 1e-9);
        prop_assert!((f.ux(x).unwrap() - f.ux(-x).unwrap()).abs() < 1e-9 * f.ux(x).unwrap().abs().max(1.0));
    }
}
