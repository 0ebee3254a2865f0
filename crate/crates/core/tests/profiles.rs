use enstrophy_core::diagnostics::{half_grid_energy_enstrophy, integral_bound_rhs};
use enstrophy_core::profiles::{make_custom_profile, make_sine_profile, validate_profile, CustomShape, DEFAULT_VALIDATION_POINTS};
use proptest::prelude::*;

#[test]
fn sine_antiderivative_at_half() {
    let p = make_sine_profile();
    assert!((p.F(0.5) + 2.0).abs() < 1e-14);
    assert!(p.F(0.0).abs() < 1e-15);
}

/// `F'` by centered differences converges to `f` at second order.
#[test]
fn antiderivative_derivative_is_second_order() {
    let p = make_custom_profile(CustomShape::SineSeries(vec![1.0, 0.05])).unwrap();
    let err = |h: f64| {
        (1..50)
            .map(|i| {
                let x = -0.5 + i as f64 / 50.0;
                ((p.F(x + h) - p.F(x - h)) / (2.0 * h) - p.f(x)).abs()
            })
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(1e-3), err(5e-4));
    assert!(e1 < 1e-4);
    assert!((e1 / e2 - 4.0).abs() < 0.1, "{e1} {e2}");
}

#[test]
fn integral_bound_is_increasing_and_tends_to_identity() {
    let mut prev = 0.0;
    for i in 1..100 {
        let e0 = 1e-3 * 1.3f64.powi(i);
        let r = integral_bound_rhs(e0);
        assert!(r > prev);
        assert!(r >= e0);
        prev = r;
    }
    let tiny = 1e-12;
    assert!((integral_bound_rhs(tiny) / tiny - 1.0).abs() < 1e-6);
}

#[test]
fn sine_energies_on_half_grid() {
    let p = make_sine_profile();
    let k = 10.0;
    let n = 64;
    let xs: Vec<f64> = (0..=n).map(|j| j as f64 / (2 * n) as f64).collect();
    let u: Vec<f64> = xs.iter().map(|&x| k * p.f(x)).collect();
    let ux: Vec<f64> = xs.iter().map(|&x| k * p.f_prime(x)).collect();
    let (kk, e) = half_grid_energy_enstrophy(&u, &ux);
    let pi = std::f64::consts::PI;
    assert!((kk - pi * pi * k * k).abs() < 1e-10 * kk);
    assert!((e - 4.0 * pi.powi(4) * k * k).abs() < 1e-10 * e);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Small second harmonics keep `f'' >= 0` on `[0, 1/2]`.
    #[test]
    fn perturbed_profiles_are_admissible(a1 in 0.5f64..3.0, r in -0.06f64..0.06, x in -0.5f64..0.5) {
        let p = make_custom_profile(CustomShape::SineSeries(vec![a1, r * a1])).unwrap();
        prop_assert!(validate_profile(&p, DEFAULT_VALIDATION_POINTS).is_admissible());
        prop_assert!((p.f(-x) + p.f(x)).abs() < 1e-13 * a1);
        prop_assert!((p.F(-x) - p.F(x)).abs() < 1e-13 * a1);
        prop_assert!(p.f_prime(p.x_star()).abs() < 1e-10 * p.max_abs_f_prime());
        prop_assert!(p.f_double_prime(p.x_star()) >= 0.0);
        let h = 1e-4;
        let fd = (p.F(x + h) - p.F(x - h)) / (2.0 * h);
        prop_assert!((fd - p.f(x)).abs() < 1e-6 * p.max_abs_f());
    }
}
