//! Randomized invariants of the coordinate, trial-function and quadrature layers.

use h2ion::prolate::{from_prolate, to_prolate};
use h2ion::quadrature::{gauss_rule, integrate, semi_infinite_rule};
use h2ion::trial::{eval_reference, eval_reference_distances, ReferenceForm};
use h2ion::verify::{factorization_error, log_derivative_error};
use h2ion::{Geometry, Parity, ProlatePoint, StateLabel, TrialParams};
use proptest::prelude::*;

fn seed(state: StateLabel, r: f64) -> TrialParams {
    h2ion::presets::preset_seed(state, r).unwrap()
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Gerade), Just(Parity::Ungerade)]
}

fn state() -> impl Strategy<Value = StateLabel> {
    prop_oneof![Just(StateLabel::SIGMA_G_1S), Just(StateLabel::SIGMA_U_2P)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hund_mulliken_forms_agree(r in 0.2f64..20.0, xi in 1.0f64..6.0, eta in -1.0f64..1.0, a in 0.1f64..2.0, par in parity()) {
        let g = Geometry::new(r).unwrap();
        let form = ReferenceForm::hund_mulliken(a, par);
        let pt = ProlatePoint::new(xi, eta, 0.0).unwrap();
        let sep = eval_reference(form, g, pt).unwrap();
        let dist = eval_reference_distances(form, g, pt).unwrap();
        let scale = 2.0 * (-a * r * (xi - eta.abs())).exp();
        prop_assert!((sep - dist).abs() <= 1e-13 * scale, "{sep} vs {dist}");
    }

    #[test]
    fn prolate_round_trip(r in 0.1f64..30.0, xi in 1.0f64..10.0, eta in -1.0f64..1.0) {
        let (r1, r2) = from_prolate(ProlatePoint::new(xi, eta, 0.0).unwrap(), r);
        let back = to_prolate(r1, r2, r).unwrap();
        prop_assert!((back.xi - xi).abs() <= 1e-13 * xi);
        prop_assert!((back.eta - eta).abs() <= 1e-13);
    }

    #[test]
    fn eta_factor_parity_is_exact(st in state(), r in 0.5f64..30.0, eta in 0.0f64..1.0) {
        let p = seed(st, r);
        let a = p.eval_y0(eta).unwrap();
        let b = p.eval_y0(-eta).unwrap();
        match st.parity {
            Parity::Gerade => prop_assert_eq!(a, b),
            Parity::Ungerade => prop_assert_eq!(a, -b),
        }
    }

    #[test]
    fn quadrature_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 0.2f64..3.0) {
        let rule = semi_infinite_rule(80, 1.0 / k).unwrap();
        let f = |x: f64| (-k * x).exp();
        let g = |x: f64| x * x * (-k * x).exp();
        let lhs = integrate(|x| a * f(x) + b * g(x), &rule).unwrap().value;
        let rhs = a * integrate(f, &rule).unwrap().value + b * integrate(g, &rule).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-14 * (1.0 + lhs.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factorized_moments_match_two_dimensional_quadrature(st in state(), r in 1.0f64..8.0, da in -0.05f64..0.05, db in 0.0f64..0.05) {
        let mut p = seed(st, r);
        p.alpha *= 1.0 + da;
        p.b2 += db;
        let err = factorization_error(&p).unwrap();
        prop_assert!(err <= 1e-10, "{err}");
    }
}

#[test]
fn gauss_rule_integrates_polynomials_exactly() {
    for n in [5usize, 20, 64] {
        let rule = gauss_rule(n).unwrap();
        for k in 0..2 * n {
            let s: f64 = rule.nodes().iter().zip(rule.weights()).map(|(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((s - exact).abs() <= 1e-13, "n={n} k={k}: {s}");
        }
    }
}

#[test]
fn log_derivatives_match_finite_differences() {
    for st in [StateLabel::SIGMA_G_1S, StateLabel::SIGMA_U_2P] {
        for r in [1.0, 2.0, 6.0] {
            let p = seed(st, r);
            assert!(log_derivative_error(&p) <= 1e-8, "{st} R={r}");
            let h = 1e-6;
            let fd = -(p.eval_x0(1.7 + h).unwrap().ln() - p.eval_x0(1.7 - h).unwrap().ln()) / (2.0 * h);
            let an = p.log_derivative_x0(1.7).unwrap();
            assert!(((fd - an) / an).abs() <= 1e-8);
            let y = |e: f64| p.eval_y0(e).unwrap().abs().ln();
            let fd = -(y(0.3 + h) - y(0.3 - h)) / (2.0 * h);
            let an = p.log_derivative_y0(0.3).unwrap();
            assert!(((fd - an) / an).abs() <= 1e-8, "{fd} {an}");
        }
    }
}

#[test]
fn ungerade_factor_has_a_single_node() {
    let p = seed(StateLabel::SIGMA_U_2P, 2.0);
    assert_eq!(p.eval_y0(0.0).unwrap(), 0.0);
    let signs: Vec<f64> = (-100..=100).filter(|&k| k != 0).map(|k| p.eval_y0(k as f64 / 100.0).unwrap().signum()).collect();
    assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
}
