//! Shooting-solver behaviour and its agreement with the variational solver.

use h2ion::nonlinearization::CorrectedTrial;
use h2ion::oracle::{eta_mismatch, pointwise_delta, separation_constant, solve_exact, solve_exact_with, xi_mismatch, BoundReference, ShootConfig};
use h2ion::trial::ReferenceForm;
use h2ion::{minimize, Geometry, Parity, SolverConfig, StateLabel};

const G: StateLabel = StateLabel::SIGMA_G_1S;
const U: StateLabel = StateLabel::SIGMA_U_2P;

fn geom(r: f64) -> Geometry {
    Geometry::new(r).unwrap()
}

#[test]
fn reference_energies_and_separation_constants() {
    let g = solve_exact(geom(2.0), G, None).unwrap();
    assert!((g.e_total + 1.20526842899).abs() < 1e-10, "{}", g.e_total);
    assert!((g.a - 0.811729585).abs() < 1e-8, "{}", g.a);
    assert!(g.residuals.xi_match.abs() <= 1e-11 && g.residuals.eta_match.abs() <= 1e-11);
    let u = solve_exact(geom(2.0), U, None).unwrap();
    assert!((u.e_total + 0.3350687844).abs() < 1e-10, "{}", u.e_total);
    assert!((u.a + 1.18688939).abs() < 1e-8);
    let u1 = solve_exact(geom(1.0), U, None).unwrap();
    assert!((u1.e_total - 0.8703727498).abs() < 1e-10, "{}", u1.e_total);
}

#[test]
fn energy_is_exactly_determined_by_p() {
    let s = solve_exact(geom(6.0), G, None).unwrap();
    assert_eq!(s.e_total, 2.0 / 6.0 - 4.0 * s.p * s.p / 36.0);
}

#[test]
fn eta_mismatch_changes_sign_across_the_separation_constant() {
    let p = 1.485015;
    let values: Vec<f64> = (0..=20).map(|k| eta_mismatch(p, 0.7 + 0.01 * k as f64, G).unwrap()).collect();
    let changes = values.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert_eq!(changes, 1);
}

#[test]
fn parity_conditions_do_not_vanish_together() {
    for k in 0..40 {
        let a = -2.0 + 0.1 * k as f64;
        let g = eta_mismatch(1.2, a, G).unwrap();
        let u = eta_mismatch(1.2, a, U).unwrap();
        assert!(g.abs().max(u.abs()) > 1e-6, "A={a}");
    }
}

#[test]
fn xi_mismatch_changes_sign_across_the_root() {
    let r = 2.0;
    let cfg = ShootConfig::default();
    let f = |p: f64| xi_mismatch(p, separation_constant(p, Parity::Gerade, &cfg).unwrap(), r).unwrap();
    let p0 = 1.485014622;
    assert!(f(p0 * 0.999).signum() != f(p0 * 1.001).signum());
    assert!(f(p0).abs() < 1e-6);
}

#[test]
fn step_halving_and_outer_boundary_do_not_move_the_root() {
    for (state, r) in [(G, 2.0), (U, 2.0), (G, 10.0)] {
        let base = solve_exact(geom(r), state, None).unwrap();
        let half = solve_exact_with(geom(r), state, None, &ShootConfig { step_factor: 0.5, ..Default::default() }).unwrap();
        let wide = solve_exact_with(geom(r), state, None, &ShootConfig { xi_max_factor: 1.5, ..Default::default() }).unwrap();
        assert!((half.e_total - base.e_total).abs() < 1e-12);
        assert!((wide.p - base.p).abs() < 1e-12);
    }
}

#[test]
fn unsupported_state_is_rejected() {
    let s = StateLabel::new(1, 0, 0, Parity::Gerade);
    assert!(solve_exact(geom(2.0), s, Some(1.0)).is_err());
}

#[test]
fn pointwise_accuracy_orders_the_approximations() {
    let v = minimize(geom(2.0), G, None, &SolverConfig::default()).unwrap();
    let o = solve_exact(geom(2.0), G, Some(v.p_opt)).unwrap();
    assert_eq!(pointwise_delta(&o, &o).unwrap(), 0.0);
    let corrected = pointwise_delta(&CorrectedTrial::from_params(v.params).unwrap(), &o).unwrap();
    let bare = pointwise_delta(&v.params, &o).unwrap();
    let hm = pointwise_delta(&BoundReference { form: ReferenceForm::hund_mulliken(o.p / 2.0, Parity::Gerade), geometry: geom(2.0) }, &o).unwrap();
    assert!(corrected <= 1e-4 && corrected < bare, "{corrected} {bare}");
    assert!(hm >= 1e-2 && bare < hm);
}

#[test]
fn oracle_and_variational_agree() {
    for (state, r) in [(G, 1.0), (G, 6.0), (U, 4.0), (U, 10.0)] {
        let v = minimize(geom(r), state, None, &SolverConfig::default()).unwrap();
        let o = solve_exact(geom(r), state, Some(v.p_opt)).unwrap();
        assert!((v.e_total - o.e_total).abs() <= 1e-9, "{state} R={r}: {} vs {}", v.e_total, o.e_total);
        assert!((v.a1x - o.a).abs() <= 5e-8 * o.a.abs().max(1.0), "{state} R={r}: A {} vs {}", v.a1x, o.a);
    }
}
