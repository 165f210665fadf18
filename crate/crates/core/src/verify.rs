//! Acceptance suite: every check prints one PASS/FAIL line.
//!
//! The reference values below are the published ten-digit energies,
//! separation constants and oscillator strengths for H₂⁺.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::nonlinearization::{build_riccati, reoptimize_p, Coordinate, CorrectedTrial};
use crate::observables::oscillator_strength;
use crate::oracle::{pointwise_delta, solve_exact, ShootResult};
use crate::prolate::{Geometry, Parity, ProlatePoint, StateLabel};
use crate::quadrature::{gauss_rule, semi_infinite_rule};
use crate::trial::TrialParams;
use crate::variational::{minimize, reduced_mode, EnergyFunctional, SolveResult, SolverConfig};

const G: StateLabel = StateLabel::SIGMA_G_1S;
const U: StateLabel = StateLabel::SIGMA_U_2P;

/// `(R, E_total)`.
pub const ENERGIES_G: [(f64, f64); 4] = [(1.0, -0.90357262676), (2.0, -1.20526842899), (6.0, -1.0239380968), (10.0, -1.0011574578)];
pub const ENERGIES_U: [(f64, f64); 4] = [(1.0, 0.8703727499), (2.0, -0.3350687844), (4.0, -0.8911012787), (10.0, -0.9998021372)];
/// `(R, printed p)`.
pub const PRINTED_P_G: [(f64, &str); 4] = [(1.0, "0.8519936"), (2.0, "1.485015"), (6.0, "3.49506"), (10.0, "5.47987")];
pub const PRINTED_P_U: [(f64, &str); 4] = [(1.0, "0.5314196"), (2.0, "1.155452"), (4.0, "2.3589"), (10.0, "5.47678")];
/// `(R, f₀₁, relative tolerance)`.
pub const STRENGTHS: [(f64, f64, f64); 3] = [(2.0, 0.639527, 1e-4), (10.0, 2.217e-2, 1e-3), (20.0, 8.191e-6, 1e-2)];

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.title, self.detail)
    }
}

struct Tally {
    passed: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { passed: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: String) {
        self.passed &= ok;
        self.notes.push(if ok { note } else { format!("{note} (!)") });
    }

    fn fail(&mut self, note: String) {
        self.check(false, note);
    }

    fn finish(self, id: u32, title: &str) -> Outcome {
        Outcome {
            id,
            title: title.to_string(),
            passed: self.passed,
            detail: self.notes.join("; "),
        }
    }
}

type Key = (&'static str, u64);

fn key(state: StateLabel, r: f64) -> Key {
    (if state == G { "1ssg" } else { "2psu" }, r.to_bits())
}

/// Variational and oracle solutions shared between criteria.
pub struct Solutions {
    variational: BTreeMap<Key, (Result<SolveResult>, Duration)>,
    oracle: BTreeMap<Key, Result<ShootResult>>,
}

impl Solutions {
    pub fn compute(points: &[(StateLabel, f64)], config: &SolverConfig) -> Self {
        let solved: Vec<_> = points
            .par_iter()
            .map(|&(state, r)| {
                let start = Instant::now();
                let v = Geometry::new(r).and_then(|g| minimize(g, state, None, config));
                let elapsed = start.elapsed();
                let o = Geometry::new(r).and_then(|g| solve_exact(g, state, v.as_ref().ok().map(|s| s.p_opt)));
                (key(state, r), v, elapsed, o)
            })
            .collect();
        let mut variational = BTreeMap::new();
        let mut oracle = BTreeMap::new();
        for (k, v, t, o) in solved {
            variational.insert(k, (v, t));
            oracle.insert(k, o);
        }
        Solutions { variational, oracle }
    }

    fn var(&self, state: StateLabel, r: f64) -> std::result::Result<&SolveResult, String> {
        match self.variational.get(&key(state, r)) {
            Some((Ok(s), _)) => Ok(s),
            Some((Err(e), _)) => Err(format!("{state} R={r}: {e}")),
            None => Err(format!("{state} R={r}: not computed")),
        }
    }

    fn elapsed(&self, state: StateLabel, r: f64) -> Duration {
        self.variational.get(&key(state, r)).map_or(Duration::ZERO, |v| v.1)
    }

    fn exact(&self, state: StateLabel, r: f64) -> std::result::Result<&ShootResult, String> {
        match self.oracle.get(&key(state, r)) {
            Some(Ok(s)) => Ok(s),
            Some(Err(e)) => Err(format!("oracle {state} R={r}: {e}")),
            None => Err(format!("oracle {state} R={r}: not computed")),
        }
    }
}

fn keep_r(quick: bool, r: f64) -> bool {
    !quick || r == 2.0
}

fn energies(sol: &Solutions, state: StateLabel, table: &[(f64, f64)], quick: bool, id: u32) -> Outcome {
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for &(r, e) in table.iter().filter(|(r, _)| keep_r(quick, *r)) {
        match sol.var(state, r) {
            Ok(s) => {
                let d = (s.e_total - e).abs();
                t.check(d <= 1e-8, format!("R={r} E={:.11} |dE|={d:.1e}", s.e_total));
                worst = worst.max(d);
                slowest = slowest.max(sol.elapsed(state, r));
            }
            Err(e) => t.fail(e),
        }
    }
    t.check(slowest.as_secs_f64() <= 60.0, format!("max |dE| {worst:.1e} <= 1e-8 Ry, slowest point {:.2} s <= 60 s", slowest.as_secs_f64()));
    t.finish(id, &format!("{state} energies"))
}

fn matches_printed(p: f64, printed: &str) -> bool {
    let digits = printed.split('.').nth(1).map_or(0, str::len) as i32;
    let value: f64 = printed.parse().unwrap_or(f64::NAN);
    (p - value).abs() <= 0.5 * 10f64.powi(-digits)
}

fn p_consistency(sol: &Solutions, quick: bool) -> Outcome {
    let mut t = Tally::new();
    for (state, table) in [(G, &PRINTED_P_G), (U, &PRINTED_P_U)] {
        for &(r, printed) in table.iter().filter(|(r, _)| keep_r(quick, *r)) {
            match sol.var(state, r) {
                Ok(s) => {
                    let rel = (s.p_opt - s.exact_p()).abs() / s.p_opt;
                    let raw = (s.diagnostics.p_argmin - s.exact_p()).abs() / s.p_opt;
                    t.check(rel <= 1e-8, format!("{state} R={r} |p-pE|/p={rel:.1e} (raw argmin {raw:.1e})"));
                    t.check(matches_printed(s.p_opt, printed), format!("p={:.9} vs printed {printed}", s.p_opt));
                }
                Err(e) => t.fail(e),
            }
        }
    }
    t.finish(3, "p-consistency")
}

fn separation_constants(sol: &Solutions, quick: bool) -> Outcome {
    let mut t = Tally::new();
    match sol.var(G, 2.0) {
        Ok(s) => {
            t.check((s.a1x - 0.811729588).abs() <= 1e-6, format!("1ssg A1x={:.9}", s.a1x));
            t.check((s.a1y - 0.811729585).abs() <= 1e-6, format!("A1y={:.9}", s.a1y));
            let gap = (s.a1x - s.a1y).abs();
            t.check(gap <= 1e-7, format!("gap {gap:.1e} <= 1e-7"));
        }
        Err(e) => t.fail(e),
    }
    match sol.var(U, 2.0) {
        Ok(s) => {
            t.check((s.a1x + 1.186889395).abs() <= 1e-6, format!("2psu A1x={:.9}", s.a1x));
            let gap = (s.a1x - s.a1y).abs();
            t.check(gap <= 1e-7, format!("gap {gap:.1e} <= 1e-7"));
        }
        Err(e) => t.fail(e),
    }
    if !quick {
        for state in [G, U] {
            match sol.var(state, 30.0) {
                Ok(s) => {
                    let gap = (s.a1x - s.a1y).abs();
                    t.check(gap <= 2e-9, format!("{state} R=30 A1x={:.9} gap {gap:.1e} <= 2e-9", s.a1x));
                }
                Err(e) => t.fail(e),
            }
        }
    }
    t.finish(4, "separation constants")
}

fn strengths(sol: &Solutions, quick: bool) -> Outcome {
    let mut t = Tally::new();
    for &(r, f, tol) in STRENGTHS.iter().filter(|(r, _, _)| keep_r(quick, *r)) {
        match (sol.var(G, r), sol.var(U, r)) {
            (Ok(g), Ok(u)) => match oscillator_strength(g, u) {
                Ok(x) => {
                    let rel = (x.f01 - f).abs() / f;
                    t.check(rel <= tol, format!("R={r} f01={:.6e} rel {rel:.1e} <= {tol:.0e}", x.f01));
                }
                Err(e) => t.fail(format!("R={r}: {e}")),
            },
            (Err(e), _) | (_, Err(e)) => t.fail(e),
        }
    }
    t.finish(5, "oscillator strengths")
}

fn oracle_equivalence(sol: &Solutions, quick: bool) -> Outcome {
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for state in [G, U] {
        for r in [1.0, 2.0, 6.0, 10.0].into_iter().filter(|r| keep_r(quick, *r)) {
            match (sol.var(state, r), sol.exact(state, r)) {
                (Ok(v), Ok(o)) => {
                    let d = (v.e_total - o.e_total).abs();
                    worst = worst.max(d);
                    if d > 1e-9 {
                        t.fail(format!("{state} R={r} |E-E_oracle|={d:.1e}"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => t.fail(e),
            }
        }
    }
    t.check(worst <= 1e-9, format!("max |E_var-E_oracle| {worst:.1e} <= 1e-9 Ry"));
    let mut refs = vec![(G, 2.0, 0.811729585), (U, 2.0, -1.18688939)];
    if !quick {
        refs.push((G, 20.0, 90.0528912));
    }
    for (state, r, a) in refs {
        match sol.exact(state, r) {
            Ok(o) => t.check((o.a - a).abs() <= 1e-7, format!("{state} R={r} A={:.10} vs {a}", o.a)),
            Err(e) => t.fail(e),
        }
    }
    t.finish(6, "oracle equivalence")
}

fn pointwise(sol: &Solutions) -> Outcome {
    let mut t = Tally::new();
    for state in [G, U] {
        let run = || -> std::result::Result<(f64, f64), String> {
            let v = sol.var(state, 2.0)?;
            let o = sol.exact(state, 2.0)?;
            let ct = CorrectedTrial::from_params(v.params).map_err(|e| e.to_string())?;
            let corrected = pointwise_delta(&ct, o).map_err(|e| e.to_string())?;
            let bare = pointwise_delta(&v.params, o).map_err(|e| e.to_string())?;
            Ok((corrected, bare))
        };
        match run() {
            Ok((c, b)) => t.check(c <= 1e-4, format!("{state} R=2 delta={c:.2e} <= 1e-4 (zero order {b:.2e})")),
            Err(e) => t.fail(e),
        }
    }
    t.finish(7, "pointwise accuracy")
}

fn correction_stability(sol: &Solutions, config: &SolverConfig) -> Outcome {
    let mut t = Tally::new();
    for state in [G, U] {
        match sol.var(state, 2.0) {
            Ok(v) => match reoptimize_p(&v.params, 2e-5, config.quad_order) {
                Ok(c) => {
                    let de = (c.e_reoptimized - c.e_uncorrected).abs();
                    t.check(c.relative_p_shift() <= 1e-9, format!("{state} dp/p={:.1e} <= 1e-9", c.relative_p_shift()));
                    t.check(de <= 1e-10, format!("|dE|={de:.1e} <= 1e-10 Ry"));
                }
                Err(e) => t.fail(format!("{state}: {e}")),
            },
            Err(e) => t.fail(e),
        }
    }
    t.finish(8, "correction stability")
}

fn reduced(sol: &Solutions, config: &SolverConfig) -> Outcome {
    let mut t = Tally::new();
    for state in [G, U] {
        let run = || -> std::result::Result<f64, String> {
            let full = sol.var(state, 2.0)?;
            let g = Geometry::new(2.0).map_err(|e| e.to_string())?;
            let red = reduced_mode(g, state, None, config).map_err(|e| e.to_string())?;
            Ok(red.e_total - full.e_total)
        };
        match run() {
            Ok(d) => t.check((1e-8..=1e-4).contains(&d), format!("{state} R=2 E_reduced-E_full={d:.2e} in [1e-8, 1e-4]")),
            Err(e) => t.fail(e),
        }
    }
    t.finish(9, "reduced-parameter mode")
}

/// Parity, quadrature exactness, factorization, bounded perturbations and
/// log-derivatives, on the R = 2 optima.
fn properties(sol: &Solutions) -> Outcome {
    let mut t = Tally::new();
    let params: Vec<TrialParams> = [G, U].iter().filter_map(|&s| sol.var(s, 2.0).ok().map(|v| v.params)).collect();
    if params.len() != 2 {
        t.fail("R=2 optima missing".into());
        return t.finish(10, "property suite");
    }

    let mut parity_ok = true;
    for p in &params {
        let sign = p.parity().sign();
        for k in 0..=40 {
            let eta = k as f64 / 40.0;
            let xi = 1.0 + 0.25 * k as f64;
            let a = ProlatePoint::new(xi, eta, 0.0).and_then(|q| p.eval(q));
            let b = ProlatePoint::new(xi, -eta, 0.0).and_then(|q| p.eval(q));
            parity_ok &= matches!((a, b), (Ok(a), Ok(b)) if b == sign * a);
        }
    }
    t.check(parity_ok, "parity exact".into());

    let mut degree_err = 0.0f64;
    if let Ok(rule) = gauss_rule(20) {
        for k in 0..40 {
            let s: f64 = rule.nodes().iter().zip(rule.weights()).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            degree_err = degree_err.max((s - exact).abs());
        }
    }
    t.check(degree_err <= 1e-13, format!("Gauss degree error {degree_err:.1e}"));

    let mut fact = 0.0f64;
    for p in &params {
        match factorization_error(p) {
            Ok(e) => fact = fact.max(e),
            Err(e) => t.fail(e.to_string()),
        }
    }
    t.check(fact <= 1e-10, format!("factorized vs 2-D {fact:.1e}"));

    let mut sup = 0.0f64;
    for p in &params {
        for c in [Coordinate::Xi, Coordinate::Eta] {
            match Geometry::new(p.r).and_then(|g| build_riccati(p, g, c, 200)) {
                Ok(d) => sup = sup.max(d.sup_perturbation()),
                Err(e) => t.fail(e.to_string()),
            }
        }
    }
    t.check(sup.is_finite() && sup < 1e3, format!("sup|V1|,|W1| {sup:.2}"));

    let mut logd = 0.0f64;
    for p in &params {
        logd = logd.max(log_derivative_error(p));
    }
    t.check(logd <= 1e-8, format!("log-derivative vs FD {logd:.1e}"));
    t.finish(10, "property suite")
}

/// Largest relative difference between factorized moments and a direct
/// two-dimensional tensor-product quadrature of the full wavefunction.
pub fn factorization_error(p: &TrialParams) -> Result<f64> {
    let functional = EnergyFunctional::for_params(p, 200)?;
    let m = functional.moments(p)?;
    let xr = semi_infinite_rule(150, 1.0 / p.p)?;
    let er = gauss_rule(150)?;
    let (mut norm, mut first, mut kinetic) = (0.0, 0.0, 0.0);
    for (&xi, &wx) in xr.nodes().iter().zip(xr.weights()) {
        let dx = -p.log_derivative_x0(xi)?;
        for (&eta, &we) in er.nodes().iter().zip(er.weights()) {
            let psi = p.eval(ProlatePoint::new(xi, eta, 0.0)?)?;
            let dpsi_x = dx * psi;
            let dpsi_e = p.eval_x0(xi)? * p.y0_jet(eta).d1;
            let w = wx * we;
            norm += w * (xi * xi - eta * eta) * psi * psi;
            first += w * xi * psi * psi;
            kinetic += w * ((xi * xi - 1.0) * dpsi_x * dpsi_x + (1.0 - eta * eta) * dpsi_e * dpsi_e);
        }
    }
    let pairs = [
        (norm, m.xi_second * m.eta_norm - m.xi_norm * m.eta_second),
        (first, m.xi_first * m.eta_norm),
        (kinetic, m.xi_kinetic * m.eta_norm + m.xi_norm * m.eta_kinetic),
    ];
    Ok(pairs.iter().fold(0.0f64, |w, (a, b)| w.max(((a - b) / b).abs())))
}

/// Largest relative error of the analytic log-derivatives against central
/// differences of `log|X₀|`, `log|Y₀|`.
pub fn log_derivative_error(p: &TrialParams) -> f64 {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for k in 0..30 {
        let xi = 1.0 + 0.01 + 0.3 * k as f64;
        let fd = -((p.eval_x0(xi + h).unwrap_or(f64::NAN)).ln() - (p.eval_x0(xi - h).unwrap_or(f64::NAN)).ln()) / (2.0 * h);
        let an = p.log_derivative_x0(xi).unwrap_or(f64::NAN);
        worst = worst.max(((fd - an) / an.abs().max(1.0)).abs());
    }
    for k in 1..30 {
        let eta = -0.97 + 0.065 * k as f64;
        if p.parity() == Parity::Ungerade && eta.abs() < 0.05 {
            continue;
        }
        let y = |e: f64| p.eval_y0(e).unwrap_or(f64::NAN).abs().ln();
        let fd = -(y(eta + h) - y(eta - h)) / (2.0 * h);
        let an = p.log_derivative_y0(eta).unwrap_or(f64::NAN);
        worst = worst.max(((fd - an) / an.abs().max(1.0)).abs());
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

/// Points the suite needs.
pub fn required_points(quick: bool) -> Vec<(StateLabel, f64)> {
    if quick {
        return vec![(G, 2.0), (U, 2.0)];
    }
    let mut v: Vec<(StateLabel, f64)> = [1.0, 2.0, 6.0, 10.0, 20.0, 30.0].iter().map(|&r| (G, r)).collect();
    v.extend([1.0, 2.0, 4.0, 6.0, 10.0, 20.0, 30.0].iter().map(|&r| (U, r)));
    v
}

/// Run every criterion; `quick` restricts to `R = 2`.
pub fn run_suite(quick: bool, config: &SolverConfig) -> Vec<Outcome> {
    let sol = Solutions::compute(&required_points(quick), config);
    vec![
        energies(&sol, G, &ENERGIES_G, quick, 1),
        energies(&sol, U, &ENERGIES_U, quick, 2),
        p_consistency(&sol, quick),
        separation_constants(&sol, quick),
        strengths(&sol, quick),
        oracle_equivalence(&sol, quick),
        pointwise(&sol),
        correction_stability(&sol, config),
        reduced(&sol, config),
        properties(&sol),
    ]
}
