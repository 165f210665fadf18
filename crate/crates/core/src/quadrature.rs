//! Gauss-Legendre rules on `[-1, 1]` and rationally mapped rules on `[a, ∞)`.
//!
//! Every integral in the crate goes through this module. Sums are accumulated
//! with Neumaier compensation in node order, so results do not depend on how
//! callers schedule work.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct LegendreNodes {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn compute_legendre(n: usize) -> LegendreNodes {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    LegendreNodes { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached Gauss-Legendre rule of the given order.
pub fn legendre(n: usize) -> Arc<LegendreNodes> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LegendreNodes>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let computed = Arc::new(compute_legendre(n));
    cache.lock().unwrap().entry(n).or_insert(computed).clone()
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RuleKind {
    /// Gauss-Legendre on `[-1, 1]`.
    FiniteGauss,
    /// Gauss-Legendre composed with `ξ = lower + scale·t/(1-t)`, `t ∈ [0, 1)`.
    SemiInfinite { lower: f64, scale: f64 },
}

/// Immutable quadrature rule together with its order-doubled companion,
/// which [`integrate`] uses for the error estimate.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    kind: RuleKind,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    doubled_nodes: Vec<f64>,
    doubled_weights: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    /// `|I(N) - I(2N)|`.
    pub error_estimate: f64,
}

impl IntegralResult {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error_estimate
        } else {
            self.error_estimate / self.value.abs()
        }
    }
}

fn map_nodes(kind: RuleKind, base: &LegendreNodes) -> (Vec<f64>, Vec<f64>) {
    match kind {
        RuleKind::FiniteGauss => (base.nodes.clone(), base.weights.clone()),
        RuleKind::SemiInfinite { lower, scale } => base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(&u, &w)| {
                let t = 0.5 * (u + 1.0);
                let one_minus = 0.5 * (1.0 - u);
                (
                    lower + scale * t / one_minus,
                    0.5 * w * scale / (one_minus * one_minus),
                )
            })
            .unzip(),
    }
}

impl QuadratureRule {
    fn build(kind: RuleKind, order: usize) -> Self {
        let (nodes, weights) = map_nodes(kind, &legendre(order));
        let (doubled_nodes, doubled_weights) = map_nodes(kind, &legendre(2 * order));
        QuadratureRule {
            kind,
            order,
            nodes,
            weights,
            doubled_nodes,
            doubled_weights,
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Mapping scale for semi-infinite rules.
    pub fn scale(&self) -> Option<f64> {
        match self.kind {
            RuleKind::SemiInfinite { scale, .. } => Some(scale),
            RuleKind::FiniteGauss => None,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The same semi-infinite rule started at `lower` instead of 1.
    pub fn with_lower(&self, lower: f64) -> Result<Self> {
        match self.kind {
            RuleKind::SemiInfinite { scale, .. } => Ok(Self::build(
                RuleKind::SemiInfinite { lower, scale },
                self.order,
            )),
            RuleKind::FiniteGauss => Err(Error::Domain(
                "only semi-infinite rules can be shifted".into(),
            )),
        }
    }

    /// Weighted sum over the rule's own nodes, without an error estimate.
    pub fn sum<F: FnMut(f64) -> f64>(&self, f: F) -> Result<f64> {
        weighted_sum(&self.nodes, &self.weights, f)
    }
}

fn weighted_sum<F: FnMut(f64) -> f64>(nodes: &[f64], weights: &[f64], mut f: F) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for (&x, &w) in nodes.iter().zip(weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Integrand { node: x, value: v });
        }
        acc.add(w * v);
    }
    Ok(acc.value())
}

/// Gauss-Legendre rule with `order` nodes on `[-1, 1]`.
pub fn gauss_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    Ok(QuadratureRule::build(RuleKind::FiniteGauss, order))
}

/// Rule for `∫₁^∞ f(ξ) dξ` via `ξ = 1 + scale·t/(1-t)`.
pub fn semi_infinite_rule(order: usize, scale: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!("mapping scale {scale} must be positive")));
    }
    Ok(QuadratureRule::build(
        RuleKind::SemiInfinite { lower: 1.0, scale },
        order,
    ))
}

/// Integrate `f` with `rule`; the estimate comes from re-evaluating at twice the order.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, rule: &QuadratureRule) -> Result<IntegralResult> {
    let value = weighted_sum(&rule.nodes, &rule.weights, &mut f)?;
    let doubled = weighted_sum(&rule.doubled_nodes, &rule.doubled_weights, &mut f)?;
    Ok(IntegralResult {
        value,
        error_estimate: (value - doubled).abs(),
    })
}

/// `∫_a^b f` with an `order`-point Gauss-Legendre rule.
pub fn gauss_interval<F: FnMut(f64) -> f64>(a: f64, b: f64, order: usize, mut f: F) -> Result<f64> {
    let base = legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = CompensatedSum::new();
    for (&u, &w) in base.nodes.iter().zip(&base.weights) {
        let x = mid + half * u;
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Integrand { node: x, value: v });
        }
        acc.add(w * v);
    }
    Ok(half * acc.value())
}

/// `∫_a^∞ f` via the rational map with the given scale.
pub fn gauss_tail<F: FnMut(f64) -> f64>(a: f64, scale: f64, order: usize, mut f: F) -> Result<f64> {
    let base = legendre(order);
    let mut acc = CompensatedSum::new();
    for (&u, &w) in base.nodes.iter().zip(&base.weights) {
        let one_minus = 0.5 * (1.0 - u);
        let t = 0.5 * (u + 1.0);
        let x = a + scale * t / one_minus;
        let jac = 0.5 * scale / (one_minus * one_minus);
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Integrand { node: x, value: v });
        }
        acc.add(w * jac * v);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson bisection used only as an independent cross-check.
    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn step(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn low_order_rules() {
        let r1 = gauss_rule(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert!((r1.weights()[0] - 2.0).abs() < 1e-15);
        let r2 = gauss_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.nodes()[0] + s).abs() < 1e-15 && (r2.nodes()[1] - s).abs() < 1e-15);
        assert!((r2.weights()[0] - 1.0).abs() < 1e-15);
        let v = r2.sum(|x| x * x).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert!(gauss_rule(0).is_err());
    }

    #[test]
    fn high_order_rule_is_sane() {
        for n in [7, 64, 200, 400] {
            let r = gauss_rule(n).unwrap();
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().iter().all(|&x| x > -1.0 && x < 1.0));
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!((r.sum(|_| 1.0).unwrap() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn semi_infinite_examples() {
        let rule = semi_infinite_rule(64, 1.0).unwrap();
        let r = integrate(|x| (-(x - 1.0)).exp(), &rule).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");

        let rule = semi_infinite_rule(64, 0.5).unwrap();
        let r = integrate(|x| x * (-2.0 * x).exp(), &rule).unwrap();
        let exact = 0.75 * (-2.0f64).exp();
        assert!((r.value - exact).abs() < 1e-12);

        assert!(semi_infinite_rule(10, 0.0).is_err());
        assert!(semi_infinite_rule(10, -1.0).is_err());
        assert!(semi_infinite_rule(0, 1.0).is_err());
    }

    #[test]
    fn semi_infinite_against_adaptive_oracle() {
        let p = 1.485015;
        let f = move |x: f64| (x * x - 1.0) * (-2.0 * p * x).exp();
        let rule = semi_infinite_rule(200, 1.0 / p).unwrap();
        let mapped = integrate(f, &rule).unwrap().value;
        // The integrand is below 1e-40 past ξ = 1 + 35/p.
        let reference = adaptive_simpson(&f, 1.0, 1.0 + 35.0 / p, 1e-16);
        assert!((mapped - reference).abs() < 1e-12, "{mapped} vs {reference}");
        let closed = (-2.0 * p).exp() * (1.0 / (2.0 * p * p) + 1.0 / (4.0 * p * p * p));
        assert!((mapped - closed).abs() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let rule = gauss_rule(4).unwrap();
        match integrate(|x| if x > 0.5 { f64::NAN } else { x }, &rule) {
            Err(Error::Integrand { node, .. }) => assert!(node > 0.5),
            other => panic!("expected integrand error, got {other:?}"),
        }
    }

    #[test]
    fn error_estimate_shrinks_with_order() {
        let f = |x: f64| x.powf(0.7) * (-1.3 * x).exp();
        let e1 = integrate(f, &semi_infinite_rule(16, 1.0).unwrap()).unwrap();
        let e2 = integrate(f, &semi_infinite_rule(32, 1.0).unwrap()).unwrap();
        let e3 = integrate(f, &semi_infinite_rule(64, 1.0).unwrap()).unwrap();
        assert!(e2.error_estimate < e1.error_estimate);
        assert!(e3.error_estimate < e2.error_estimate);
    }

    #[test]
    fn interval_and_tail_helpers() {
        let v = gauss_interval(0.0, 2.0, 10, |x| x.powi(5)).unwrap();
        assert!((v - 64.0 / 6.0).abs() < 1e-13);
        let t = gauss_tail(3.0, 0.5, 80, |x| (-2.0 * x).exp()).unwrap();
        assert!((t - 0.5 * (-6.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-13).abs() < 1e-20);
    }
}
