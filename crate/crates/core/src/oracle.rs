//! Shooting solver for the separated equations, used as ground truth.
//!
//! Both equations have the form
//!
//! ```text
//! ((x²-1) Y')' + (-p²x² + c·x + A) Y = 0
//! ```
//!
//! with `c = 2R` for ξ and `c = 0` for η. Solutions are advanced by Taylor
//! series whose coefficients follow from a three-term-tail recurrence; at the
//! regular singular point `x = 1` the regular Frobenius branch is used. Each
//! step stays within half the distance to the nearest singular point and
//! within one local decay length `1/p`, so the series converge geometrically.
//!
//! For a trial `(p, A)` the η mismatch is the normalized Wronskian, at an
//! interior point close to `η = 1`, between the solution started at `η = 0`
//! with the parity condition and the regular solution from `η = 1`. The ξ
//! mismatch does the same between the regular solution from `ξ = 1` and the
//! decaying solution integrated inward from the WKB tail. Inner root: `A(p)`;
//! outer root: `p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearization::CorrectedTrial;
use crate::presets::preset_seed;
use crate::prolate::{wkb_tail_xi, Geometry, Parity, PhaseSeries, SpectralPair, StateLabel};
use crate::quadrature::{gauss_rule, semi_infinite_rule, CompensatedSum};
use crate::trial::{ReferenceForm, TrialParams};

const SERIES_TOL: f64 = 1e-18;
const MAX_TERMS: usize = 600;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpheroidalOde {
    pub p: f64,
    /// Coefficient of the linear term: `2R` for ξ, zero for η.
    pub c: f64,
    pub a: f64,
}

impl SpheroidalOde {
    pub fn xi(p: f64, a: f64, r: f64) -> Self {
        SpheroidalOde { p, c: 2.0 * r, a }
    }

    pub fn eta(p: f64, a: f64) -> Self {
        SpheroidalOde { p, c: 0.0, a }
    }

    fn q(&self, x0: f64) -> (f64, f64, f64) {
        let p2 = self.p * self.p;
        (-p2 * x0 * x0 + self.c * x0 + self.a, -2.0 * p2 * x0 + self.c, -p2)
    }

    /// Taylor coefficients about a regular point `x0` for the solution with
    /// value `y` and slope `dy`, carried far enough to sum accurately at `|h|`.
    pub fn taylor(&self, x0: f64, y: f64, dy: f64, h: f64) -> Result<Vec<f64>> {
        let s = x0 * x0 - 1.0;
        if s == 0.0 {
            return Err(Error::Step {
                at: x0,
                reason: "Taylor start at a singular point".into(),
            });
        }
        let (q0, q1, q2) = self.q(x0);
        let mut c = vec![y, dy];
        let mut k = 0usize;
        let mut quiet = 0;
        let mut peak = y.abs().max((dy * h).abs());
        loop {
            let kf = k as f64;
            let lag1 = if k >= 1 { c[k - 1] } else { 0.0 };
            let lag2 = if k >= 2 { c[k - 2] } else { 0.0 };
            let next = -(2.0 * x0 * (kf + 1.0) * (kf + 1.0) * c[k + 1] + (kf * (kf + 1.0) + q0) * c[k] + q1 * lag1 + q2 * lag2)
                / (s * (kf + 1.0) * (kf + 2.0));
            c.push(next);
            let term = (next * h.abs().powi(k as i32 + 2)).abs();
            peak = peak.max(term);
            quiet = if term <= SERIES_TOL * peak { quiet + 1 } else { 0 };
            k += 1;
            if quiet >= 3 && k >= 6 {
                return Ok(c);
            }
            if k + 2 >= MAX_TERMS || !next.is_finite() {
                return Err(Error::Step {
                    at: x0,
                    reason: format!("series did not converge for step {h}"),
                });
            }
        }
    }

    /// Regular Frobenius series about `x = 1`, normalized to `Y(1) = 1`.
    pub fn frobenius(&self, h: f64) -> Result<Vec<f64>> {
        let (q0, q1, q2) = self.q(1.0);
        let mut c = vec![1.0];
        let mut quiet = 0;
        let mut peak = 1.0f64;
        for k in 0..MAX_TERMS {
            let kf = k as f64;
            let lag1 = if k >= 1 { c[k - 1] } else { 0.0 };
            let lag2 = if k >= 2 { c[k - 2] } else { 0.0 };
            let next = -((kf * (kf + 1.0) + q0) * c[k] + q1 * lag1 + q2 * lag2) / (2.0 * (kf + 1.0) * (kf + 1.0));
            c.push(next);
            let term = (next * h.abs().powi(k as i32 + 1)).abs();
            peak = peak.max(term);
            quiet = if term <= SERIES_TOL * peak { quiet + 1 } else { 0 };
            if quiet >= 3 && k >= 6 {
                return Ok(c);
            }
            if !next.is_finite() {
                break;
            }
        }
        Err(Error::Step {
            at: 1.0,
            reason: format!("Frobenius series did not converge for step {h}"),
        })
    }
}

/// `(Σ c_k t^k, Σ k c_k t^{k-1})`.
pub fn sum_series(c: &[f64], t: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for (k, &ck) in c.iter().enumerate().rev() {
        d = d * t + v;
        v = v * t + ck;
        let _ = k;
    }
    (v, d)
}

/// One Taylor segment of a solution: `e^{log_scale} Σ c_k (x - x0)^k`
/// for `x` between `x0` and `x1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub coeffs: Vec<f64>,
    pub log_scale: f64,
    pub sign: f64,
}

impl Segment {
    fn lo(&self) -> f64 {
        self.x0.min(self.x1)
    }

    fn hi(&self) -> f64 {
        self.x0.max(self.x1)
    }

    /// `(log|Y|, sign, Y'/Y)`, evaluated without overflow.
    fn eval(&self, x: f64) -> (f64, f64) {
        let (v, d) = sum_series(&self.coeffs, x - self.x0);
        let scale = self.sign * self.log_scale.exp();
        (scale * v, scale * d)
    }
}

/// Piecewise-series solution on an interval.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Solution {
    /// Sorted by position, non-overlapping.
    pub segments: Vec<Segment>,
}

impl Solution {
    pub fn lower(&self) -> f64 {
        self.segments.first().map_or(f64::NAN, Segment::lo)
    }

    pub fn upper(&self) -> f64 {
        self.segments.last().map_or(f64::NAN, Segment::hi)
    }

    /// `(Y, Y')` at `x`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (lo, hi) = (self.lower(), self.upper());
        if !(x >= lo && x <= hi) {
            return Err(Error::Extrapolation { at: x, lo, hi });
        }
        let i = self.segments.partition_point(|s| s.hi() < x);
        let seg = &self.segments[i.min(self.segments.len() - 1)];
        Ok(seg.eval(x))
    }

    fn rescale(&mut self, log_factor: f64, sign: f64) {
        for s in &mut self.segments {
            s.log_scale += log_factor;
            s.sign *= sign;
        }
    }

    fn merge(mut self, other: Solution) -> Solution {
        self.segments.extend(other.segments);
        self.segments.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
        self
    }
}

/// End state of an integration: value and slope up to `sign·e^{log_scale}`.
#[derive(Clone, Copy, Debug)]
struct EndState {
    y: f64,
    dy: f64,
    log_scale: f64,
}

impl EndState {
    fn log_abs(&self) -> f64 {
        self.log_scale + self.y.abs().ln()
    }
}

/// Controls for the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootConfig {
    /// Multiplies every step-size limit (use 0.5 to check step-halving).
    pub step_factor: f64,
    /// Multiplies the outer ξ boundary.
    pub xi_max_factor: f64,
    /// Relative tolerance of the root finders.
    pub root_tol: f64,
}

impl Default for ShootConfig {
    fn default() -> Self {
        ShootConfig {
            step_factor: 1.0,
            xi_max_factor: 1.0,
            root_tol: 1e-15,
        }
    }
}

fn step_limit(x: f64, p: f64, factor: f64) -> f64 {
    let singular = (x - 1.0).abs().min((x + 1.0).abs());
    factor * (0.5 * singular).min(1.0 / p.max(1e-3))
}

/// Integrate from `(x, y, dy)` to `x_end`, recording segments.
fn integrate(ode: &SpheroidalOde, x_start: f64, y: f64, dy: f64, x_end: f64, factor: f64) -> Result<(Solution, EndState)> {
    let dir = (x_end - x_start).signum();
    let mut x = x_start;
    let (mut y, mut dy) = (y, dy);
    let mut log_scale = 0.0;
    let mut segments = Vec::new();
    while (x_end - x) * dir > 0.0 {
        let limit = step_limit(x, ode.p, factor);
        let mut h = limit.min((x_end - x).abs()) * dir;
        // avoid a sliver as the final step
        if ((x_end - x).abs() - h.abs()) < 1e-3 * limit {
            h = x_end - x;
        }
        let c = ode.taylor(x, y, dy, h)?;
        let (y1, dy1) = sum_series(&c, h);
        if !y1.is_finite() || !dy1.is_finite() {
            return Err(Error::Step {
                at: x,
                reason: "non-finite solution".into(),
            });
        }
        let x1 = if (x + h - x_end) * dir >= 0.0 { x_end } else { x + h };
        segments.push(Segment {
            x0: x,
            x1,
            coeffs: c,
            log_scale,
            sign: 1.0,
        });
        let n = y1.abs().max(dy1.abs() / ode.p.max(1.0));
        if n == 0.0 {
            return Err(Error::Step {
                at: x1,
                reason: "solution vanished identically".into(),
            });
        }
        y = y1 / n;
        dy = dy1 / n;
        log_scale += n.ln();
        x = x1;
    }
    segments.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
    Ok((Solution { segments }, EndState { y, dy, log_scale }))
}

/// Regular solution from `x = 1` out to `1 + t` (t may be negative).
fn start_regular(ode: &SpheroidalOde, t: f64) -> Result<(Solution, EndState)> {
    let c = ode.frobenius(t)?;
    let (y, dy) = sum_series(&c, t);
    let seg = Segment {
        x0: 1.0,
        x1: 1.0 + t,
        coeffs: c,
        log_scale: 0.0,
        sign: 1.0,
    };
    Ok((Solution { segments: vec![seg] }, EndState { y, dy, log_scale: 0.0 }))
}

/// Normalized Wronskian of two `(y, y')` pairs, in `[-1, 1]`.
fn wronskian(a: (f64, f64), b: (f64, f64), k: f64) -> f64 {
    let w = a.0 * b.1 - a.1 * b.0;
    let na = a.0.hypot(a.1 / k);
    let nb = b.0.hypot(b.1 / k);
    w / (k * na * nb)
}

fn eta_match_point(p: f64) -> f64 {
    1.0 - (1.0 / p).min(0.5)
}

fn xi_match_point(p: f64) -> f64 {
    1.0 + (1.0 / p).min(1.0)
}

/// Outer ξ boundary, where the tail has decayed by ~1e-30 relative to the
/// matching region.
pub fn xi_max(p: f64) -> f64 {
    (30.0 * std::f64::consts::LN_10 / p).max(15.0)
}

struct EtaPieces {
    inner: Solution,
    outer: Solution,
    inner_end: EndState,
    outer_end: EndState,
}

fn eta_pieces(p: f64, a: f64, parity: Parity, factor: f64) -> Result<EtaPieces> {
    let ode = SpheroidalOde::eta(p, a);
    let m = eta_match_point(p);
    let (y0, dy0) = match parity {
        Parity::Gerade => (1.0, 0.0),
        Parity::Ungerade => (0.0, 1.0),
    };
    let (inner, inner_end) = integrate(&ode, 0.0, y0, dy0, m, factor)?;
    let (outer, outer_end) = start_regular(&ode, m - 1.0)?;
    Ok(EtaPieces {
        inner,
        outer,
        inner_end,
        outer_end,
    })
}

/// η mismatch for `(p, A)`: zero when the parity-conditioned solution from
/// `η = 0` is also regular at `η = 1`.
pub fn eta_mismatch(p: f64, a: f64, state: StateLabel) -> Result<f64> {
    eta_mismatch_with(p, a, state.parity, 1.0)
}

fn eta_mismatch_with(p: f64, a: f64, parity: Parity, factor: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::SingularParameter(format!("p = {p}")));
    }
    let e = eta_pieces(p, a, parity, factor)?;
    Ok(wronskian(
        (e.inner_end.y, e.inner_end.dy),
        (e.outer_end.y, e.outer_end.dy),
        p.max(1.0),
    ))
}

struct XiPieces {
    inner: Solution,
    outer: Solution,
    inner_end: EndState,
    outer_end: EndState,
    tail: PhaseSeries,
    x_max: f64,
}

fn xi_pieces(p: f64, a: f64, r: f64, config: &ShootConfig) -> Result<XiPieces> {
    let ode = SpheroidalOde::xi(p, a, r);
    let m = xi_match_point(p);
    let (inner, inner_end) = start_regular(&ode, m - 1.0)?;
    let tail = wkb_tail_xi(SpectralPair::new(p, a), r, 0)?;
    let x_max = (xi_max(p) * config.xi_max_factor).max(m + 1.0);
    // X'/X = -φ'
    let slope = -tail.derivative(x_max);
    let (outer, outer_end) = integrate(&ode, x_max, 1.0, slope, m, config.step_factor)?;
    Ok(XiPieces {
        inner,
        outer,
        inner_end,
        outer_end,
        tail,
        x_max,
    })
}

/// ξ mismatch for `(p, A)` at fixed `R`: zero when the regular solution from
/// `ξ = 1` decays at infinity.
pub fn xi_mismatch(p: f64, a: f64, r: f64) -> Result<f64> {
    xi_mismatch_with(p, a, r, &ShootConfig::default())
}

fn xi_mismatch_with(p: f64, a: f64, r: f64, config: &ShootConfig) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::SingularParameter(format!("p = {p}")));
    }
    let x = xi_pieces(p, a, r, config)?;
    Ok(wronskian(
        (x.inner_end.y, x.inner_end.dy),
        (x.outer_end.y, x.outer_end.dy),
        p.max(1.0),
    ))
}

/// Brent's method on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
pub fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NeedsBracket(format!("f({a}) = {fa}, f({b}) = {fb} have the same sign")));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs().max(1e-300);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Separation constant `A(p)` of the lowest η state with the given parity:
/// scan downward from `A = p²` (an upper bound) to the first sign change.
pub fn separation_constant(p: f64, parity: Parity, config: &ShootConfig) -> Result<f64> {
    let f = |a: f64| eta_mismatch_with(p, a, parity, config.step_factor);
    let step = 0.05 * p.max(1.0);
    let mut hi = p * p + step;
    let mut f_hi = f(hi)?;
    let floor = -4.0 - 2.0 * p * p;
    let mut scanned = Vec::new();
    while hi > floor {
        let lo = hi - step;
        let f_lo = f(lo)?;
        scanned.push((lo, f_lo));
        if f_lo.signum() != f_hi.signum() {
            return brent(f, lo, hi, config.root_tol, 200);
        }
        hi = lo;
        f_hi = f_lo;
    }
    Err(Error::NeedsBracket(format!(
        "no eta eigenvalue for p = {p} in [{floor}, {}]; scanned {} points",
        p * p,
        scanned.len()
    )))
}

/// Residuals of the two matching conditions at the solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub xi_match: f64,
    pub eta_match: f64,
}

/// Exact `(p, A)` with evaluable separated solutions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShootResult {
    pub r: f64,
    pub state: StateLabel,
    pub p: f64,
    pub a: f64,
    /// `2/R - 4p²/R²` (Ry).
    pub e_total: f64,
    pub residuals: Residuals,
    /// `X` on `[1, ξ_max]` with `X(1) = 1`.
    pub x: Solution,
    /// `Y` on `[0, 1]` with `Y(1) = 1`, extended by parity.
    pub y: Solution,
    /// Large-ξ phase used beyond `ξ_max`.
    pub tail: PhaseSeries,
    pub xi_max: f64,
}

impl ShootResult {
    pub fn electronic_energy(&self) -> f64 {
        self.e_total - 2.0 / self.r
    }

    /// `(X, X')` for any `ξ ≥ 1`; the WKB phase continues the tail past `ξ_max`.
    pub fn eval_x(&self, xi: f64) -> Result<(f64, f64)> {
        if xi > self.xi_max {
            let (v, _) = self.x.eval(self.xi_max)?;
            let ratio = (-(self.tail.value(xi) - self.tail.value(self.xi_max))).exp();
            let value = v * ratio;
            return Ok((value, -self.tail.derivative(xi) * value));
        }
        self.x.eval(xi)
    }

    /// `(Y, Y')` on `[-1, 1]`.
    pub fn eval_y(&self, eta: f64) -> Result<(f64, f64)> {
        if eta < 0.0 {
            let (v, d) = self.y.eval(-eta)?;
            return Ok(match self.state.parity {
                Parity::Gerade => (v, -d),
                Parity::Ungerade => (-v, d),
            });
        }
        self.y.eval(eta)
    }

    /// `X` sampled on a grid.
    pub fn sample_x(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&x| Ok(self.eval_x(x)?.0)).collect()
    }

    /// `Y` sampled on a grid.
    pub fn sample_y(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&x| Ok(self.eval_y(x)?.0)).collect()
    }
}

/// Scan outward from `p0` by growing relative steps until `f` changes sign.
fn bracket_p<F: FnMut(f64) -> Result<f64>>(mut f: F, p0: f64) -> Result<(f64, f64)> {
    let f0 = f(p0)?;
    if f0 == 0.0 {
        return Ok((p0, p0));
    }
    let mut delta = 1e-4 * p0;
    let mut report = Vec::new();
    while delta < 0.9 * p0 {
        for side in [1.0, -1.0] {
            let q = p0 + side * delta;
            if q <= 0.0 {
                continue;
            }
            let fq = match f(q) {
                Ok(v) => v,
                Err(_) => continue,
            };
            report.push((q, fq));
            if fq.signum() != f0.signum() {
                return Ok(if q < p0 { (q, p0) } else { (p0, q) });
            }
        }
        delta *= 2.0;
    }
    Err(Error::NeedsBracket(format!("no sign change of the xi mismatch around p = {p0}: {report:?}")))
}

/// Solve the bispectral problem for one state at fixed `R`.
///
/// `p_hint` seeds the outer bracket; the preset table is used otherwise.
pub fn solve_exact(geometry: Geometry, state: StateLabel, p_hint: Option<f64>) -> Result<ShootResult> {
    solve_exact_with(geometry, state, p_hint, &ShootConfig::default())
}

pub fn solve_exact_with(geometry: Geometry, state: StateLabel, p_hint: Option<f64>, config: &ShootConfig) -> Result<ShootResult> {
    state.ensure_supported()?;
    let r = geometry.r();
    let p0 = match p_hint {
        Some(p) => p,
        None => preset_seed(state, r)?.p,
    };
    let parity = state.parity;
    let outer = |p: f64| -> Result<f64> {
        let a = separation_constant(p, parity, config)?;
        xi_mismatch_with(p, a, r, config)
    };
    let (lo, hi) = bracket_p(outer, p0)?;
    let p = if lo == hi { lo } else { brent(outer, lo, hi, config.root_tol, 200)? };
    let a = separation_constant(p, parity, config)?;
    assemble(r, state, p, a, config)
}

fn assemble(r: f64, state: StateLabel, p: f64, a: f64, config: &ShootConfig) -> Result<ShootResult> {
    let xp = xi_pieces(p, a, r, config)?;
    let ep = eta_pieces(p, a, state.parity, config.step_factor)?;
    let k = p.max(1.0);
    let residuals = Residuals {
        xi_match: wronskian((xp.inner_end.y, xp.inner_end.dy), (xp.outer_end.y, xp.outer_end.dy), k),
        eta_match: wronskian((ep.inner_end.y, ep.inner_end.dy), (ep.outer_end.y, ep.outer_end.dy), k),
    };

    // X: keep the regular piece (X(1) = 1) and scale the inward piece to it.
    let mut x_outer = xp.outer;
    let log_factor = xp.inner_end.log_abs() - xp.outer_end.log_abs();
    let sign = xp.inner_end.y.signum() * xp.outer_end.y.signum();
    x_outer.rescale(log_factor, sign);
    let x = xp.inner.merge(x_outer);

    // Y: keep the piece from η = 1 (Y(1) = 1) and scale the inner piece to it.
    let mut y_inner = ep.inner;
    let log_factor = ep.outer_end.log_abs() - ep.inner_end.log_abs();
    let sign = ep.inner_end.y.signum() * ep.outer_end.y.signum();
    y_inner.rescale(log_factor, sign);
    let y = y_inner.merge(ep.outer);

    Ok(ShootResult {
        r,
        state,
        p,
        a,
        e_total: 2.0 / r - 4.0 * p * p / (r * r),
        residuals,
        x,
        y,
        tail: xp.tail,
        xi_max: xp.x_max,
    })
}

/// A separable wavefunction `X(ξ)·Y(η)` that can be compared pointwise.
pub trait Separable {
    fn x_factor(&self, xi: f64) -> Result<f64>;
    fn y_factor(&self, eta: f64) -> Result<f64>;
}

impl Separable for ShootResult {
    fn x_factor(&self, xi: f64) -> Result<f64> {
        Ok(self.eval_x(xi)?.0)
    }
    fn y_factor(&self, eta: f64) -> Result<f64> {
        Ok(self.eval_y(eta)?.0)
    }
}

impl Separable for TrialParams {
    fn x_factor(&self, xi: f64) -> Result<f64> {
        self.eval_x0(xi)
    }
    fn y_factor(&self, eta: f64) -> Result<f64> {
        self.eval_y0(eta)
    }
}

impl Separable for CorrectedTrial {
    fn x_factor(&self, xi: f64) -> Result<f64> {
        Ok(self.x(xi)?.0)
    }
    fn y_factor(&self, eta: f64) -> Result<f64> {
        Ok(self.y(eta)?.0)
    }
}

/// A reference form bound to an internuclear distance.
#[derive(Clone, Copy, Debug)]
pub struct BoundReference {
    pub form: ReferenceForm,
    pub geometry: Geometry,
}

impl Separable for BoundReference {
    fn x_factor(&self, xi: f64) -> Result<f64> {
        self.form.validate()?;
        Ok(self.form.xi_factor(self.geometry.r(), xi))
    }
    fn y_factor(&self, eta: f64) -> Result<f64> {
        Ok(self.form.eta_factor(self.geometry.r(), eta))
    }
}

/// `∫∫ (ξ² - η²) X² Y²` up to the constant `2π R³/8`, on the oracle's rules.
fn reduced_norm<W: Separable + ?Sized>(w: &W, scale: f64, order: usize) -> Result<f64> {
    let xr = semi_infinite_rule(order, scale)?;
    let er = gauss_rule(order)?;
    let (mut n_x, mut m_x) = (CompensatedSum::new(), CompensatedSum::new());
    for (&x, &wt) in xr.nodes().iter().zip(xr.weights()) {
        let v = w.x_factor(x)?;
        n_x.add(wt * v * v);
        m_x.add(wt * x * x * v * v);
    }
    let (mut n_y, mut m_y) = (CompensatedSum::new(), CompensatedSum::new());
    for (&e, &wt) in er.nodes().iter().zip(er.weights()) {
        let v = w.y_factor(e)?;
        n_y.add(wt * v * v);
        m_y.add(wt * e * e * v * v);
    }
    let n = m_x.value() * n_y.value() - n_x.value() * m_y.value();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Evaluation(format!("normalization failed: reduced norm {n}")));
    }
    Ok(n)
}

/// Sampling grid used by [`pointwise_delta`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    pub xi_points: usize,
    pub eta_points: usize,
    /// `|Ψ|` cut-off relative to its maximum along ξ.
    pub cutoff: f64,
    /// Half-width of the excluded neighbourhood of the ungerade node.
    pub node_exclusion: f64,
}

impl Default for DeltaGrid {
    fn default() -> Self {
        DeltaGrid {
            xi_points: 240,
            eta_points: 241,
            cutoff: 1e-6,
            node_exclusion: 1e-3,
        }
    }
}

/// `max |Ψ - Ψ_app| / |Ψ|` over the sampling region, after normalizing both
/// to the same L² norm with matching sign at `(ξ, η) = (1, 1)`.
pub fn pointwise_delta<W: Separable + ?Sized>(app: &W, oracle: &ShootResult) -> Result<f64> {
    pointwise_delta_with(app, oracle, &DeltaGrid::default())
}

pub fn pointwise_delta_with<W: Separable + ?Sized>(app: &W, oracle: &ShootResult, grid: &DeltaGrid) -> Result<f64> {
    let scale = 1.0 / oracle.p;
    let order = 200;
    let n_exact = reduced_norm(oracle, scale, order)?;
    let n_app = reduced_norm(app, scale, order)?;
    let reference = oracle.x_factor(1.0)? * oracle.y_factor(1.0)?;
    let reference_app = app.x_factor(1.0)? * app.y_factor(1.0)?;
    if reference == 0.0 || reference_app == 0.0 {
        return Err(Error::Evaluation("reference point value vanishes".into()));
    }
    let c = (n_exact / n_app).sqrt() * (reference.signum() * reference_app.signum());

    // ξ range: until X drops below the cut-off relative to its maximum.
    let mut x_peak = 0.0f64;
    let mut xi_cut = 1.0;
    let step = 0.01 / oracle.p.max(0.05);
    let mut xi = 1.0;
    while xi < oracle.xi_max {
        let v = oracle.x_factor(xi)?.abs();
        x_peak = x_peak.max(v);
        if v < grid.cutoff * x_peak {
            break;
        }
        xi_cut = xi;
        xi += step;
    }

    let xs: Vec<f64> = (0..grid.xi_points)
        .map(|k| 1.0 + (xi_cut - 1.0) * k as f64 / (grid.xi_points - 1) as f64)
        .collect();
    let es: Vec<f64> = (0..grid.eta_points)
        .map(|k| -1.0 + 2.0 * k as f64 / (grid.eta_points - 1) as f64)
        .filter(|e| oracle.state.parity == Parity::Gerade || e.abs() >= grid.node_exclusion)
        .collect();
    let rx = xs
        .iter()
        .map(|&x| Ok(app.x_factor(x)? / oracle.x_factor(x)?))
        .collect::<Result<Vec<f64>>>()?;
    let ry = es
        .iter()
        .map(|&e| Ok(app.y_factor(e)? / oracle.y_factor(e)?))
        .collect::<Result<Vec<f64>>>()?;
    let mut worst = 0.0f64;
    for &a in &rx {
        for &b in &ry {
            worst = worst.max((1.0 - c * a * b).abs());
        }
    }
    if !worst.is_finite() {
        return Err(Error::Evaluation("non-finite pointwise ratio".into()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_reproduces_legendre_polynomial() {
        // p = 0, c = 0, A = -l(l+1): Legendre P_2 = (3x²-1)/2
        let ode = SpheroidalOde::eta(0.0, -6.0);
        let x0 = 0.3;
        let (y, dy) = (0.5 * (3.0 * x0 * x0 - 1.0), 3.0 * x0);
        let c = ode.taylor(x0, y, dy, 0.2).unwrap();
        let (v, d) = sum_series(&c, 0.2);
        assert!((v - 0.5 * (3.0 * 0.25 - 1.0)).abs() < 1e-15);
        assert!((d - 1.5).abs() < 1e-14);
        // the regular Frobenius solution at 1 is P_2 itself
        let f = ode.frobenius(-0.4).unwrap();
        let (v, _) = sum_series(&f, -0.4);
        assert!((v - 0.5 * (3.0 * 0.36 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn legendre_eigenvalues_at_zero_p() {
        // p → 0 limit: A = -l(l+1)
        let cfg = ShootConfig::default();
        let g = separation_constant(1e-6, Parity::Gerade, &cfg).unwrap();
        let u = separation_constant(1e-6, Parity::Ungerade, &cfg).unwrap();
        assert!(g.abs() < 1e-9, "{g}");
        assert!((u + 2.0).abs() < 1e-9, "{u}");
    }

    #[test]
    fn brent_finds_cubic_root() {
        let root = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((root - 2f64.cbrt()).abs() < 1e-14);
        assert!(matches!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 10), Err(Error::NeedsBracket(_))));
    }

    #[test]
    fn mismatch_brackets_reference_separation_constant() {
        let p = 1.485015;
        let lo = eta_mismatch(p, 0.80, StateLabel::SIGMA_G_1S).unwrap();
        let hi = eta_mismatch(p, 0.82, StateLabel::SIGMA_G_1S).unwrap();
        assert!(lo.signum() != hi.signum());
    }
}
