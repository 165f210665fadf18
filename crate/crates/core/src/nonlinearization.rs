//! Perturbation theory on the logarithm of the trial function.
//!
//! Writing `X = e^{-φ}`, the ξ-equation becomes a Riccati equation for
//! `x = φ'`. The trial phase `φ₀ = -log X₀` is the exact solution for the
//! potential `V₀ = [(ξ²-1)X₀'' + 2ξX₀']/X₀` with separation constant zero, so
//! the true potential `V = p²ξ² - 2Rξ` splits as `V₀ + V₁`. For an exact
//! eigenfunction `V₁` is the constant `A`. First order gives
//!
//! ```text
//! A₁ = ∫ V₁ X₀² / ∫ X₀²
//! (ξ²-1) X₀² x₁ = ∫₁^ξ (A₁ - V₁) X₀²
//! ```
//!
//! and identically for η with `W = p²η²`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::prolate::{Geometry, Parity, ProlatePoint};
use crate::quadrature::{gauss_interval, gauss_rule, gauss_tail, semi_infinite_rule, CompensatedSum, QuadratureRule};
use crate::trial::TrialParams;
use crate::variational::{EnergyFunctional, Moments, SolveResult, DEFAULT_QUAD_ORDER};

/// Nodes of the panel rule used for cumulative integrals.
const PANEL_ORDER: usize = 96;
/// Number of intervals in the ξ profile grid.
const XI_GRID: usize = 800;
/// Number of intervals in the η profile grid on `[0, 1]`.
const ETA_GRID: usize = 400;
/// The ξ grid ends where `X₀` has decayed by roughly `e^{-350}`.
const XI_DECAY_LENGTHS: f64 = 350.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coordinate {
    Xi,
    Eta,
}

/// `V₀(ξ) = (ξ²-1)(ℓ'' + ℓ'²) + 2ξℓ'` with `ℓ = log X₀`.
pub fn unperturbed_potential_xi(params: &TrialParams, xi: f64) -> f64 {
    let l = params.log_x0_jet(xi);
    (xi * xi - 1.0) * (l.d2 + l.d1 * l.d1) + 2.0 * xi * l.d1
}

/// `V₁ = p²ξ² - 2Rξ - V₀`.
pub fn perturbation_xi(params: &TrialParams, xi: f64) -> f64 {
    params.p * params.p * xi * xi - 2.0 * params.r * xi - unperturbed_potential_xi(params, xi)
}

/// `W₀(η) = [(η²-1)Y₀'' + 2ηY₀']/Y₀`; the ungerade node is divided out
/// analytically through `Y₀ = ηF`.
pub fn unperturbed_potential_eta(params: &TrialParams, eta: f64) -> f64 {
    match params.parity() {
        Parity::Gerade => {
            let y = params.y0_jet(eta);
            ((eta * eta - 1.0) * y.d2 + 2.0 * eta * y.d1) / y.v
        }
        Parity::Ungerade => {
            let f = params.y0_reduced_jet(eta);
            // F is even, so F'/η → F''(0)
            let slope_over_eta = if eta.abs() < 1e-8 { f.d2 } else { f.d1 / eta };
            ((eta * eta - 1.0) * (2.0 * slope_over_eta + f.d2) + 2.0 * eta * f.d1) / f.v + 2.0
        }
    }
}

/// `W₁ = p²η² - W₀`.
pub fn perturbation_eta(params: &TrialParams, eta: f64) -> f64 {
    params.p * params.p * eta * eta - unperturbed_potential_eta(params, eta)
}

/// Sampled log-derivative, generated potential and perturbation for one coordinate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RiccatiData {
    pub coordinate: Coordinate,
    pub params: TrialParams,
    pub nodes: Vec<f64>,
    /// `x₀ = φ₀'` or `y₀ = ρ₀'`; NaN where the ungerade node makes it a pole.
    pub log_derivative: Vec<f64>,
    /// `V₀` or `W₀`.
    pub unperturbed: Vec<f64>,
    /// `V₁` or `W₁`.
    pub perturbation: Vec<f64>,
    pub a0: f64,
}

impl RiccatiData {
    pub fn sup_perturbation(&self) -> f64 {
        self.perturbation.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Sample the Riccati data on the quadrature nodes of the given order
/// (plus `ξ = 1` for the ξ coordinate).
pub fn build_riccati(params: &TrialParams, geometry: Geometry, coordinate: Coordinate, order: usize) -> Result<RiccatiData> {
    let mut params = *params;
    params.r = geometry.r();
    params.validate()?;
    let nodes: Vec<f64> = match coordinate {
        Coordinate::Xi => std::iter::once(1.0)
            .chain(semi_infinite_rule(order, 1.0 / params.p)?.nodes().iter().copied())
            .collect(),
        Coordinate::Eta => gauss_rule(order)?.nodes().to_vec(),
    };
    let mut log_derivative = Vec::with_capacity(nodes.len());
    let mut unperturbed = Vec::with_capacity(nodes.len());
    let mut perturbation = Vec::with_capacity(nodes.len());
    for &t in &nodes {
        let (ld, v0, v1) = match coordinate {
            Coordinate::Xi => (
                params.log_derivative_x0(t)?,
                unperturbed_potential_xi(&params, t),
                perturbation_xi(&params, t),
            ),
            Coordinate::Eta => (
                params.log_derivative_y0(t).unwrap_or(f64::NAN),
                unperturbed_potential_eta(&params, t),
                perturbation_eta(&params, t),
            ),
        };
        if !v0.is_finite() || !v1.is_finite() {
            return Err(Error::Evaluation(format!("non-finite potential at {t}")));
        }
        log_derivative.push(ld);
        unperturbed.push(v0);
        perturbation.push(v1);
    }
    Ok(RiccatiData {
        coordinate,
        params,
        nodes,
        log_derivative,
        unperturbed,
        perturbation,
        a0: 0.0,
    })
}

/// `log X₀` shifted so its largest value on the rule is zero.
fn log_weight_shift(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::NEG_INFINITY, f64::max)
}

fn xi_constant(params: &TrialParams, rule: &QuadratureRule) -> Result<f64> {
    let shift = log_weight_shift(rule.nodes().iter().map(|&t| params.log_x0_jet(t).v));
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let weight = w * (2.0 * (params.log_x0_jet(t).v - shift)).exp();
        num.add(weight * perturbation_xi(params, t));
        den.add(weight);
    }
    if !(den.value() > 0.0) {
        return Err(Error::Scaling("xi weight".into()));
    }
    Ok(num.value() / den.value())
}

fn eta_constant(params: &TrialParams, rule: &QuadratureRule) -> Result<f64> {
    let scale = rule
        .nodes()
        .iter()
        .map(|&t| params.y0_jet(t).v.abs())
        .fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Scaling("eta weight".into()));
    }
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let y = params.y0_jet(t).v / scale;
        let weight = w * y * y;
        num.add(weight * perturbation_eta(params, t));
        den.add(weight);
    }
    if !(den.value() > 0.0) {
        return Err(Error::Scaling("eta weight".into()));
    }
    Ok(num.value() / den.value())
}

/// `A₁` for the coordinate of `riccati`, as the `X₀²` (`Y₀²`) weighted mean of the perturbation.
pub fn first_separation_constant(riccati: &RiccatiData, order: usize) -> Result<f64> {
    let params = &riccati.params;
    match riccati.coordinate {
        Coordinate::Xi => xi_constant(params, &semi_infinite_rule(order, 1.0 / params.p)?),
        Coordinate::Eta => eta_constant(params, &gauss_rule(order)?),
    }
}

/// `A₁ₓ` at the default quadrature order.
pub fn separation_constant_xi(params: &TrialParams) -> Result<f64> {
    params.validate()?;
    xi_constant(params, &semi_infinite_rule(DEFAULT_QUAD_ORDER, 1.0 / params.p)?)
}

/// `A₁ᵧ` at the default quadrature order.
pub fn separation_constant_eta(params: &TrialParams) -> Result<f64> {
    params.validate()?;
    eta_constant(params, &gauss_rule(DEFAULT_QUAD_ORDER)?)
}

/// `|A₁ₓ - A₁ᵧ|`.
pub fn consistency_gap(result: &SolveResult) -> f64 {
    (result.a1x - result.a1y).abs()
}

/// First-order correction `x₁` at one point, by direct quadrature.
///
/// Below the split point the cumulative integral runs from 1; above it the
/// complementary tail is used, which equals minus the same quantity because
/// the full integral vanishes by the definition of `A₁`.
pub fn correction_xi(params: &TrialParams, a1: f64, xi: f64) -> Result<f64> {
    if xi == 1.0 {
        return Ok(0.5 * (a1 - perturbation_xi(params, 1.0)));
    }
    let lx = params.log_x0_jet(xi).v;
    let integrand = |t: f64| (a1 - perturbation_xi(params, t)) * (2.0 * (params.log_x0_jet(t).v - lx)).exp();
    let split = 1.0 + 1.0 / params.p;
    let n = if xi <= split {
        gauss_interval(1.0, xi, PANEL_ORDER, integrand)?
    } else {
        -gauss_tail(xi, 0.5 / params.p, PANEL_ORDER, integrand)?
    };
    let prefactor = xi * xi - 1.0;
    if prefactor == 0.0 {
        return Err(Error::NumericalSingularity(format!("x1 prefactor vanishes at {xi}")));
    }
    Ok(n / prefactor)
}

/// Ratio `Y₀(t)/Y₀(η)` with the ungerade node divided out.
fn eta_ratio(params: &TrialParams, t: f64, eta: f64) -> f64 {
    match params.parity() {
        Parity::Gerade => params.y0_jet(t).v / params.y0_jet(eta).v,
        Parity::Ungerade => (t / eta) * params.y0_reduced_jet(t).v / params.y0_reduced_jet(eta).v,
    }
}

/// First-order correction `y₁` at one point, by direct quadrature. Odd in η.
pub fn correction_eta(params: &TrialParams, a1: f64, eta: f64) -> Result<f64> {
    if eta < 0.0 {
        return Ok(-correction_eta(params, a1, -eta)?);
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    if eta == 1.0 {
        return Ok(0.5 * (a1 - perturbation_eta(params, 1.0)));
    }
    let integrand = |t: f64| {
        let r = eta_ratio(params, t, eta);
        (a1 - perturbation_eta(params, t)) * r * r
    };
    let n = if eta <= 0.5 {
        gauss_interval(0.0, eta, PANEL_ORDER, integrand)?
    } else {
        -gauss_interval(eta, 1.0, PANEL_ORDER, integrand)?
    };
    let prefactor = eta * eta - 1.0;
    Ok(n / prefactor)
}

/// Sampled first correction for one coordinate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectionProfile {
    pub coordinate: Coordinate,
    /// ξ ∈ [1, ξ_end] or η ∈ [0, 1]; the η profile is extended by parity.
    pub grid: Vec<f64>,
    /// `x₁` or `y₁`.
    pub correction: Vec<f64>,
    /// Derivative of the correction at the grid nodes.
    pub slope: Vec<f64>,
    /// `φ₁` (with `φ₁(1) = 0`) or `ρ₁` (with `ρ₁(0) = 0`).
    pub phase: Vec<f64>,
    pub a1: f64,
    /// Parity of the correction under `η → -η` (odd for both states).
    pub odd: bool,
}

fn hermite(x0: f64, x1: f64, f0: f64, f1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * h * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * h * d1
}

impl CorrectionProfile {
    /// Profile whose phase and correction vanish identically.
    pub fn zero(coordinate: Coordinate, lo: f64, hi: f64) -> Self {
        CorrectionProfile {
            coordinate,
            grid: vec![lo, hi],
            correction: vec![0.0; 2],
            slope: vec![0.0; 2],
            phase: vec![0.0; 2],
            a1: 0.0,
            odd: true,
        }
    }

    pub fn lower(&self) -> f64 {
        self.grid[0]
    }

    pub fn upper(&self) -> f64 {
        *self.grid.last().expect("profile grid is non-empty")
    }

    fn locate(&self, x: f64) -> Result<usize> {
        let (lo, hi) = (self.lower(), self.upper());
        if !(x >= lo && x <= hi) {
            return Err(Error::Extrapolation { at: x, lo, hi });
        }
        let i = self.grid.partition_point(|&g| g <= x);
        Ok(i.clamp(1, self.grid.len() - 1) - 1)
    }

    /// `(phase, correction)` at `x` by cubic Hermite interpolation; the phase
    /// uses the correction as its exact slope.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        if self.coordinate == Coordinate::Eta && x < 0.0 {
            let (phase, corr) = self.eval(-x)?;
            return Ok((phase, if self.odd { -corr } else { corr }));
        }
        let i = self.locate(x)?;
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let phase = hermite(x0, x1, self.phase[i], self.phase[i + 1], self.correction[i], self.correction[i + 1], x);
        let corr = hermite(x0, x1, self.correction[i], self.correction[i + 1], self.slope[i], self.slope[i + 1], x);
        Ok((phase, corr))
    }

    /// `(node, value)` pairs of the correction or the phase; η profiles are
    /// mirrored onto `[-1, 1]`.
    pub fn plot_pairs(&self, phase: bool) -> Vec<(f64, f64)> {
        let values = if phase { &self.phase } else { &self.correction };
        let mut out = Vec::with_capacity(2 * self.grid.len());
        if self.coordinate == Coordinate::Eta {
            for (&g, &v) in self.grid.iter().zip(values).skip(1).rev() {
                let mirrored = if phase || !self.odd { v } else { -v };
                out.push((-g, mirrored));
            }
        }
        out.extend(self.grid.iter().copied().zip(values.iter().copied()));
        out
    }
}

/// Phase increments from Hermite quadrature of the correction,
/// `∫ = h(f₀+f₁)/2 + h²(f₀'-f₁')/12`.
fn cumulative_phase(grid: &[f64], corr: &[f64], slope: &[f64]) -> Vec<f64> {
    let mut phase = Vec::with_capacity(grid.len());
    let mut acc = CompensatedSum::new();
    phase.push(0.0);
    for i in 1..grid.len() {
        let h = grid[i] - grid[i - 1];
        acc.add(0.5 * h * (corr[i - 1] + corr[i]) + h * h * (slope[i - 1] - slope[i]) / 12.0);
        phase.push(acc.value());
    }
    phase
}

fn central_slope(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Last ξ node used for profiles.
pub fn xi_profile_end(params: &TrialParams) -> f64 {
    1.0 + XI_DECAY_LENGTHS / params.p
}

/// Build the correction profile for one coordinate with the given `A₁`.
pub fn first_correction(riccati: &RiccatiData, a1: f64) -> Result<CorrectionProfile> {
    let params = riccati.params;
    match riccati.coordinate {
        Coordinate::Xi => {
            let span = xi_profile_end(&params) - 1.0;
            let grid: Vec<f64> = (0..=XI_GRID)
                .map(|k| {
                    let u = k as f64 / XI_GRID as f64;
                    1.0 + span * u * u
                })
                .collect();
            let f = |x: f64| correction_xi(&params, a1, x);
            let mut correction = Vec::with_capacity(grid.len());
            let mut slope = Vec::with_capacity(grid.len());
            for &x in &grid {
                let v = f(x)?;
                if !v.is_finite() {
                    return Err(Error::NumericalSingularity(format!("x1 not finite at {x}")));
                }
                correction.push(v);
                slope.push(central_slope(f, x, 1e-5 * x)?);
            }
            let phase = cumulative_phase(&grid, &correction, &slope);
            Ok(CorrectionProfile {
                coordinate: Coordinate::Xi,
                grid,
                correction,
                slope,
                phase,
                a1,
                odd: false,
            })
        }
        Coordinate::Eta => {
            let grid: Vec<f64> = (0..=ETA_GRID).map(|k| k as f64 / ETA_GRID as f64).collect();
            let f = |x: f64| correction_eta(&params, a1, x);
            let mut correction = Vec::with_capacity(grid.len());
            let mut slope = Vec::with_capacity(grid.len());
            let h = 1e-5;
            for &x in &grid {
                let v = f(x)?;
                if !v.is_finite() {
                    return Err(Error::NumericalSingularity(format!("y1 not finite at {x}")));
                }
                correction.push(v);
                // one-sided near η = 1, where D(η) may not continue past the interval
                let s = if x + h > 1.0 {
                    (3.0 * v - 4.0 * f(x - h)? + f(x - 2.0 * h)?) / (2.0 * h)
                } else {
                    central_slope(f, x, h)?
                };
                slope.push(s);
            }
            let phase = cumulative_phase(&grid, &correction, &slope);
            Ok(CorrectionProfile {
                coordinate: Coordinate::Eta,
                grid,
                correction,
                slope,
                phase,
                a1,
                odd: true,
            })
        }
    }
}

/// Both profiles for a parameter set, each with its own `A₁`.
pub fn build_profiles(params: &TrialParams) -> Result<(CorrectionProfile, CorrectionProfile)> {
    let g = params.geometry()?;
    let rx = build_riccati(params, g, Coordinate::Xi, 8)?;
    let ry = build_riccati(params, g, Coordinate::Eta, 8)?;
    let px = first_correction(&rx, separation_constant_xi(params)?)?;
    let py = first_correction(&ry, separation_constant_eta(params)?)?;
    Ok((px, py))
}

/// `X₀Y₀·e^{-λ(φ₁+ρ₁)}`; `λ = 1` is the corrected trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectedTrial {
    pub params: TrialParams,
    pub xi: CorrectionProfile,
    pub eta: CorrectionProfile,
    pub lambda: f64,
}

impl CorrectedTrial {
    pub fn new(params: TrialParams, xi: CorrectionProfile, eta: CorrectionProfile) -> Result<Self> {
        if xi.coordinate != Coordinate::Xi || eta.coordinate != Coordinate::Eta {
            return Err(Error::Usage("profiles passed in the wrong order".into()));
        }
        Ok(CorrectedTrial {
            params,
            xi,
            eta,
            lambda: 1.0,
        })
    }

    pub fn from_params(params: TrialParams) -> Result<Self> {
        let (xi, eta) = build_profiles(&params)?;
        Self::new(params, xi, eta)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// `(X, X')`; beyond the profile grid `X₀` has underflowed and zero is returned.
    pub fn x(&self, xi: f64) -> Result<(f64, f64)> {
        let l = self.params.log_x0_jet(xi);
        if xi > self.xi.upper() {
            let end = self.params.log_x0_jet(self.xi.upper()).v;
            let head = self.params.log_x0_jet(1.0).v;
            if end - head < -300.0 && l.v <= end {
                return Ok((0.0, 0.0));
            }
        }
        let (phase, corr) = self.xi.eval(xi)?;
        let v = (l.v - self.lambda * phase).exp();
        Ok((v, v * (l.d1 - self.lambda * corr)))
    }

    /// `(Y, Y')`.
    pub fn y(&self, eta: f64) -> Result<(f64, f64)> {
        let y0: Jet = self.params.y0_jet(eta);
        let (phase, corr) = self.eta.eval(eta)?;
        let damp = (-self.lambda * phase).exp();
        Ok((y0.v * damp, damp * (y0.d1 - self.lambda * corr * y0.v)))
    }

    pub fn eval(&self, point: ProlatePoint) -> Result<f64> {
        Ok(self.x(point.xi)?.0 * self.y(point.eta)?.0)
    }

    pub fn moments(&self, functional: &EnergyFunctional) -> Result<Moments> {
        Moments::from_factors(functional.xi_rule(), functional.eta_rule(), |t| self.x(t), |t| self.y(t))
    }

    /// Electronic energy `E'` (Ry) of this wavefunction.
    pub fn energy(&self, functional: &EnergyFunctional) -> Result<f64> {
        self.moments(functional)?.electronic_energy(self.params.r)
    }
}

/// Outcome of re-optimizing `p` with the corrected trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectedOptimum {
    pub p_initial: f64,
    pub p_corrected: f64,
    pub e_uncorrected: f64,
    /// Corrected-trial energy at the original `p`.
    pub e_corrected: f64,
    /// Corrected-trial energy at the re-optimized `p`.
    pub e_reoptimized: f64,
}

impl CorrectedOptimum {
    pub fn relative_p_shift(&self) -> f64 {
        (self.p_corrected - self.p_initial).abs() / self.p_initial
    }
}

/// Minimize the corrected-trial energy over `p` alone, rebuilding the
/// corrections at every `p` and keeping the other parameters fixed.
///
/// Near its minimum the energy moves by ~1e-16 Ry for relative shifts of
/// 1e-8 in `p`, below what direct search can resolve, so the minimum comes
/// from parabolas fitted to nine samples spread over `±window` (relative),
/// re-centred once on the first vertex.
pub fn reoptimize_p(params: &TrialParams, window: f64, order: usize) -> Result<CorrectedOptimum> {
    let functional = EnergyFunctional::for_params(params, order)?;
    let energy_at = |p: f64| -> Result<f64> {
        let mut q = *params;
        q.p = p;
        CorrectedTrial::from_params(q)?.energy(&functional)
    };
    let (e_uncorrected, _) = functional.energy(params)?;
    let p0 = params.p;
    let e_corrected = energy_at(p0)?;
    let mut centre = p0;
    for _ in 0..2 {
        let samples = (-4..=4)
            .map(|j| {
                let t = j as f64 / 4.0;
                Ok((t, energy_at(centre * (1.0 + window * t))?))
            })
            .collect::<Result<Vec<_>>>()?;
        let ([_, b, c], _) = quadratic_fit(&samples)?;
        if !(c > 0.0) {
            return Err(Error::NumericalSingularity(format!("corrected energy is not convex in p near {centre}")));
        }
        let vertex = (-b / (2.0 * c)).clamp(-1.0, 1.0);
        centre *= 1.0 + window * vertex;
    }
    let e_best = energy_at(centre)?;
    Ok(CorrectedOptimum {
        p_initial: p0,
        p_corrected: centre,
        e_uncorrected,
        e_corrected,
        e_reoptimized: e_best.min(e_corrected),
    })
}

/// Energies of `X₀Y₀e^{-λ(φ₁+ρ₁)}` for each `λ`.
pub fn lambda_sweep(trial: &CorrectedTrial, lambdas: &[f64], order: usize) -> Result<Vec<(f64, f64)>> {
    let functional = EnergyFunctional::for_params(&trial.params, order)?;
    lambdas
        .iter()
        .map(|&l| Ok((l, trial.clone().with_lambda(l).energy(&functional)?)))
        .collect()
}

/// Least-squares quadratic through `(x, y)` pairs: coefficients `[c0, c1, c2]`
/// and the largest residual.
pub fn quadratic_fit(points: &[(f64, f64)]) -> Result<([f64; 3], f64)> {
    if points.len() < 3 {
        return Err(Error::Usage("quadratic fit needs three points".into()));
    }
    let mut m = [[0.0f64; 4]; 3];
    for &(x, y) in points {
        let basis = [1.0, x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            m[i][3] += basis[i] * y;
        }
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, pivot);
        if m[col][col].abs() < 1e-300 {
            return Err(Error::NumericalSingularity("degenerate fit".into()));
        }
        for row in 0..3 {
            if row != col {
                let k = m[row][col] / m[col][col];
                for c in col..4 {
                    m[row][c] -= k * m[col][c];
                }
            }
        }
    }
    let c = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    let residual = points
        .iter()
        .map(|&(x, y)| (c[0] + c[1] * x + c[2] * x * x - y).abs())
        .fold(0.0, f64::max);
    Ok((c, residual))
}

/// Two-column whitespace-separated plot data.
pub fn write_plot_data<W: Write>(mut out: W, header: &str, pairs: &[(f64, f64)]) -> Result<()> {
    for line in header.lines() {
        writeln!(out, "# {line}")?;
    }
    for &(x, y) in pairs {
        writeln!(out, "{x:.12e} {y:.12e}")?;
    }
    Ok(())
}
