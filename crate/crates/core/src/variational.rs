//! Rayleigh quotient of the two-center Hamiltonian over separable trial
//! functions, and its minimization over the seven trial parameters.
//!
//! With `Ψ = X(ξ)Y(η)`, volume element `(R³/8)(ξ²-η²)dξdηdφ` and the potential
//! `-8ξ/[R(ξ²-η²)]`, every integral factorizes into one-dimensional moments:
//!
//! ```text
//! E' = 4[(K_ξ N_η + N_ξ K_η) - 2R M1_ξ N_η] / (R² [M2_ξ N_η - N_ξ M2_η])
//! ```
//!
//! where `N = ∫f²`, `M1 = ∫ξX²`, `M2 = ∫x²f²`, `K_ξ = ∫(ξ²-1)X'²`,
//! `K_η = ∫(1-η²)Y'²`. The kinetic term is used in first-derivative form.

use std::cell::Cell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearization;
use crate::presets::preset_seed;
use crate::prolate::{p_from_electronic_energy, Geometry, StateLabel};
use crate::quadrature::{gauss_rule, integrate, semi_infinite_rule, CompensatedSum, IntegralResult, QuadratureRule};
use crate::simplex::{golden_section, nelder_mead, newton_polish, SimplexOptions};
use crate::trial::{TrialParams, PARAM_NAMES};

/// Quadrature order used when none is configured.
pub const DEFAULT_QUAD_ORDER: usize = 200;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Nodes per coordinate.
    pub quad_order: usize,
    /// Total functional evaluations allowed.
    pub max_evaluations: usize,
    /// Energy change (Ry) between restarts that counts as converged.
    pub energy_tol: f64,
    /// Simplex diameter that counts as converged.
    pub simplex_tol: f64,
    /// Directions along which the functional moves less than this are frozen.
    pub flat_threshold: f64,
    pub max_restarts: usize,
    /// After convergence, pin `p` to `(R/2)√(-E')` and re-minimize the other
    /// parameters; kept only if the energy rises by at most `consistency_tol`.
    pub self_consistent_p: bool,
    /// Largest energy rise (Ry) accepted for the self-consistent point.
    pub consistency_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            quad_order: DEFAULT_QUAD_ORDER,
            max_evaluations: 600_000,
            energy_tol: 1e-12,
            simplex_tol: 1e-8,
            flat_threshold: 1e-13,
            max_restarts: 40,
            self_consistent_p: true,
            consistency_tol: 1e-10,
        }
    }
}

/// One-dimensional moments entering the energy functional.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub xi_norm: f64,
    pub xi_first: f64,
    pub xi_second: f64,
    pub xi_kinetic: f64,
    pub eta_norm: f64,
    pub eta_second: f64,
    pub eta_kinetic: f64,
}

impl Moments {
    /// Accumulate the moments from `(value, derivative)` samplers of `X` and `Y`.
    pub fn from_factors<FX, FY>(xi_rule: &QuadratureRule, eta_rule: &QuadratureRule, mut x: FX, mut y: FY) -> Result<Self>
    where
        FX: FnMut(f64) -> Result<(f64, f64)>,
        FY: FnMut(f64) -> Result<(f64, f64)>,
    {
        let mut acc = [CompensatedSum::new(); 7];
        for (&xi, &w) in xi_rule.nodes().iter().zip(xi_rule.weights()) {
            let (v, d) = x(xi)?;
            let v2 = w * v * v;
            acc[0].add(v2);
            acc[1].add(xi * v2);
            acc[2].add(xi * xi * v2);
            acc[3].add(w * (xi * xi - 1.0) * d * d);
        }
        for (&eta, &w) in eta_rule.nodes().iter().zip(eta_rule.weights()) {
            let (v, d) = y(eta)?;
            let v2 = w * v * v;
            acc[4].add(v2);
            acc[5].add(eta * eta * v2);
            acc[6].add(w * (1.0 - eta * eta) * d * d);
        }
        let m = Moments {
            xi_norm: acc[0].value(),
            xi_first: acc[1].value(),
            xi_second: acc[2].value(),
            xi_kinetic: acc[3].value(),
            eta_norm: acc[4].value(),
            eta_second: acc[5].value(),
            eta_kinetic: acc[6].value(),
        };
        if [m.xi_norm, m.xi_first, m.xi_second, m.xi_kinetic, m.eta_norm, m.eta_second, m.eta_kinetic]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(Error::Evaluation("non-finite moment".into()));
        }
        Ok(m)
    }

    /// `⟨Ψ|Ψ⟩` including `(R³/8)` and the azimuthal `2π`.
    pub fn norm(&self, r: f64) -> f64 {
        2.0 * std::f64::consts::PI * r * r * r / 8.0 * self.reduced_norm()
    }

    fn reduced_norm(&self) -> f64 {
        self.xi_second * self.eta_norm - self.xi_norm * self.eta_second
    }

    /// Electronic energy `E'` in Ry.
    pub fn electronic_energy(&self, r: f64) -> Result<f64> {
        let den = self.reduced_norm();
        if !(den > 0.0) {
            return Err(Error::Evaluation(format!("non-positive norm {den}")));
        }
        let kinetic = self.xi_kinetic * self.eta_norm + self.xi_norm * self.eta_kinetic;
        let potential = 2.0 * r * self.xi_first * self.eta_norm;
        Ok(4.0 * (kinetic - potential) / (r * r * den))
    }
}

/// The moments with order-doubling error estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentBundle {
    pub xi_norm: IntegralResult,
    pub xi_second: IntegralResult,
    pub xi_first: IntegralResult,
    pub xi_kinetic: IntegralResult,
    pub eta_norm: IntegralResult,
    pub eta_second: IntegralResult,
    pub eta_kinetic: IntegralResult,
}

impl MomentBundle {
    pub fn all(&self) -> [IntegralResult; 7] {
        [
            self.xi_norm,
            self.xi_second,
            self.xi_first,
            self.xi_kinetic,
            self.eta_norm,
            self.eta_second,
            self.eta_kinetic,
        ]
    }

    pub fn max_relative_error(&self) -> f64 {
        self.all().iter().map(|r| r.relative_error()).fold(0.0, f64::max)
    }

    pub fn values(&self) -> Moments {
        Moments {
            xi_norm: self.xi_norm.value,
            xi_first: self.xi_first.value,
            xi_second: self.xi_second.value,
            xi_kinetic: self.xi_kinetic.value,
            eta_norm: self.eta_norm.value,
            eta_second: self.eta_second.value,
            eta_kinetic: self.eta_kinetic.value,
        }
    }
}

/// Evaluates the Rayleigh quotient for one `(R, state)` on fixed rules.
#[derive(Clone, Debug)]
pub struct EnergyFunctional {
    geometry: Geometry,
    state: StateLabel,
    xi_rule: QuadratureRule,
    eta_rule: QuadratureRule,
}

impl EnergyFunctional {
    /// `xi_scale` is the mapping scale of the semi-infinite rule, normally `1/p`.
    pub fn new(geometry: Geometry, state: StateLabel, order: usize, xi_scale: f64) -> Result<Self> {
        Ok(EnergyFunctional {
            geometry,
            state,
            xi_rule: semi_infinite_rule(order, xi_scale)?,
            eta_rule: gauss_rule(order)?,
        })
    }

    pub fn for_params(params: &TrialParams, order: usize) -> Result<Self> {
        Self::new(params.geometry()?, params.state, order, 1.0 / params.p)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn state(&self) -> StateLabel {
        self.state
    }

    pub fn xi_rule(&self) -> &QuadratureRule {
        &self.xi_rule
    }

    pub fn eta_rule(&self) -> &QuadratureRule {
        &self.eta_rule
    }

    pub fn moments(&self, params: &TrialParams) -> Result<Moments> {
        params.validate()?;
        Moments::from_factors(
            &self.xi_rule,
            &self.eta_rule,
            |xi| {
                let j = params.log_x0_jet(xi);
                let v = j.v.exp();
                Ok((v, v * j.d1))
            },
            |eta| {
                let j = params.y0_jet(eta);
                Ok((j.v, j.d1))
            },
        )
    }

    /// `(E', ⟨Ψ|Ψ⟩)`.
    pub fn energy(&self, params: &TrialParams) -> Result<(f64, f64)> {
        let m = self.moments(params)?;
        let r = self.geometry.r();
        Ok((m.electronic_energy(r)?, m.norm(r)))
    }

    pub fn bundle(&self, params: &TrialParams) -> Result<MomentBundle> {
        params.validate()?;
        let x = |xi: f64| params.log_x0_jet(xi);
        let xv = |xi: f64| x(xi).v.exp();
        let xd = |xi: f64| {
            let j = x(xi);
            j.v.exp() * j.d1
        };
        let y = |eta: f64| params.y0_jet(eta);
        Ok(MomentBundle {
            xi_norm: integrate(|t| xv(t).powi(2), &self.xi_rule)?,
            xi_first: integrate(|t| t * xv(t).powi(2), &self.xi_rule)?,
            xi_second: integrate(|t| t * t * xv(t).powi(2), &self.xi_rule)?,
            xi_kinetic: integrate(|t| (t * t - 1.0) * xd(t).powi(2), &self.xi_rule)?,
            eta_norm: integrate(|t| y(t).v.powi(2), &self.eta_rule)?,
            eta_second: integrate(|t| t * t * y(t).v.powi(2), &self.eta_rule)?,
            eta_kinetic: integrate(|t| (1.0 - t * t) * y(t).d1.powi(2), &self.eta_rule)?,
        })
    }
}

/// `(E' [Ry], ⟨Ψ|Ψ⟩)` for the given parameters at the default quadrature order.
pub fn energy_expectation(params: &TrialParams, geometry: Geometry) -> Result<(f64, f64)> {
    let mut p = *params;
    p.r = geometry.r();
    EnergyFunctional::for_params(&p, DEFAULT_QUAD_ORDER)?.energy(&p)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub evaluations: usize,
    pub restarts: usize,
    /// Largest relative order-doubling error among the final moments.
    pub quadrature_error: f64,
    pub frozen: Vec<String>,
    pub converged: bool,
    /// `|p_opt - (R/2)√(-E')| / p_opt`.
    pub p_consistency: f64,
    pub simplex_diameter: f64,
    /// `p` at the raw simplex minimum, before the self-consistency stage.
    pub p_argmin: f64,
    /// Whether the reported point has `p = (R/2)√(-E')`.
    pub self_consistent: bool,
    /// Energy of the self-consistent point minus the raw minimum (Ry).
    pub consistency_cost: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveResult {
    pub r: f64,
    pub state: StateLabel,
    /// Total energy in Ry.
    pub e_total: f64,
    /// Electronic energy in Ry.
    pub e_prime: f64,
    pub p_opt: f64,
    pub params: TrialParams,
    pub a1x: f64,
    pub a1y: f64,
    pub diagnostics: Diagnostics,
}

impl SolveResult {
    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.r).expect("stored R is valid")
    }

    /// `p` implied by the variational energy.
    pub fn exact_p(&self) -> f64 {
        p_from_electronic_energy(self.e_prime, self.r)
    }
}

/// Which parameters the minimizer may move.
#[derive(Clone, Copy, Debug, PartialEq)]
struct FreeMask([bool; 7]);

impl FreeMask {
    const ALL: FreeMask = FreeMask([true; 7]);
    // a₂ and b₂ pinned
    const REDUCED: FreeMask = FreeMask([true, true, true, false, false, true, true]);
    const FIXED_P: FreeMask = FreeMask([true, true, true, true, true, true, false]);
}

/// Minimize the energy over all seven parameters at fixed `R`.
pub fn minimize(geometry: Geometry, state: StateLabel, init: Option<TrialParams>, config: &SolverConfig) -> Result<SolveResult> {
    run_minimizer(geometry, state, init, config, FreeMask::ALL)
}

/// Minimize with `a₂ = b₂ = 0` held fixed.
pub fn reduced_mode(geometry: Geometry, state: StateLabel, init: Option<TrialParams>, config: &SolverConfig) -> Result<SolveResult> {
    let mut seed = match init {
        Some(p) => p,
        None => preset_seed(state, geometry.r())?,
    };
    seed.a2 = 0.0;
    seed.b2 = 0.0;
    run_minimizer(geometry, state, Some(seed), config, FreeMask::REDUCED)
}

struct Descent {
    x: Vec<f64>,
    f: f64,
    iterations: usize,
    restarts: usize,
    diameter: f64,
    converged: bool,
}

/// Restarted simplex with coordinate polishing; stops once a restart gains
/// less than `energy_tol` from a converged simplex.
fn descend<F: Fn(&[f64]) -> f64>(f: F, x0: Vec<f64>, f0: f64, config: &SolverConfig, spent: &Cell<usize>) -> Descent {
    let mut d = Descent {
        x: x0,
        f: f0,
        iterations: 0,
        restarts: 0,
        diameter: f64::INFINITY,
        converged: false,
    };
    if d.x.is_empty() {
        d.converged = true;
        d.diameter = 0.0;
        return d;
    }
    let mut step_fraction = 0.05;
    while d.restarts < config.max_restarts && spent.get() < config.max_evaluations {
        d.restarts += 1;
        let before = d.f;
        let steps: Vec<f64> = d.x.iter().map(|v| step_fraction * v.abs().max(0.02)).collect();
        let options = SimplexOptions {
            max_evaluations: config.max_evaluations.saturating_sub(spent.get()).max(10),
            f_tol: 1e-15,
            x_tol: config.simplex_tol,
        };
        let out = nelder_mead(&f, &d.x, &steps, &options);
        d.iterations += out.iterations;
        if out.f <= d.f {
            d.x = out.x;
            d.f = out.f;
        }
        d.diameter = out.diameter;

        // coordinate polish
        for k in 0..d.x.len() {
            let h = 1e-4 * d.x[k].abs().max(0.01);
            let centre = d.x.clone();
            let (xk, fk) = golden_section(
                |t| {
                    let mut v = centre.clone();
                    v[k] = t;
                    f(&v)
                },
                d.x[k] - h,
                d.x[k] + h,
                1e-12 * d.x[k].abs().max(1.0),
                80,
            );
            if fk < d.f {
                d.x[k] = xk;
                d.f = fk;
            }
        }

        let scales: Vec<f64> = d.x.iter().map(|v| v.abs().max(0.01)).collect();
        let (xn, fnew, updates) = newton_polish(&f, &d.x, &scales, 30);
        if fnew < d.f {
            d.x = xn;
            d.f = fnew;
        }
        d.iterations += updates;
        let gain = before - d.f;

        if out.converged && gain.abs() < config.energy_tol && d.restarts > 1 {
            d.converged = true;
            break;
        }
        step_fraction = (step_fraction * 0.5).max(1e-3);
    }
    d
}

/// Minimize over the six shape parameters with `p` held at the given value.
pub fn minimize_fixed_p(
    geometry: Geometry,
    state: StateLabel,
    init: Option<TrialParams>,
    p: f64,
    config: &SolverConfig,
) -> Result<SolveResult> {
    let mut seed = match init {
        Some(t) => t,
        None => preset_seed(state, geometry.r())?,
    };
    seed.p = p;
    run_minimizer(geometry, state, Some(seed), config, FreeMask::FIXED_P)
}

fn run_minimizer(
    geometry: Geometry,
    state: StateLabel,
    init: Option<TrialParams>,
    config: &SolverConfig,
    mask: FreeMask,
) -> Result<SolveResult> {
    state.ensure_supported()?;
    let r = geometry.r();
    let mut seed = match init {
        Some(p) => p,
        None => preset_seed(state, r)?,
    };
    seed.r = r;
    seed.state = state;
    seed.validate()?;

    let functional = EnergyFunctional::new(geometry, state, config.quad_order, 1.0 / seed.p)?;
    let evaluations = Cell::new(0usize);
    let energy = |params: &TrialParams| -> f64 {
        evaluations.set(evaluations.get() + 1);
        match functional.energy(params) {
            Ok((e, _)) if e.is_finite() => e,
            _ => f64::INFINITY,
        }
    };
    let assemble = |base: &[f64; 7], free: &[usize], x: &[f64]| -> TrialParams {
        let mut v = *base;
        for (&i, &xi) in free.iter().zip(x) {
            v[i] = xi;
        }
        TrialParams::from_vec(&v, state, r)
    };

    let base = seed.to_vec();
    let start = energy(&seed);
    if !start.is_finite() {
        return Err(Error::Evaluation("energy functional fails at the seed".into()));
    }

    // Freeze directions the functional cannot see.
    let mut frozen = Vec::new();
    let mut free: Vec<usize> = (0..7).filter(|&i| mask.0[i]).collect();
    free.retain(|&i| {
        let probe = (0.1 * base[i].abs()).max(1e-4);
        let mut up = base;
        up[i] += probe;
        let mut down = base;
        down[i] -= probe;
        let fu = energy(&TrialParams::from_vec(&up, state, r));
        let fd = energy(&TrialParams::from_vec(&down, state, r));
        let flat = (fu - start).abs() < config.flat_threshold && (fd - start).abs() < config.flat_threshold;
        if flat {
            frozen.push(PARAM_NAMES[i].to_string());
        }
        !flat
    });

    let x0: Vec<f64> = free.iter().map(|&i| base[i]).collect();
    let main = descend(|x| energy(&assemble(&base, &free, x)), x0, start, config, &evaluations);
    let mut params = assemble(&base, &free, &main.x);
    let mut iterations = main.iterations;
    let mut diameter = main.diameter;
    let p_argmin = params.p;
    let mut self_consistent = false;
    let mut consistency_cost = 0.0;

    // The functional is flat in p to ~1e-13 Ry over a relative window of
    // ~1e-6; inside that window take the point where p reproduces the energy.
    if config.self_consistent_p && main.converged && free.contains(&6) {
        let others: Vec<usize> = free.iter().copied().filter(|&i| i != 6).collect();
        let mut current = params;
        let mut e_current = main.f;
        for _ in 0..6 {
            let target = p_from_electronic_energy(e_current, r);
            if (target - current.p).abs() <= 1e-13 * current.p {
                break;
            }
            let mut pinned = current.to_vec();
            pinned[6] = target;
            let x0: Vec<f64> = others.iter().map(|&i| pinned[i]).collect();
            let f0 = energy(&TrialParams::from_vec(&pinned, state, r));
            let stage = descend(|x| energy(&assemble(&pinned, &others, x)), x0, f0, config, &evaluations);
            iterations += stage.iterations;
            current = assemble(&pinned, &others, &stage.x);
            e_current = stage.f;
            diameter = stage.diameter;
        }
        consistency_cost = e_current - main.f;
        if consistency_cost <= config.consistency_tol {
            params = current;
            self_consistent = true;
        } else {
            diameter = main.diameter;
        }
    }

    let evaluations = evaluations.get();
    let converged = main.converged;
    let mut result = finish(&functional, params, evaluations, iterations, main.restarts, frozen, converged)?;
    result.diagnostics.simplex_diameter = diameter;
    result.diagnostics.p_argmin = p_argmin;
    result.diagnostics.self_consistent = self_consistent;
    result.diagnostics.consistency_cost = consistency_cost;
    if !converged {
        return Err(Error::IterationLimit {
            evaluations,
            best: Box::new(result),
        });
    }
    Ok(result)
}

fn finish(
    functional: &EnergyFunctional,
    params: TrialParams,
    evaluations: usize,
    iterations: usize,
    restarts: usize,
    frozen: Vec<String>,
    converged: bool,
) -> Result<SolveResult> {
    let r = functional.geometry().r();
    let (e_prime, _) = functional.energy(&params)?;
    let bundle = functional.bundle(&params)?;
    let a1x = nonlinearization::separation_constant_xi(&params)?;
    let a1y = nonlinearization::separation_constant_eta(&params)?;
    let exact_p = p_from_electronic_energy(e_prime, r);
    Ok(SolveResult {
        r,
        state: params.state,
        e_total: e_prime + 2.0 / r,
        e_prime,
        p_opt: params.p,
        params,
        a1x,
        a1y,
        diagnostics: Diagnostics {
            iterations,
            evaluations,
            restarts,
            quadrature_error: bundle.max_relative_error(),
            frozen,
            converged,
            p_consistency: (params.p - exact_p).abs() / params.p,
            simplex_diameter: 0.0,
            p_argmin: params.p,
            self_consistent: false,
            consistency_cost: 0.0,
        },
    })
}

/// Build a [`SolveResult`] for fixed parameters without optimizing.
pub fn evaluate(params: TrialParams, config: &SolverConfig) -> Result<SolveResult> {
    params.state.ensure_supported()?;
    let functional = EnergyFunctional::for_params(&params, config.quad_order)?;
    finish(&functional, params, 1, 0, 0, Vec::new(), false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveMode {
    /// Grid points in order; each point is solved from the previous converged
    /// parameters and from the preset seed, keeping the lower energy.
    WarmStart,
    /// Grid points in parallel, each seeded from the preset table.
    Parallel,
}

/// Solve along a sorted grid of `R`; failures are reported per point.
pub fn curve(grid: &[f64], state: StateLabel, config: &SolverConfig, mode: CurveMode) -> Result<Vec<Result<SolveResult>>> {
    if grid.is_empty() {
        return Err(Error::Usage("empty R grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Usage("R grid must be sorted ascending".into()));
    }
    state.ensure_supported()?;
    let solve_one = |r: f64, init: Option<TrialParams>| -> Result<SolveResult> {
        let g = Geometry::new(r)?;
        minimize(g, state, init, config)
    };
    Ok(match mode {
        CurveMode::Parallel => grid.par_iter().map(|&r| solve_one(r, None)).collect(),
        CurveMode::WarmStart => {
            let mut out = Vec::with_capacity(grid.len());
            let mut prev: Option<TrialParams> = None;
            for &r in grid {
                let res = match prev {
                    Some(p) => lower_energy(solve_one(r, Some(p)), solve_one(r, None)),
                    None => solve_one(r, None),
                };
                prev = match &res {
                    Ok(s) => Some(s.params),
                    Err(Error::IterationLimit { best, .. }) => Some(best.params),
                    Err(_) => prev,
                };
                out.push(res);
            }
            out
        }
    })
}

/// Prefer a converged result, then the lower energy.
pub fn lower_energy(a: Result<SolveResult>, b: Result<SolveResult>) -> Result<SolveResult> {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok(if y.e_total < x.e_total { y } else { x }),
        (Ok(x), Err(_)) | (Err(_), Ok(x)) => Ok(x),
        (Err(Error::IterationLimit { best: x, evaluations }), Err(Error::IterationLimit { best: y, .. })) => Err(Error::IterationLimit {
            best: if y.e_total < x.e_total { y } else { x },
            evaluations,
        }),
        (Err(e), _) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table3_req() -> TrialParams {
        TrialParams {
            alpha: 1.48407,
            gamma: 1.0299,
            a1: 0.9164,
            a2: 0.05384,
            b2: 0.06,
            b3: 0.00011,
            p: 1.483403,
            state: StateLabel::SIGMA_G_1S,
            r: 1.997193,
        }
    }

    #[test]
    fn published_parameters_give_published_energy() {
        let t = table3_req();
        let (e, norm) = energy_expectation(&t, Geometry::new(t.r).unwrap()).unwrap();
        assert!(norm > 0.0);
        let e_total = e + 2.0 / t.r;
        assert!((e_total + 1.20526923821).abs() < 1e-6, "{e_total}");
    }

    #[test]
    fn bundle_is_accurate() {
        let t = table3_req();
        let f = EnergyFunctional::for_params(&t, 200).unwrap();
        let b = f.bundle(&t).unwrap();
        assert!(b.max_relative_error() < 1e-11, "{}", b.max_relative_error());
        let m = f.moments(&t).unwrap();
        assert_eq!(m, b.values());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut t = table3_req();
        t.b2 = -3.0;
        assert!(energy_expectation(&t, Geometry::new(2.0).unwrap()).is_err());
    }

    #[test]
    fn curve_argument_checks() {
        let c = SolverConfig::default();
        assert!(curve(&[], StateLabel::SIGMA_G_1S, &c, CurveMode::WarmStart).is_err());
        assert!(curve(&[2.0, 1.0], StateLabel::SIGMA_G_1S, &c, CurveMode::WarmStart).is_err());
        let excited = StateLabel::new(0, 1, 0, crate::prolate::Parity::Gerade);
        assert!(matches!(
            minimize(Geometry::new(2.0).unwrap(), excited, None, &c),
            Err(Error::UnsupportedState(_))
        ));
    }
}
