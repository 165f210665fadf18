//! Axial dipole matrix element and oscillator strength of the
//! 1sσg → 2pσu transition.
//!
//! Both states are σ, so the transverse components vanish after the φ
//! integral and only `z = (R/2)ξη` (measured from the midpoint) survives.
//! Every integral factorizes into products of one-dimensional moments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{solve_exact, Separable};
use crate::prolate::{Parity, StateLabel};
use crate::quadrature::{gauss_rule, semi_infinite_rule, CompensatedSum};
use crate::variational::{minimize, SolveResult, SolverConfig, DEFAULT_QUAD_ORDER};
use crate::Geometry;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionResult {
    /// Bohr.
    pub r: f64,
    /// Total energies (Ry).
    pub e_g: f64,
    pub e_u: f64,
    /// `E_u - E_g` (Ry).
    pub delta_e: f64,
    /// Bohr.
    pub q_z: f64,
    pub f01: f64,
}

/// One-dimensional moments `∫ x^k F_g F_u` for `k = 0..=3`.
fn cross_moments(mut f: impl FnMut(f64) -> Result<(f64, f64)>, nodes: &[f64], weights: &[f64]) -> Result<[f64; 4]> {
    let mut sums = [CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new()];
    for (&x, &w) in nodes.iter().zip(weights) {
        let (a, b) = f(x)?;
        let mut v = w * a * b;
        for s in &mut sums {
            s.add(v);
            v *= x;
        }
    }
    Ok(sums.map(|s| s.value()))
}

/// Matrix elements between two separable functions at the same `R`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossIntegrals {
    xi: [f64; 4],
    eta: [f64; 4],
    r: f64,
}

impl CrossIntegrals {
    pub fn new<G: Separable + ?Sized, U: Separable + ?Sized>(g: &G, u: &U, r: f64, xi_scale: f64, order: usize) -> Result<Self> {
        let xr = semi_infinite_rule(order, xi_scale)?;
        let er = gauss_rule(order)?;
        let xi = cross_moments(|x| Ok((g.x_factor(x)?, u.x_factor(x)?)), xr.nodes(), xr.weights())?;
        let eta = cross_moments(|e| Ok((g.y_factor(e)?, u.y_factor(e)?)), er.nodes(), er.weights())?;
        Ok(CrossIntegrals { xi, eta, r })
    }

    fn volume(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.r.powi(3) / 8.0
    }

    /// `⟨g|u⟩` including the volume element.
    pub fn overlap(&self) -> f64 {
        self.volume() * (self.xi[2] * self.eta[0] - self.xi[0] * self.eta[2])
    }

    /// `⟨g|z|u⟩` with `z = (R/2)ξη`.
    pub fn z(&self) -> f64 {
        self.volume() * 0.5 * self.r * (self.xi[3] * self.eta[1] - self.xi[1] * self.eta[3])
    }
}

/// Full norm `⟨F|F⟩` of a separable function.
pub fn norm<W: Separable + ?Sized>(w: &W, r: f64, xi_scale: f64, order: usize) -> Result<f64> {
    let n = CrossIntegrals::new(w, w, r, xi_scale, order)?.overlap();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Evaluation(format!("non-positive norm {n}")));
    }
    Ok(n)
}

/// `⟨Ψ_g|z - c|Ψ_u⟩` for normalized states, with the origin moved to `z = c`.
pub fn dipole_separable<G: Separable + ?Sized, U: Separable + ?Sized>(g: &G, u: &U, r: f64, xi_scale: f64, origin: f64, order: usize) -> Result<f64> {
    let cross = CrossIntegrals::new(g, u, r, xi_scale, order)?;
    let ng = norm(g, r, xi_scale, order)?;
    let nu = norm(u, r, xi_scale, order)?;
    Ok((cross.z() - origin * cross.overlap()) / (ng * nu).sqrt())
}

fn check_pair(g: &SolveResult, u: &SolveResult) -> Result<()> {
    if (g.r - u.r).abs() > 1e-12 * g.r.max(1.0) {
        return Err(Error::Usage(format!("results at different R: {} and {}", g.r, u.r)));
    }
    if g.state.parity != Parity::Gerade || u.state.parity != Parity::Ungerade {
        return Err(Error::Usage(format!("expected a gerade and an ungerade state, got {} and {}", g.state, u.state)));
    }
    Ok(())
}

fn pair_scale(g: &SolveResult, u: &SolveResult) -> f64 {
    1.0 / (0.5 * (g.p_opt + u.p_opt))
}

/// `Q_z = ⟨Ψ_g|z|Ψ_u⟩` (Bohr) with the origin at the midpoint.
pub fn dipole_q(g: &SolveResult, u: &SolveResult) -> Result<f64> {
    dipole_q_about(g, u, 0.0)
}

/// Same as [`dipole_q`] with the origin shifted to `z = origin`.
pub fn dipole_q_about(g: &SolveResult, u: &SolveResult, origin: f64) -> Result<f64> {
    check_pair(g, u)?;
    dipole_separable(&g.params, &u.params, g.r, pair_scale(g, u), origin, DEFAULT_QUAD_ORDER)
}

/// `f₀₁ = (2/3)·ΔE·Q²` with `ΔE` in Ry, the convention that matches the
/// published oscillator-strength table.
pub fn strength(delta_e: f64, q: f64) -> f64 {
    2.0 / 3.0 * delta_e * q * q
}

pub fn oscillator_strength(g: &SolveResult, u: &SolveResult) -> Result<TransitionResult> {
    let q_z = dipole_q(g, u)?;
    let delta_e = u.e_total - g.e_total;
    Ok(TransitionResult {
        r: g.r,
        e_g: g.e_total,
        e_u: u.e_total,
        delta_e,
        q_z,
        f01: strength(delta_e, q_z),
    })
}

/// Where the g/u energy gap comes from.
///
/// Past `R ≈ 25` the gap falls below the ~1e-10 Ry resolution of the
/// variational energies, so its sign and size are only meaningful when taken
/// from the shooting solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapSource {
    #[default]
    Variational,
    Oracle,
}

/// Solve both states at `R` and return the transition data.
pub fn transition_at(r: f64, config: &SolverConfig) -> Result<TransitionResult> {
    transition_with(r, config, GapSource::Variational)
}

pub fn transition_with(r: f64, config: &SolverConfig, gap: GapSource) -> Result<TransitionResult> {
    let geometry = Geometry::new(r)?;
    let g = minimize(geometry, StateLabel::SIGMA_G_1S, None, config)?;
    let u = minimize(geometry, StateLabel::SIGMA_U_2P, None, config)?;
    let mut t = oscillator_strength(&g, &u)?;
    if gap == GapSource::Oracle {
        let og = solve_exact(geometry, g.state, Some(g.p_opt))?;
        let ou = solve_exact(geometry, u.state, Some(u.p_opt))?;
        t.e_g = og.e_total;
        t.e_u = ou.e_total;
        t.delta_e = ou.e_total - og.e_total;
        t.f01 = strength(t.delta_e, t.q_z);
    }
    Ok(t)
}

/// [`transition_with`] over a grid, in parallel, returned in grid order.
pub fn transition_curve(grid: &[f64], config: &SolverConfig, gap: GapSource) -> Vec<Result<TransitionResult>> {
    grid.par_iter().map(|&r| transition_with(r, config, gap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::TrialParams;

    fn pair(r: f64) -> (TrialParams, TrialParams) {
        let g = crate::presets::preset_seed(StateLabel::SIGMA_G_1S, r).unwrap();
        let u = crate::presets::preset_seed(StateLabel::SIGMA_U_2P, r).unwrap();
        (g, u)
    }

    #[test]
    fn opposite_parity_overlap_vanishes() {
        let (g, u) = pair(2.0);
        let c = CrossIntegrals::new(&g, &u, 2.0, 1.0 / g.p, 120).unwrap();
        let scale = norm(&g, 2.0, 1.0 / g.p, 120).unwrap().sqrt() * norm(&u, 2.0, 1.0 / u.p, 120).unwrap().sqrt();
        assert!(c.overlap().abs() < 1e-14 * scale);
        assert!(c.z().abs() > 0.1 * scale);
    }

    #[test]
    fn origin_shift_leaves_dipole_unchanged() {
        let (g, u) = pair(2.0);
        let q0 = dipole_separable(&g, &u, 2.0, 1.0 / g.p, 0.0, 120).unwrap();
        let q1 = dipole_separable(&g, &u, 2.0, 1.0 / g.p, 1.0, 120).unwrap();
        assert!(((q1 - q0) / q0).abs() < 1e-12);
    }

    #[test]
    fn strength_convention() {
        assert!((strength(3.0, 2.0) - 8.0).abs() < 1e-15);
    }
}
