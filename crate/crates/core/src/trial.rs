//! The uniform trial functions `X₀(ξ)`, `Y₀^{(±)}(η)` and the classic
//! Hund-Mulliken / Guillemin-Zener reference forms.
//!
//! ```text
//! X₀(ξ) = (γ+ξ)^{R/p-1} · exp(-ξ(α+pξ)/(γ+ξ))
//! Y₀(η) = D(η)^{-1/4} · {cosh | sinh}(η·N(η)/D(η))
//! N(η)  = a₁ + p·a₂·η² + p·b₃·η⁴,   D(η) = 1 + b₂η² + b₃η⁴
//! ```
//!
//! Functions are unnormalized; normalization lives with the integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::prolate::{from_prolate, Geometry, Parity, ProlatePoint, StateLabel};

/// Names of the seven variational parameters, in [`TrialParams::to_vec`] order.
pub const PARAM_NAMES: [&str; 7] = ["alpha", "gamma", "a1", "a2", "b2", "b3", "p"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialParams {
    pub alpha: f64,
    pub gamma: f64,
    pub a1: f64,
    pub a2: f64,
    pub b2: f64,
    pub b3: f64,
    pub p: f64,
    pub state: StateLabel,
    /// Internuclear distance in Bohr.
    pub r: f64,
}

impl TrialParams {
    pub fn from_vec(values: &[f64], state: StateLabel, r: f64) -> Self {
        TrialParams {
            alpha: values[0],
            gamma: values[1],
            a1: values[2],
            a2: values[3],
            b2: values[4],
            b3: values[5],
            p: values[6],
            state,
            r,
        }
    }

    pub fn to_vec(&self) -> [f64; 7] {
        [
            self.alpha, self.gamma, self.a1, self.a2, self.b2, self.b3, self.p,
        ]
    }

    pub fn parity(&self) -> Parity {
        self.state.parity
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.r)
    }

    /// Smallest value of `1 + b₂u + b₃u²` over `u = η² ∈ [0, 1]`.
    pub fn min_denominator(&self) -> f64 {
        let f = |u: f64| 1.0 + self.b2 * u + self.b3 * u * u;
        let mut lo = f(0.0).min(f(1.0));
        if self.b3 != 0.0 {
            let u = -self.b2 / (2.0 * self.b3);
            if u > 0.0 && u < 1.0 {
                lo = lo.min(f(u));
            }
        }
        lo
    }

    pub fn validate(&self) -> Result<()> {
        let values = self.to_vec();
        if values.iter().any(|v| !v.is_finite()) || !self.r.is_finite() {
            return Err(Error::Domain("non-finite trial parameter".into()));
        }
        if !(self.p > 0.0) {
            return Err(Error::Domain(format!("p = {} must be positive", self.p)));
        }
        if !(self.r > 0.0) {
            return Err(Error::Domain(format!("R = {} must be positive", self.r)));
        }
        if !(self.gamma > -1.0) {
            return Err(Error::Domain(format!(
                "gamma = {} makes gamma + xi vanish on [1, inf)",
                self.gamma
            )));
        }
        if !(self.min_denominator() > 0.0) {
            return Err(Error::Domain(
                "1 + b2 eta^2 + b3 eta^4 vanishes on [-1, 1]".into(),
            ));
        }
        Ok(())
    }

    /// `log X₀` as a jet in ξ.
    pub fn log_x0_jet(&self, xi: f64) -> Jet {
        let x = Jet::variable(xi);
        let shifted = x + self.gamma;
        let power = (self.r / self.p - 1.0) * shifted.v.ln();
        let inv = 1.0 / shifted.v;
        let log_part = Jet {
            v: power,
            d1: (self.r / self.p - 1.0) * inv,
            d2: -(self.r / self.p - 1.0) * inv * inv,
        };
        // ξ(α+pξ)/(γ+ξ)
        let exponent = x * (x * self.p + self.alpha) / shifted;
        log_part - exponent
    }

    pub fn eval_x0(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(self.log_x0_jet(xi).v.exp())
    }

    /// `x₀ = -d(log X₀)/dξ`.
    pub fn log_derivative_x0(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(-self.log_x0_jet(xi).d1)
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        if !(self.gamma + xi > 0.0) {
            return Err(Error::Domain(format!(
                "gamma + xi = {} is not positive",
                self.gamma + xi
            )));
        }
        Ok(())
    }

    fn eta_pieces(&self, eta: f64) -> (Jet, Jet) {
        let e = Jet::variable(eta);
        let e2 = e * e;
        let e4 = e2 * e2;
        let den = e2 * self.b2 + e4 * self.b3 + 1.0;
        let num = e2 * (self.p * self.a2) + e4 * (self.p * self.b3) + self.a1;
        (num / den, den)
    }

    /// `Y₀` itself as a jet in η.
    pub fn y0_jet(&self, eta: f64) -> Jet {
        let (ratio, den) = self.eta_pieces(eta);
        let z = Jet::variable(eta) * ratio;
        let prefactor = den.powf(-0.25);
        match self.parity() {
            Parity::Gerade => prefactor * z.cosh(),
            Parity::Ungerade => prefactor * z.sinh(),
        }
    }

    /// `F(η)` with `Y₀ = η·F` for ungerade and `Y₀ = F` for gerade; `F` never
    /// vanishes on `[-1, 1]`.
    pub fn y0_reduced_jet(&self, eta: f64) -> Jet {
        match self.parity() {
            Parity::Gerade => self.y0_jet(eta),
            Parity::Ungerade => {
                let (ratio, den) = self.eta_pieces(eta);
                let z = Jet::variable(eta) * ratio;
                den.powf(-0.25) * ratio * z.sinhc()
            }
        }
    }

    pub fn eval_y0(&self, eta: f64) -> Result<f64> {
        if !(self.min_denominator() > 0.0) {
            return Err(Error::Domain("eta denominator is not positive".into()));
        }
        Ok(self.y0_jet(eta).v)
    }

    /// `y₀ = -d(log Y₀)/dη`; the ungerade function has a simple pole at η = 0.
    pub fn log_derivative_y0(&self, eta: f64) -> Result<f64> {
        let j = self.y0_jet(eta);
        if j.v == 0.0 {
            return Err(Error::Pole { at: eta });
        }
        Ok(-j.d1 / j.v)
    }

    /// Unnormalized product `X₀(ξ)·Y₀(η)`.
    pub fn eval(&self, point: ProlatePoint) -> Result<f64> {
        Ok(self.eval_x0(point.xi)? * self.eval_y0(point.eta)?)
    }
}

/// Polynomial-dressed form for states with nodes or `Λ > 0`. Only evaluation
/// is offered; the solvers construct degree-0 polynomials with `Λ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralTrial {
    pub params: TrialParams,
    pub lambda: u32,
    /// `P_n(ξ)` coefficients, lowest degree first.
    pub xi_polynomial: Vec<f64>,
    /// `Q_m(η²)` coefficients in powers of `η²`, lowest degree first.
    pub eta_polynomial: Vec<f64>,
}

impl GeneralTrial {
    pub fn degree_zero(params: TrialParams) -> Self {
        GeneralTrial {
            params,
            lambda: 0,
            xi_polynomial: vec![1.0],
            eta_polynomial: vec![1.0],
        }
    }

    /// Value without the `e^{±iΛφ}` factor.
    pub fn eval(&self, point: ProlatePoint) -> f64 {
        let TrialParams {
            alpha,
            gamma,
            a1,
            a2,
            b2,
            b3,
            p,
            r,
            ..
        } = self.params;
        let l = f64::from(self.lambda);
        let (xi, eta) = (point.xi, point.eta);
        let poly = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
        let x_part = (xi * xi - 1.0).powf(0.5 * l) * poly(&self.xi_polynomial, xi)
            / (gamma + xi).powf(1.0 + l - r / p)
            * (-xi * (alpha + p * xi) / (gamma + xi)).exp();
        let e2 = eta * eta;
        let den = 1.0 + b2 * e2 + b3 * e2 * e2;
        let z = eta * (a1 + p * a2 * e2 + p * b3 * e2 * e2) / den;
        let angular = match self.params.state.parity {
            Parity::Gerade => z.cosh(),
            Parity::Ungerade => z.sinh(),
        };
        let y_part = (1.0 - e2).powf(0.5 * l) * poly(&self.eta_polynomial, e2)
            / den.powf(0.25 * (1.0 + l))
            * angular;
        x_part * y_part
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ReferenceKind {
    /// `e^{-2α₂r₁} ± e^{-2α₂r₂}`.
    HundMulliken { alpha2: f64 },
    /// `e^{-2α₃r₁-2α₄r₂} ± e^{-2α₃r₂-2α₄r₁}`.
    GuilleminZener { alpha3: f64, alpha4: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceForm {
    pub kind: ReferenceKind,
    pub parity: Parity,
}

impl ReferenceForm {
    pub fn hund_mulliken(alpha2: f64, parity: Parity) -> Self {
        ReferenceForm {
            kind: ReferenceKind::HundMulliken { alpha2 },
            parity,
        }
    }

    pub fn guillemin_zener(alpha3: f64, alpha4: f64, parity: Parity) -> Self {
        ReferenceForm {
            kind: ReferenceKind::GuilleminZener { alpha3, alpha4 },
            parity,
        }
    }

    /// `(α₃, α₄)`; Hund-Mulliken is the `α₄ = 0` case.
    fn exponents(&self) -> (f64, f64) {
        match self.kind {
            ReferenceKind::HundMulliken { alpha2 } => (alpha2, 0.0),
            ReferenceKind::GuilleminZener { alpha3, alpha4 } => (alpha3, alpha4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.exponents();
        let ok = match self.kind {
            ReferenceKind::HundMulliken { .. } => a > 0.0,
            ReferenceKind::GuilleminZener { .. } => a > 0.0 && b > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain("reference exponents must be positive".into()))
        }
    }

    /// ξ-factor `2·exp(-(α₃+α₄)Rξ)`.
    pub fn xi_factor(&self, r: f64, xi: f64) -> f64 {
        let (a, b) = self.exponents();
        2.0 * (-(a + b) * r * xi).exp()
    }

    /// η-factor `cosh` / `sinh` of `(α₃-α₄)Rη` (`α₂Rη` for Hund-Mulliken).
    pub fn eta_factor(&self, r: f64, eta: f64) -> f64 {
        let (a, b) = self.exponents();
        let arg = (a - b) * r * eta;
        match self.parity {
            Parity::Gerade => arg.cosh(),
            Parity::Ungerade => arg.sinh(),
        }
    }

    /// The same function written through the distances `r₁`, `r₂`.
    pub fn eval_distances(&self, r1: f64, r2: f64) -> f64 {
        let (a, b) = self.exponents();
        let s = self.parity.sign();
        (-2.0 * a * r1 - 2.0 * b * r2).exp() + s * (-2.0 * a * r2 - 2.0 * b * r1).exp()
    }
}

/// Reference function in its prolate (separated) form.
pub fn eval_reference(form: ReferenceForm, geometry: Geometry, point: ProlatePoint) -> Result<f64> {
    form.validate()?;
    let r = geometry.r();
    Ok(form.xi_factor(r, point.xi) * form.eta_factor(r, point.eta))
}

/// Reference function through the distances; used to check the prolate form.
pub fn eval_reference_distances(form: ReferenceForm, geometry: Geometry, point: ProlatePoint) -> Result<f64> {
    form.validate()?;
    let (r1, r2) = from_prolate(point, geometry.r());
    Ok(form.eval_distances(r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn table3_req() -> TrialParams {
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

    fn table4_r6() -> TrialParams {
        TrialParams {
            alpha: 3.24715,
            gamma: 0.95706,
            a1: 2.84566,
            a2: 0.22098,
            b2: 0.23611,
            b3: -0.0027,
            p: 3.43971,
            state: StateLabel::SIGMA_U_2P,
            r: 6.0,
        }
    }

    #[test]
    fn x0_at_one_and_at_two() {
        let t = table3_req();
        let at_one = ((t.gamma + 1.0).powf(t.r / t.p - 1.0)) * (-(t.alpha + t.p) / (t.gamma + 1.0)).exp();
        assert!((t.eval_x0(1.0).unwrap() - at_one).abs() < 1e-15);
        // direct arithmetic at ξ = 2
        let direct = (3.0299f64).powf(1.997193 / 1.483403 - 1.0)
            * (-2.0 * (1.48407 + 1.483403 * 2.0) / 3.0299f64).exp();
        assert!((t.eval_x0(2.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn x0_tail_matches_leading_wkb_terms() {
        let t = table3_req();
        let k = t.r / t.p - 1.0;
        let rem: Vec<f64> = [1e2, 3e2, 1e3]
            .iter()
            .map(|&x| t.log_x0_jet(x).v + t.p * x - k * x.ln())
            .collect();
        assert!(rem.iter().all(|r| r.is_finite()));
        assert!((rem[2] - rem[1]).abs() < 0.1 && (rem[1] - rem[0]).abs() < 0.1);
        assert!((t.log_derivative_x0(1e6).unwrap() - t.p).abs() < 1e-5);
    }

    #[test]
    fn y0_examples() {
        let mut t = table3_req();
        assert_eq!(t.eval_y0(0.0).unwrap(), 1.0);
        assert_eq!(t.log_derivative_y0(0.0).unwrap(), 0.0);
        t.state = StateLabel::SIGMA_U_2P;
        assert_eq!(t.eval_y0(0.0).unwrap(), 0.0);
        assert!(matches!(t.log_derivative_y0(0.0), Err(Error::Pole { .. })));

        let u = table4_r6();
        let eta: f64 = 0.5;
        let (e2, e4) = (eta * eta, eta.powi(4));
        let den = 1.0 + 0.23611 * e2 - 0.0027 * e4;
        let num = 2.84566 + 3.43971 * 0.22098 * e2 + 3.43971 * (-0.0027) * e4;
        let direct = den.powf(-0.25) * (eta * num / den).sinh();
        assert!((u.eval_y0(eta).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn parity_is_exact() {
        let g = table3_req();
        let u = table4_r6();
        for eta in [0.013, 0.37, 0.81, 1.0] {
            assert_eq!(g.eval_y0(eta).unwrap(), g.eval_y0(-eta).unwrap());
            assert_eq!(u.eval_y0(eta).unwrap(), -u.eval_y0(-eta).unwrap());
        }
    }

    #[test]
    fn log_derivatives_match_finite_differences() {
        let h = 1e-6;
        let t = table3_req();
        let xi = 1.7;
        let fd = -(t.eval_x0(xi + h).unwrap().ln() - t.eval_x0(xi - h).unwrap().ln()) / (2.0 * h);
        let an = t.log_derivative_x0(xi).unwrap();
        assert!(((an - fd) / an).abs() < 1e-8, "{an} {fd}");

        for s in [table3_req(), table4_r6()] {
            let eta = 0.3;
            let fd = -(s.eval_y0(eta + h).unwrap().abs().ln() - s.eval_y0(eta - h).unwrap().abs().ln())
                / (2.0 * h);
            let an = s.log_derivative_y0(eta).unwrap();
            assert!(((an - fd) / an).abs() < 1e-8, "{an} {fd}");
        }
    }

    #[test]
    fn reduced_jet_reconstructs_ungerade() {
        let u = table4_r6();
        for eta in [1e-9, 0.01, 0.3, 0.99] {
            let f = u.y0_reduced_jet(eta);
            let y = u.y0_jet(eta);
            assert!((eta * f.v - y.v).abs() < 1e-14 * y.v.abs().max(1e-300));
            assert!((f.v + eta * f.d1 - y.d1).abs() < 1e-12 * y.d1.abs());
        }
        assert!(u.y0_reduced_jet(0.0).v > 0.0);
    }

    #[test]
    fn validation() {
        let mut t = table3_req();
        assert!(t.validate().is_ok());
        t.gamma = -1.5;
        assert!(t.validate().is_err());
        assert!(matches!(t.eval_x0(0.4), Err(Error::Domain(_))));
        let mut t = table3_req();
        t.b2 = -2.0;
        assert!(t.validate().is_err());
        assert!(t.eval_y0(0.5).is_err());
    }

    #[test]
    fn reference_forms() {
        let g = Geometry::new(2.0).unwrap();
        let hm = ReferenceForm::hund_mulliken(0.7, Parity::Gerade);
        let v = eval_reference(hm, g, ProlatePoint::new(1.3, 0.0, 0.0).unwrap()).unwrap();
        assert!((v - 2.0 * (-0.7f64 * 2.0 * 1.3).exp()).abs() < 1e-15);

        let gz = ReferenceForm::guillemin_zener(0.7, 0.7, Parity::Gerade);
        let pt = ProlatePoint::new(1.9, 0.6, 0.0).unwrap();
        let gzv = eval_reference(gz, g, pt).unwrap();
        // coefficient (α₃-α₄) = 0 leaves cosh(0) = 1
        assert!((gzv - 2.0 * (-1.4f64 * 2.0 * 1.9).exp()).abs() < 1e-15);
        let gzu = ReferenceForm::guillemin_zener(0.7, 0.7, Parity::Ungerade);
        assert_eq!(eval_reference(gzu, g, pt).unwrap(), 0.0);

        assert!(eval_reference(ReferenceForm::hund_mulliken(-1.0, Parity::Gerade), g, pt).is_err());
    }

    #[test]
    fn general_form_reduces_to_product() {
        let t = table3_req();
        let gen = GeneralTrial::degree_zero(t);
        let pt = ProlatePoint::new(1.4, -0.35, 0.0).unwrap();
        assert!((gen.eval(pt) - t.eval(pt).unwrap()).abs() < 1e-15);
    }
}
