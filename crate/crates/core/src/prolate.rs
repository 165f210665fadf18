//! Prolate spheroidal (elliptic) coordinates, state labels and the
//! asymptotic phase expansions of the separated equations.
//!
//! Energies are in Rydbergs and lengths in Bohr throughout the crate.
//! A phase `φ` is always stored with the convention `X = exp(-φ)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetry under exchange of the two nuclei (`η → -η`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Gerade,
    Ungerade,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Gerade => 1.0,
            Parity::Ungerade => -1.0,
        }
    }
}

/// Quantum numbers `(n, m, Λ, parity)`: `n` nodes in ξ, `m` nodes in η², magnetic
/// quantum number `Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateLabel {
    pub n: u32,
    pub m: u32,
    pub lambda: u32,
    pub parity: Parity,
}

impl StateLabel {
    pub const SIGMA_G_1S: StateLabel = StateLabel {
        n: 0,
        m: 0,
        lambda: 0,
        parity: Parity::Gerade,
    };
    pub const SIGMA_U_2P: StateLabel = StateLabel {
        n: 0,
        m: 0,
        lambda: 0,
        parity: Parity::Ungerade,
    };

    pub fn new(n: u32, m: u32, lambda: u32, parity: Parity) -> Self {
        StateLabel {
            n,
            m,
            lambda,
            parity,
        }
    }

    pub fn is_supported(&self) -> bool {
        *self == Self::SIGMA_G_1S || *self == Self::SIGMA_U_2P
    }

    /// Solvers call this before doing any work.
    pub fn ensure_supported(&self) -> Result<()> {
        if self.is_supported() {
            Ok(())
        } else {
            Err(Error::UnsupportedState(self.to_string()))
        }
    }

    /// ASCII spectroscopic name for the two solvable states.
    pub fn ascii_name(&self) -> Option<&'static str> {
        if *self == Self::SIGMA_G_1S {
            Some("1ssg")
        } else if *self == Self::SIGMA_U_2P {
            Some("2psu")
        } else {
            None
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ascii_name() {
            Some(name) => f.write_str(name),
            None => write!(
                f,
                "({},{},{},{})",
                self.n,
                self.m,
                self.lambda,
                if self.parity == Parity::Gerade { '+' } else { '-' }
            ),
        }
    }
}

impl FromStr for StateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1ssg" => Ok(Self::SIGMA_G_1S),
            "2psu" => Ok(Self::SIGMA_U_2P),
            other => Err(Error::Usage(format!(
                "unknown state label '{other}' (expected 1ssg or 2psu)"
            ))),
        }
    }
}

/// Point in prolate spheroidal coordinates; ξ ∈ [1,∞), η ∈ [-1,1], φ ∈ [0,2π).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProlatePoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

impl ProlatePoint {
    pub fn new(xi: f64, eta: f64, phi: f64) -> Result<Self> {
        if !(xi >= 1.0) || !xi.is_finite() {
            return Err(Error::Domain(format!("xi = {xi} must be finite and >= 1")));
        }
        if !(eta.abs() <= 1.0) {
            return Err(Error::Domain(format!("eta = {eta} must lie in [-1, 1]")));
        }
        Ok(ProlatePoint { xi, eta, phi })
    }

    /// `ξ² - η²`, proportional to the volume element.
    pub fn jacobian_factor(&self) -> f64 {
        self.xi * self.xi - self.eta * self.eta
    }
}

/// Two unit charges at distance `R` (Bohr).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    r: f64,
}

impl Geometry {
    /// Upper end of the validated internuclear range.
    pub const VALIDATED_MAX_R: f64 = 50.0;

    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "internuclear distance R = {r} must be positive and finite"
            )));
        }
        Ok(Geometry { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn charge(&self) -> f64 {
        1.0
    }

    pub fn is_validated_range(&self) -> bool {
        self.r <= Self::VALIDATED_MAX_R
    }

    /// Nuclear repulsion `2/R` in Ry.
    pub fn repulsion(&self) -> f64 {
        2.0 / self.r
    }
}

/// Momentum-like parameter `p` and separation constant `A` at fixed `R`.
///
/// `p² = -E'R²/4` with `E' = E_t - 2/R` (Ry).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub p: f64,
    pub a: f64,
}

impl SpectralPair {
    pub fn new(p: f64, a: f64) -> Self {
        SpectralPair { p, a }
    }

    pub fn from_electronic_energy(e_prime: f64, geometry: Geometry, a: f64) -> Result<Self> {
        if !(e_prime < 0.0) {
            return Err(Error::Domain(format!(
                "E' = {e_prime} Ry is not a bound-state energy"
            )));
        }
        let r = geometry.r();
        Ok(SpectralPair {
            p: 0.5 * r * (-e_prime).sqrt(),
            a,
        })
    }

    pub fn electronic_energy(&self, geometry: Geometry) -> f64 {
        let r = geometry.r();
        -4.0 * self.p * self.p / (r * r)
    }

    pub fn total_energy(&self, geometry: Geometry) -> f64 {
        self.electronic_energy(geometry) + geometry.repulsion()
    }
}

/// `p` that corresponds to a given electronic energy, `(R/2)√(-E')`.
pub fn p_from_electronic_energy(e_prime: f64, r: f64) -> f64 {
    0.5 * r * (-e_prime).sqrt()
}

/// Which asymptotic regime a [`PhaseSeries`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseRegime {
    /// Coefficients of `{ξ, log ξ, 1/ξ}`.
    LargeXi,
    /// Coefficients of `{ξ², ξ³, ξ⁴}`.
    SmallXi,
    /// Coefficients of `{η, log η, 1/η}`.
    LargeEta,
    /// Coefficients of `{η², η⁴}`.
    SmallEta,
}

/// Truncated asymptotic expansion of a phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSeries {
    pub regime: PhaseRegime,
    pub coefficients: Vec<f64>,
}

impl PhaseSeries {
    pub fn linear(&self) -> Option<f64> {
        match self.regime {
            PhaseRegime::LargeXi | PhaseRegime::LargeEta => Some(self.coefficients[0]),
            _ => None,
        }
    }

    pub fn log_coefficient(&self) -> Option<f64> {
        match self.regime {
            PhaseRegime::LargeXi | PhaseRegime::LargeEta => Some(self.coefficients[1]),
            _ => None,
        }
    }

    pub fn inverse_coefficient(&self) -> Option<f64> {
        match self.regime {
            PhaseRegime::LargeXi | PhaseRegime::LargeEta => Some(self.coefficients[2]),
            _ => None,
        }
    }

    /// Coefficient of the quartic term of a small-distance expansion.
    pub fn quartic(&self) -> Option<f64> {
        match self.regime {
            PhaseRegime::SmallXi => Some(self.coefficients[2]),
            PhaseRegime::SmallEta => Some(self.coefficients[1]),
            _ => None,
        }
    }

    /// Evaluate the truncated phase at `x`.
    pub fn value(&self, x: f64) -> f64 {
        let c = &self.coefficients;
        match self.regime {
            PhaseRegime::LargeXi | PhaseRegime::LargeEta => c[0] * x + c[1] * x.ln() + c[2] / x,
            PhaseRegime::SmallXi => x * x * (c[0] + x * (c[1] + x * c[2])),
            PhaseRegime::SmallEta => {
                let x2 = x * x;
                x2 * (c[0] + x2 * c[1])
            }
        }
    }

    /// First derivative of the truncated phase.
    pub fn derivative(&self, x: f64) -> f64 {
        let c = &self.coefficients;
        match self.regime {
            PhaseRegime::LargeXi | PhaseRegime::LargeEta => c[0] + c[1] / x - c[2] / (x * x),
            PhaseRegime::SmallXi => x * (2.0 * c[0] + x * (3.0 * c[1] + 4.0 * x * c[2])),
            PhaseRegime::SmallEta => x * (2.0 * c[0] + 4.0 * x * x * c[1]),
        }
    }
}

/// Elliptic coordinates of a point at distances `r1`, `r2` from the two centers.
pub fn to_prolate(r1: f64, r2: f64, r: f64) -> Result<ProlatePoint> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("R = {r} must be positive")));
    }
    if !(r1 >= 0.0 && r2 >= 0.0) {
        return Err(Error::Domain("distances must be non-negative".into()));
    }
    // Relative slack for the triangle test; points on the axis sit exactly on it.
    let slack = 1e-14 * (r1 + r2 + r);
    if (r1 - r2).abs() > r + slack || r > r1 + r2 + slack {
        return Err(Error::Domain(format!(
            "triangle inequality violated for r1 = {r1}, r2 = {r2}, R = {r}"
        )));
    }
    let xi = ((r1 + r2) / r).max(1.0);
    let eta = ((r2 - r1) / r).clamp(-1.0, 1.0);
    Ok(ProlatePoint { xi, eta, phi: 0.0 })
}

/// Distances `(r1, r2)` to the two centers.
pub fn from_prolate(point: ProlatePoint, r: f64) -> (f64, f64) {
    let half = 0.5 * r;
    (half * (point.xi - point.eta), half * (point.xi + point.eta))
}

fn require_positive_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::SingularParameter(format!(
            "p = {p}; the large-distance expansion needs p > 0"
        )))
    }
}

/// Large-ξ (WKB) expansion of the ξ-phase.
pub fn wkb_tail_xi(pair: SpectralPair, r: f64, lambda: u32) -> Result<PhaseSeries> {
    let SpectralPair { p, a } = pair;
    require_positive_p(p)?;
    let l = f64::from(lambda);
    let k = r / p - l - 1.0;
    Ok(PhaseSeries {
        regime: PhaseRegime::LargeXi,
        coefficients: vec![p, -k, 0.5 * ((a + k * (r / p + l)) / p - p)],
    })
}

/// Small-ξ Taylor expansion of the ξ-phase (interpolation anchor).
pub fn taylor_phase_xi(pair: SpectralPair, r: f64, lambda: u32) -> PhaseSeries {
    let SpectralPair { p, a } = pair;
    PhaseSeries {
        regime: PhaseRegime::SmallXi,
        coefficients: vec![-0.5 * a, -r / 3.0, quartic_coefficient(p, a, lambda)],
    }
}

/// Large-η expansion of the η-phase, continued beyond `|η| = 1`.
pub fn wkb_tail_eta(pair: SpectralPair, lambda: u32) -> Result<PhaseSeries> {
    let SpectralPair { p, a } = pair;
    require_positive_p(p)?;
    let l = f64::from(lambda);
    Ok(PhaseSeries {
        regime: PhaseRegime::LargeEta,
        coefficients: vec![-p, l + 1.0, -0.5 * ((a - l * (l + 1.0)) / p - p)],
    })
}

/// Small-η Taylor expansion of the η-phase.
pub fn taylor_phase_eta(pair: SpectralPair, lambda: u32) -> PhaseSeries {
    let SpectralPair { p, a } = pair;
    PhaseSeries {
        regime: PhaseRegime::SmallEta,
        coefficients: vec![-0.5 * a, quartic_coefficient(p, a, lambda)],
    }
}

fn quartic_coefficient(p: f64, a: f64, lambda: u32) -> f64 {
    let l = f64::from(lambda);
    (p * p + a * a - a * (2.0 * l + 3.0)) / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_prolate_examples() {
        let pt = to_prolate(1.0, 1.0, 2.0).unwrap();
        assert_eq!((pt.xi, pt.eta), (1.0, 0.0));
        let pt = to_prolate(1.0, 2.0, 2.0).unwrap();
        assert_eq!((pt.xi, pt.eta), (1.5, 0.5));
        let pt = to_prolate(0.0, 3.0, 3.0).unwrap();
        assert_eq!((pt.xi, pt.eta), (1.0, 1.0));
    }

    #[test]
    fn to_prolate_rejects_triangle_violation() {
        assert!(matches!(to_prolate(0.1, 0.1, 2.0), Err(Error::Domain(_))));
        assert!(matches!(to_prolate(0.0, 5.0, 2.0), Err(Error::Domain(_))));
        assert!(to_prolate(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn wkb_xi_examples() {
        let s = wkb_tail_xi(SpectralPair::new(1.0, 0.0), 1.0, 0).unwrap();
        assert_eq!(s.linear(), Some(1.0));
        assert_eq!(s.log_coefficient(), Some(0.0));
        assert_eq!(s.inverse_coefficient(), Some(-0.5));

        // R/p = Λ + 1 kills the logarithm for any A.
        let s = wkb_tail_xi(SpectralPair::new(0.7, 3.3), 1.4, 1).unwrap();
        assert!(s.log_coefficient().unwrap().abs() < 1e-15);

        assert!(matches!(
            wkb_tail_xi(SpectralPair::new(0.0, 1.0), 2.0, 0),
            Err(Error::SingularParameter(_))
        ));
    }

    #[test]
    fn taylor_xi_examples() {
        let s = taylor_phase_xi(SpectralPair::new(1.0, 0.0), 0.0, 0);
        assert_eq!(s.coefficients, vec![0.0, 0.0, 1.0 / 12.0]);
        let s = taylor_phase_xi(SpectralPair::new(1.0, 1.0), 3.0, 0);
        assert_eq!(s.coefficients, vec![-0.5, -1.0, -1.0 / 12.0]);
        let s = taylor_phase_xi(SpectralPair::new(0.0, 3.0), 1.0, 0);
        assert_eq!(s.quartic(), Some(0.0));
    }

    #[test]
    fn wkb_eta_examples() {
        let s = wkb_tail_eta(SpectralPair::new(1.0, 0.0), 0).unwrap();
        assert_eq!(s.coefficients, vec![-1.0, 1.0, 0.5]);
        let s = wkb_tail_eta(SpectralPair::new(2.5, 6.0), 2).unwrap();
        assert!((s.inverse_coefficient().unwrap() - 1.25).abs() < 1e-15);
        // Continuation beyond |η| = 1 grows like e^{+pη}.
        let s = wkb_tail_eta(SpectralPair::new(1.3, 0.4), 0).unwrap();
        let (y1, y2) = ((-s.value(10.0)).exp(), (-s.value(20.0)).exp());
        assert!(y2 > y1 * 1e4);
        assert!(wkb_tail_eta(SpectralPair::new(0.0, 1.0), 0).is_err());
    }

    #[test]
    fn taylor_eta_examples() {
        let s = taylor_phase_eta(SpectralPair::new(0.0, 0.0), 0);
        assert_eq!(s.coefficients, vec![0.0, 0.0]);
        let s = taylor_phase_eta(SpectralPair::new(1.0, 1.0), 0);
        assert_eq!(s.coefficients, vec![-0.5, -1.0 / 12.0]);
    }

    #[test]
    fn state_labels() {
        assert_eq!("1ssg".parse::<StateLabel>().unwrap(), StateLabel::SIGMA_G_1S);
        assert_eq!("2PSU".parse::<StateLabel>().unwrap(), StateLabel::SIGMA_U_2P);
        assert!("3dsg".parse::<StateLabel>().is_err());
        let excited = StateLabel::new(1, 0, 0, Parity::Gerade);
        assert!(!excited.is_supported());
        assert!(matches!(
            excited.ensure_supported(),
            Err(Error::UnsupportedState(_))
        ));
        assert_eq!(excited.to_string(), "(1,0,0,+)");
    }

    #[test]
    fn spectral_pair_energy_round_trip() {
        let g = Geometry::new(2.0).unwrap();
        let pair = SpectralPair::from_electronic_energy(-2.20526842899, g, 0.8).unwrap();
        assert!((pair.p - 1.4850146).abs() < 1e-6);
        assert!((pair.total_energy(g) + 1.20526842899).abs() < 1e-14);
        assert!(SpectralPair::from_electronic_energy(0.1, g, 0.0).is_err());
        assert!(Geometry::new(-1.0).is_err());
    }
}
