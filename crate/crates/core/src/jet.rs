//! Second-order forward-mode derivatives (value, first, second derivative).
//!
//! The trial functions are short compositions of rational functions, `exp`,
//! `ln`, `cosh`, `sinh` and powers; pushing a `Jet` through them yields exact
//! derivatives without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet { v, d1: 0.0, d2: 0.0 }
    }

    /// The independent variable at `x`.
    pub fn variable(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }

    /// `h(self)` given `h`, `h'`, `h''` evaluated at `self.v`.
    #[inline]
    pub fn chain(self, h0: f64, h1: f64, h2: f64) -> Self {
        Jet {
            v: h0,
            d1: h1 * self.d1,
            d2: h2 * self.d1 * self.d1 + h1 * self.d2,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let inv = 1.0 / self.v;
        self.chain(self.v.ln(), inv, -inv * inv)
    }

    pub fn powf(self, k: f64) -> Self {
        let x = self.v;
        self.chain(
            x.powf(k),
            k * x.powf(k - 1.0),
            k * (k - 1.0) * x.powf(k - 2.0),
        )
    }

    pub fn cosh(self) -> Self {
        let (c, s) = (self.v.cosh(), self.v.sinh());
        self.chain(c, s, c)
    }

    pub fn sinh(self) -> Self {
        let (c, s) = (self.v.cosh(), self.v.sinh());
        self.chain(s, c, s)
    }

    /// `ln cosh`, stable for large arguments.
    pub fn ln_cosh(self) -> Self {
        let x = self.v;
        let ax = x.abs();
        let value = ax + (-2.0 * ax).exp().ln_1p() - std::f64::consts::LN_2;
        let t = x.tanh();
        self.chain(value, t, 1.0 - t * t)
    }

    /// `sinh(z)/z`, regular at the origin.
    pub fn sinhc(self) -> Self {
        let (h0, h1, h2) = sinhc_derivatives(self.v);
        self.chain(h0, h1, h2)
    }

    pub fn scale(self, k: f64) -> Self {
        Jet {
            v: k * self.v,
            d1: k * self.d1,
            d2: k * self.d2,
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.v;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

/// `sinh(z)/z` and its first two derivatives.
pub fn sinhc_derivatives(z: f64) -> (f64, f64, f64) {
    if z.abs() < 0.1 {
        let z2 = z * z;
        let f0 = 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0 * (1.0 + z2 / 72.0)));
        let f1 = z
            * (1.0 / 3.0
                + z2 * (1.0 / 30.0 + z2 * (1.0 / 840.0 + z2 * (1.0 / 45360.0 + z2 / 3991680.0))));
        let f2 = 1.0 / 3.0
            + z2 * (1.0 / 10.0 + z2 * (1.0 / 168.0 + z2 * (1.0 / 6480.0 + z2 / 443520.0)));
        (f0, f1, f2)
    } else {
        let (s, c) = (z.sinh(), z.cosh());
        let f0 = s / z;
        let f1 = (z * c - s) / (z * z);
        let f2 = ((z * z + 2.0) * s - 2.0 * z * c) / (z * z * z);
        (f0, f1, f2)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        Jet { v: self.v + k, ..self }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-4;
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn composite_matches_finite_differences() {
        let f = |x: Jet| (x * x + 1.0).ln() * (x.scale(0.3)).cosh() / (x + 2.0).powf(0.7);
        let g = |x: f64| (x * x + 1.0).ln() * (0.3 * x).cosh() / (x + 2.0).powf(0.7);
        for x in [0.2, 1.3, 2.9] {
            let j = f(Jet::variable(x));
            let (d1, d2) = fd(g, x);
            assert!((j.v - g(x)).abs() < 1e-14);
            assert!((j.d1 - d1).abs() < 1e-7);
            assert!((j.d2 - d2).abs() < 1e-5);
        }
    }

    #[test]
    fn sinhc_branches_agree() {
        for z in [0.0999, 0.1001, -0.0999] {
            let (a0, a1, a2) = sinhc_derivatives(z);
            let s = z.sinh();
            let c = z.cosh();
            assert!((a0 - s / z).abs() < 1e-15);
            assert!((a1 - (z * c - s) / (z * z)).abs() < 1e-13);
            assert!((a2 - ((z * z + 2.0) * s - 2.0 * z * c) / (z * z * z)).abs() < 1e-11);
        }
        assert_eq!(sinhc_derivatives(0.0), (1.0, 0.0, 1.0 / 3.0));
    }

    #[test]
    fn ln_cosh_is_stable() {
        let j = Jet::variable(800.0).ln_cosh();
        assert!((j.v - (800.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        let j = Jet::variable(0.4).ln_cosh();
        assert!((j.v - 0.4f64.cosh().ln()).abs() < 1e-15);
    }
}
