//! Second-order forward-mode differentiation in one variable.
//!
//! [`Jet2`] carries `(value, d1, d2)` and propagates derivatives through the
//! chain, product, and quotient rules. It exists to cross-check the hand
//! closed forms in [`crate::scalar`]: the oracle path evaluates only the
//! defining formulas of the warping functions (sin, cos, tan, elementary
//! powers), never the simplified ratio expressions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    /// Seed for the independent variable: `(x, 1, 0)`.
    pub fn var(x: f64) -> Self {
        Self { value: x, d1: 1.0, d2: 0.0 }
    }

    /// Constant: `(c, 0, 0)`.
    pub fn con(c: f64) -> Self {
        Self { value: c, d1: 0.0, d2: 0.0 }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        Self {
            value: s,
            d1: c * self.d1,
            d2: c * self.d2 - s * self.d1 * self.d1,
        }
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        Self {
            value: c,
            d1: -s * self.d1,
            d2: -s * self.d2 - c * self.d1 * self.d1,
        }
    }

    /// tan' = 1 + tan^2, tan'' = 2 tan (1 + tan^2).
    pub fn tan(self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        Self {
            value: t,
            d1: sec2 * self.d1,
            d2: sec2 * self.d2 + 2.0 * t * sec2 * self.d1 * self.d1,
        }
    }

    pub fn sqrt(self) -> Self {
        let g = self.value.sqrt();
        let d1 = self.d1 / (2.0 * g);
        Self {
            value: g,
            d1,
            d2: self.d2 / (2.0 * g) - d1 * d1 / g,
        }
    }

    /// (1/f)' = -f'/f^2, (1/f)'' = -f''/f^2 + 2 f'^2/f^3.
    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        let inv2 = inv * inv;
        Self {
            value: inv,
            d1: -self.d1 * inv2,
            d2: -self.d2 * inv2 + 2.0 * self.d1 * self.d1 * inv2 * inv,
        }
    }
}

impl std::ops::Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            value: self.value - o.value,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        }
    }
}

impl std::ops::Div for Jet2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { value: -self.value, d1: -self.d1, d2: -self.d2 }
    }
}

/// Which warping function to differentiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarpKind {
    F,
    H,
}

/// One-sided offset used when the h-jet is requested at the right endpoint,
/// where the tan form is singular.
const H_ENDPOINT_OFFSET: f64 = 1e-8;

/// `(value, d1, d2)` of the chosen warping function at `r`, by forward-mode
/// differentiation of the defining formula.
///
/// `f = sin r (1 + lambda^2 sin^2 r)^{-1/4}` is smooth on the whole interval.
/// `h = (1/lambda^2 + tan^2 r)^{-1/2}` runs through tan and is evaluated at a
/// one-sided offset when `r` is at (or past) `pi/2`.
pub fn jet2_eval(which: WarpKind, r: f64, lambda: f64) -> Result<Jet2> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&r) || !r.is_finite() {
        return Err(Error::Domain(format!("r must lie in [0, pi/2], got {r}")));
    }
    if !lambda.is_finite() || lambda < 1.0 {
        return Err(Error::Domain(format!("lambda must be >= 1, got {lambda}")));
    }
    Ok(match which {
        WarpKind::F => {
            let x = Jet2::var(r);
            let s = x.sin();
            let b = Jet2::con(1.0) + Jet2::con(lambda * lambda) * s * s;
            // quarter power as two square roots
            s * b.sqrt().sqrt().recip()
        }
        WarpKind::H => {
            let r_eval = if r >= std::f64::consts::FRAC_PI_2 - f64::EPSILON {
                std::f64::consts::FRAC_PI_2 - H_ENDPOINT_OFFSET
            } else {
                r
            };
            let x = Jet2::var(r_eval);
            let t = x.tan();
            (Jet2::con(1.0 / (lambda * lambda)) + t * t).sqrt().recip()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn jet_matches_finite_differences() {
        let g = |x: f64| (x.sin() * x.cos() + 0.3) / (1.4 + x.sin() * x.sin());
        let jg = |x: f64| {
            let j = Jet2::var(x);
            (j.sin() * j.cos() + Jet2::con(0.3)) / (Jet2::con(1.4) + j.sin() * j.sin())
        };
        for &x in &[0.2, 0.7, 1.3] {
            let j = jg(x);
            let (d1, d2) = central_diff(g, x, 1e-5);
            assert!((j.d1 - d1).abs() < 1e-8, "d1 at {x}");
            assert!((j.d2 - d2).abs() < 1e-4, "d2 at {x}");
        }
    }

    #[test]
    fn f_jet_at_zero_is_exact() {
        let j = jet2_eval(WarpKind::F, 0.0, 1.0).unwrap();
        assert_eq!(j.value, 0.0);
        assert_eq!(j.d1, 1.0);
        assert_eq!(j.d2, 0.0);
    }

    #[test]
    fn h_jet_near_endpoint_has_slope_minus_one() {
        let j = jet2_eval(WarpKind::H, FRAC_PI_2 - 1e-8, 1.0).unwrap();
        assert!((j.d1 + 1.0).abs() < 1e-6, "d1 = {}", j.d1);
        let j = jet2_eval(WarpKind::H, FRAC_PI_2, 7.0).unwrap();
        assert!((j.d1 + 1.0).abs() < 1e-6, "endpoint clamp, d1 = {}", j.d1);
    }

    #[test]
    fn domain_errors() {
        assert!(jet2_eval(WarpKind::F, -0.1, 1.0).is_err());
        assert!(jet2_eval(WarpKind::F, 2.0, 1.0).is_err());
        assert!(jet2_eval(WarpKind::H, 0.2, 0.9).is_err());
    }
}
