//! Closed-form evaluation of the warping functions, the auxiliaries `A`, `B`,
//! and the seven scalar curvature ratios.
//!
//! Every expression here is written in a form that is nonsingular on the
//! whole closed interval `[0, pi/2]`:
//!
//! - `h` is evaluated through `lambda cos r / sqrt(A)`, which is algebraically
//!   equal to `(1/lambda^2 + tan^2 r)^{-1/2}` and finite at `pi/2`;
//! - `(1 - h'^2)/h^2` uses the identity
//!   `A^3 - lambda^6 sin^2 r = cos^2 r (lambda^6 - (lambda^2-1)(A^2 + A lambda^2 + lambda^4))`
//!   so the `cos^2 r` in the denominator cancels exactly;
//! - `(1 - f'^2)/f^2` uses `4B^{5/2} - (B+1)^2 = (sqrt(B)-1) Q(sqrt(B))` with
//!   `Q(u) = 4u^4 + 3u^3 + 3u^2 + u + 1` and `sqrt(B)-1 = lambda^2 sin^2 r/(sqrt(B)+1)`,
//!   cancelling the `sin^2 r` in the denominator.
//!
//! The forms are generic over [`Real`] so that the rigorous interval path in
//! [`crate::certify`] evaluates exactly the same expressions. Quarter powers
//! are composed square roots throughout.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::jet::{jet2_eval, WarpKind};

pub(crate) fn check_domain(r: f64, lambda: f64) -> Result<()> {
    if !r.is_finite() || !(0.0..=FRAC_PI_2).contains(&r) {
        return Err(Error::Domain(format!("r must lie in [0, pi/2], got {r}")));
    }
    if !lambda.is_finite() || lambda < 1.0 {
        return Err(Error::Domain(format!("lambda must be >= 1, got {lambda}")));
    }
    Ok(())
}

/// The closed forms, generic over the arithmetic.
pub mod forms {
    use crate::real::Real;

    #[inline]
    fn sq<T: Real>(x: T) -> T {
        x * x
    }

    /// `B^{1/4}` as two square roots.
    #[inline]
    fn quarter_root<T: Real>(x: T) -> T {
        x.sqrt().sqrt()
    }

    /// `sin^2 r`.
    #[inline]
    fn s2_of<T: Real>(r: T) -> T {
        sq(r.sin())
    }

    /// `A = lambda^2 sin^2 r + cos^2 r = (lambda^2 - 1) sin^2 r + 1`.
    #[inline]
    pub fn aux_a<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        (l2 - T::of(1.0)) * s2_of(r) + T::of(1.0)
    }

    /// `B = lambda^2 sin^2 r + 1`.
    #[inline]
    pub fn aux_b<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        l2 * s2_of(r) + T::of(1.0)
    }

    /// `f = sin r / B^{1/4}`.
    pub fn warp_f<T: Real>(r: T, lam: f64) -> T {
        r.sin() / quarter_root(aux_b(r, lam))
    }

    /// `h = lambda cos r / sqrt(A)`, the nonsingular rewrite of
    /// `(1/lambda^2 + tan^2 r)^{-1/2}`.
    pub fn warp_h<T: Real>(r: T, lam: f64) -> T {
        T::of(lam) * r.cos() / aux_a(r, lam).sqrt()
    }

    /// `f' = cos r (B + 1) / (2 B^{5/4})`.
    pub fn fprime<T: Real>(r: T, lam: f64) -> T {
        r.cos() * fprime_cofactor(r, lam)
    }

    /// `(B + 1) / (2 B^{5/4})`: `f'` with the `cos r` factor divided out.
    pub fn fprime_cofactor<T: Real>(r: T, lam: f64) -> T {
        let b = aux_b(r, lam);
        (b + T::of(1.0)) / (T::of(2.0) * b * quarter_root(b))
    }

    /// `-f''/f = (lambda^4 s^2 + lambda^4 s + 6 lambda^2 + 4) / (4 B^2)`,
    /// `s = sin^2 r`, numerator by Horner in `s`.
    pub fn neg_fpp_over_f<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let l4 = l2 * l2;
        let s = s2_of(r);
        let num = (l4 * s + l4) * s + T::of(6.0) * l2 + T::of(4.0);
        num / (T::of(4.0) * sq(aux_b(r, lam)))
    }

    /// `-f'h'/(fh) = lambda^2 (B + 1) / (2 A B)`.
    pub fn neg_fphp_over_fh<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let a = aux_a(r, lam);
        let b = aux_b(r, lam);
        l2 * (b + T::of(1.0)) / (T::of(2.0) * a * b)
    }

    /// `-h''/h = lambda^2 ((2 - 2 lambda^2) sin^2 r + 1) / A^2`.
    pub fn neg_hpp_over_h<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let s = s2_of(r);
        l2 * ((T::of(2.0) - T::of(2.0) * l2) * s + T::of(1.0)) / sq(aux_a(r, lam))
    }

    /// `(1 - h'^2)/h^2` via the exact cancellation of `cos^2 r`:
    /// `(1 - (lambda^2-1)^2 s (lambda^2 + 1 + A)) / (lambda^2 A^2)`.
    pub fn one_minus_hp2_over_h2<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let s = s2_of(r);
        let a = aux_a(r, lam);
        let num = T::of(1.0) - sq(l2 - T::of(1.0)) * s * (l2 + T::of(1.0) + a);
        num / (l2 * sq(a))
    }

    /// `(1 - f'^2)/f^2` via the exact cancellation of `sin^2 r`:
    /// `(lambda^2 Q(u)/(u + 1) + (B + 1)^2) / (4 B^2)` with `u = sqrt(B)`.
    pub fn one_minus_fp2_over_f2<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let b = aux_b(r, lam);
        let u = b.sqrt();
        // Q(u) = 4u^4 + 3u^3 + 3u^2 + u + 1 by Horner
        let q = (((T::of(4.0) * u + T::of(3.0)) * u + T::of(3.0)) * u + T::of(1.0)) * u + T::of(1.0);
        (l2 * q / (u + T::of(1.0)) + sq(b + T::of(1.0))) / (T::of(4.0) * sq(b))
    }

    /// `(1 - f')/sin^2 r = [(1 - f'^2)/f^2] / (sqrt(B) (1 + f'))`:
    /// strictly positive cofactor used to certify `f' <= 1`.
    pub fn one_minus_fprime_cofactor<T: Real>(r: T, lam: f64) -> T {
        let g = one_minus_fp2_over_f2(r, lam);
        let b = aux_b(r, lam);
        g / (b.sqrt() * (T::of(1.0) + fprime(r, lam)))
    }

    /// `-h''/h - (-2 lambda^4 sin^2 r / A^2 + 1)`, simplified exactly to
    /// `(lambda^2 (2 sin^2 r + 1) - A^2) / A^2`.
    pub fn c4_residual<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let s = s2_of(r);
        let a = aux_a(r, lam);
        (l2 * (T::of(2.0) * s + T::of(1.0)) - sq(a)) / sq(a)
    }

    /// `-2 lambda^4 sin^2 r / A^2 + 1` (the comparison bound for `-h''/h`).
    pub fn hpp_bound<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let s = s2_of(r);
        T::of(1.0) - T::of(2.0) * l2 * l2 * s / sq(aux_a(r, lam))
    }

    /// `(1 - h'^2)/h^2 + lambda^4 sin^2 r (sin^2 r + 1) / A^2`, written with
    /// the `lambda^6` cancellation pulled out:
    /// `(1 + s (lambda^6 (s + 1) - (lambda^2-1)^2 (lambda^2 + 1 + A))) / (lambda^2 A^2)`.
    pub fn c6_residual<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let l6 = l2 * l2 * l2;
        let s = s2_of(r);
        let a = aux_a(r, lam);
        let bracket = l6 * (s + T::of(1.0)) - sq(l2 - T::of(1.0)) * (l2 + T::of(1.0) + a);
        (T::of(1.0) + s * bracket) / (l2 * sq(a))
    }

    /// `-lambda^4 sin^2 r (sin^2 r + 1) / A^2` (the bound for `(1-h'^2)/h^2`).
    pub fn hp2_bound<T: Real>(r: T, lam: f64) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let s = s2_of(r);
        -(l2 * l2 * s * (s + T::of(1.0)) / sq(aux_a(r, lam)))
    }

    /// `I = m A^2 (lambda^4 s^2 + lambda^4 s + 6 lambda^2 + 4) - 8 (n-1) B^2 lambda^4 s`,
    /// `s = sin^2 r`; polynomial, Horner in `s`.
    pub fn term_i<T: Real>(r: T, lam: f64, m: u32, n: u32) -> T {
        let l2 = T::of(lam) * T::of(lam);
        let l4 = l2 * l2;
        let s = s2_of(r);
        let a = aux_a(r, lam);
        let b = aux_b(r, lam);
        let p = (l4 * s + l4) * s + T::of(6.0) * l2 + T::of(4.0);
        T::of(f64::from(m)) * sq(a) * p - T::of(8.0 * f64::from(n - 1)) * sq(b) * l4 * s
    }

    /// `Ric(H,H) = m (-f''/f) + (n-1) (-h''/h)`.
    pub fn ric_hh<T: Real>(r: T, lam: f64, m: u32, n: u32) -> T {
        T::of(f64::from(m)) * neg_fpp_over_f(r, lam)
            + T::of(f64::from(n - 1)) * neg_hpp_over_h(r, lam)
    }

    /// `Ric(U,U) = -f''/f + (m-1)(1-f'^2)/f^2 + (n-1)(-f'h'/(fh))`.
    pub fn ric_uu<T: Real>(r: T, lam: f64, m: u32, n: u32) -> T {
        neg_fpp_over_f(r, lam)
            + T::of(f64::from(m - 1)) * one_minus_fp2_over_f2(r, lam)
            + T::of(f64::from(n - 1)) * neg_fphp_over_fh(r, lam)
    }

    /// `Ric(V,V) = -h''/h + (n-2)(1-h'^2)/h^2 + m (-f'h'/(fh))`.
    /// The `(n-2)` term is skipped exactly when `n = 2`.
    pub fn ric_vv<T: Real>(r: T, lam: f64, m: u32, n: u32) -> T {
        let base = neg_hpp_over_h(r, lam) + T::of(f64::from(m)) * neg_fphp_over_fh(r, lam);
        if n == 2 {
            base
        } else {
            base + T::of(f64::from(n - 2)) * one_minus_hp2_over_h2(r, lam)
        }
    }

    /// Minimum of the three Ricci components.
    pub fn ric_min<T: Real>(r: T, lam: f64, m: u32, n: u32) -> T {
        ric_hh(r, lam, m, n)
            .min2(ric_uu(r, lam, m, n))
            .min2(ric_vv(r, lam, m, n))
    }
}

/// `f(r) = sin r / (1 + lambda^2 sin^2 r)^{1/4}`.
pub fn warp_f(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::warp_f(r, lambda))
}

/// `h(r) = (1/lambda^2 + tan^2 r)^{-1/2}`, evaluated through the algebraic
/// form that is finite at `pi/2`.
pub fn warp_h(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::warp_h(r, lambda))
}

/// `(A, B) = (lambda^2 sin^2 r + cos^2 r, lambda^2 sin^2 r + 1)`.
pub fn aux_ab(r: f64, lambda: f64) -> Result<(f64, f64)> {
    check_domain(r, lambda)?;
    Ok((forms::aux_a(r, lambda), forms::aux_b(r, lambda)))
}

/// `f'(r) = cos r (B + 1) / (2 B^{5/4})`.
pub fn fprime(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::fprime(r, lambda))
}

pub fn ratio_neg_fpp_over_f(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::neg_fpp_over_f(r, lambda))
}

pub fn ratio_neg_fphp_over_fh(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::neg_fphp_over_fh(r, lambda))
}

pub fn ratio_neg_hpp_over_h(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::neg_hpp_over_h(r, lambda))
}

pub fn ratio_one_minus_hp2_over_h2(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::one_minus_hp2_over_h2(r, lambda))
}

pub fn ratio_one_minus_fp2_over_f2(r: f64, lambda: f64) -> Result<f64> {
    check_domain(r, lambda)?;
    Ok(forms::one_minus_fp2_over_f2(r, lambda))
}

/// The six boundary values of the family, through the endpoint-stable paths:
/// exact closed forms at `r = 0`, the algebraic `h` plus the one-sided jet at
/// `r = pi/2`.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryTable {
    pub f_at_0: f64,
    pub fp_at_0: f64,
    pub fpp_at_0: f64,
    pub h_at_end: f64,
    pub hp_at_end: f64,
    pub hpp_at_end: f64,
}

pub fn boundary_table(lambda: f64) -> Result<BoundaryTable> {
    check_domain(0.0, lambda)?;
    let h_end = forms::warp_h(FRAC_PI_2, lambda);
    Ok(BoundaryTable {
        f_at_0: forms::warp_f(0.0, lambda),
        fp_at_0: forms::fprime(0.0, lambda),
        // f'' = -(-f''/f) * f
        fpp_at_0: -forms::neg_fpp_over_f(0.0, lambda) * forms::warp_f(0.0, lambda),
        h_at_end: h_end,
        hp_at_end: jet2_eval(WarpKind::H, FRAC_PI_2, lambda)?.d1,
        hpp_at_end: -forms::neg_hpp_over_h(FRAC_PI_2, lambda) * h_end,
    })
}

/// Named scalar quantities, for the CLI `eval` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    F,
    H,
    A,
    B,
    Fprime,
    NegFppOverF,
    NegFpHpOverFH,
    NegHppOverH,
    OneMinusHp2OverH2,
    OneMinusFp2OverF2,
}

impl Quantity {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "f" => Self::F,
            "h" => Self::H,
            "A" | "a" => Self::A,
            "B" | "b" => Self::B,
            "fprime" => Self::Fprime,
            "neg_fpp_over_f" => Self::NegFppOverF,
            "neg_fphp_over_fh" => Self::NegFpHpOverFH,
            "neg_hpp_over_h" => Self::NegHppOverH,
            "one_minus_hp2_over_h2" => Self::OneMinusHp2OverH2,
            "one_minus_fp2_over_f2" => Self::OneMinusFp2OverF2,
            other => {
                return Err(Error::UnknownExpression(format!(
                    "unknown quantity '{other}' (expected one of: f, h, A, B, fprime, \
                     neg_fpp_over_f, neg_fphp_over_fh, neg_hpp_over_h, \
                     one_minus_hp2_over_h2, one_minus_fp2_over_f2)"
                )))
            }
        })
    }

    pub fn eval(self, r: f64, lambda: f64) -> Result<f64> {
        check_domain(r, lambda)?;
        Ok(match self {
            Self::F => forms::warp_f(r, lambda),
            Self::H => forms::warp_h(r, lambda),
            Self::A => forms::aux_a(r, lambda),
            Self::B => forms::aux_b(r, lambda),
            Self::Fprime => forms::fprime(r, lambda),
            Self::NegFppOverF => forms::neg_fpp_over_f(r, lambda),
            Self::NegFpHpOverFH => forms::neg_fphp_over_fh(r, lambda),
            Self::NegHppOverH => forms::neg_hpp_over_h(r, lambda),
            Self::OneMinusHp2OverH2 => forms::one_minus_hp2_over_h2(r, lambda),
            Self::OneMinusFp2OverF2 => forms::one_minus_fp2_over_f2(r, lambda),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn warp_f_examples() {
        assert_eq!(warp_f(0.0, 1.0).unwrap(), 0.0);
        // direct substitution: 2^{-1/4} and 5^{-1/4}
        assert!((warp_f(FRAC_PI_2, 1.0).unwrap() - 2f64.powf(-0.25)).abs() < 1e-15);
        assert!((warp_f(FRAC_PI_2, 2.0).unwrap() - 5f64.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn warp_h_examples() {
        assert!(warp_h(FRAC_PI_2, 7.0).unwrap().abs() < 1e-10);
        assert!((warp_h(0.0, 3.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((warp_h(FRAC_PI_4, 1.0).unwrap() - 2f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn aux_ab_examples() {
        let (a, b) = aux_ab(0.0, 5.0).unwrap();
        assert_eq!((a, b), (1.0, 1.0));
        let (a, b) = aux_ab(FRAC_PI_2, 2.0).unwrap();
        assert!((a - 4.0).abs() < 1e-14 && (b - 5.0).abs() < 1e-14);
        let (a, b) = aux_ab(FRAC_PI_4, 1.0).unwrap();
        assert!((a - 1.0).abs() < 1e-14 && (b - 1.5).abs() < 1e-14);
    }

    #[test]
    fn fprime_examples() {
        assert_eq!(fprime(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(fprime(0.0, 977.0).unwrap(), 1.0);
        assert!(fprime(FRAC_PI_2, 3.0).unwrap().abs() < 1e-15);
        // frozen from the closed form B = 3/2 (cross-checked against the jet
        // oracle to 1e-12 in tests/scalar_oracle.rs)
        assert!((fprime(FRAC_PI_4, 1.0).unwrap() - 0.532452586871893730).abs() < 1e-14);
    }

    #[test]
    fn ratio_examples() {
        assert!((ratio_neg_fpp_over_f(0.0, 1.0).unwrap() - 2.5).abs() < 1e-15);
        assert!((ratio_neg_fpp_over_f(FRAC_PI_2, 1.0).unwrap() - 0.75).abs() < 1e-14);
        assert!((ratio_neg_fpp_over_f(0.0, 2.0).unwrap() - 7.0).abs() < 1e-14);

        assert!((ratio_neg_fphp_over_fh(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_neg_fphp_over_fh(FRAC_PI_2, 1.0).unwrap() - 0.75).abs() < 1e-14);
        assert!((ratio_neg_fphp_over_fh(FRAC_PI_2, 2.0).unwrap() - 0.6).abs() < 1e-14);

        assert!((ratio_neg_hpp_over_h(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_neg_hpp_over_h(FRAC_PI_2, 2.0).unwrap() + 1.25).abs() < 1e-14);
        assert!((ratio_neg_hpp_over_h(FRAC_PI_2, 1.0).unwrap() - 1.0).abs() < 1e-14);

        assert!((ratio_one_minus_hp2_over_h2(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_one_minus_fp2_over_f2(FRAC_PI_2, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn b_minus_a_is_sin_squared() {
        for i in 0..200 {
            let r = FRAC_PI_2 * i as f64 / 199.0;
            for &lam in &[1.0, 2.0, 10.0, 313.0] {
                let (a, b) = aux_ab(r, lam).unwrap();
                let s2 = r.sin() * r.sin();
                assert!(
                    (b - a - s2).abs() <= 1e-12 * (1.0 + b.abs()),
                    "B - A != sin^2 at r={r}, lam={lam}"
                );
            }
        }
    }

    #[test]
    fn boundary_values() {
        for &lam in &[1.0, 2.0, 10.0, 100.0] {
            let t = boundary_table(lam).unwrap();
            assert!(t.f_at_0.abs() < 1e-10);
            assert!((t.fp_at_0 - 1.0).abs() < 1e-10);
            assert!(t.fpp_at_0.abs() < 1e-10);
            assert!(t.h_at_end.abs() < 1e-10);
            assert!((t.hp_at_end + 1.0).abs() < 1e-10, "h'(pi/2) = {}", t.hp_at_end);
            assert!(t.hpp_at_end.abs() < 1e-10);
        }
    }

    #[test]
    fn domain_errors_everywhere() {
        assert!(warp_f(-0.1, 1.0).is_err());
        assert!(warp_f(1.7, 1.0).is_err());
        assert!(warp_f(0.5, 0.99).is_err());
        assert!(fprime(f64::NAN, 1.0).is_err());
        assert!(Quantity::parse("nope").is_err());
    }

    #[test]
    fn quantity_roundtrip() {
        for name in [
            "f",
            "h",
            "A",
            "B",
            "fprime",
            "neg_fpp_over_f",
            "neg_fphp_over_fh",
            "neg_hpp_over_h",
            "one_minus_hp2_over_h2",
            "one_minus_fp2_over_f2",
        ] {
            let q = Quantity::parse(name).unwrap();
            assert!(q.eval(0.7, 3.0).unwrap().is_finite());
        }
    }
}
