//! Closed intervals with outward-rounded arithmetic.
//!
//! Every operation returns an enclosure of the exact image. Outward rounding
//! is realized as next-representable-value widening after each operation,
//! which is portable and does not require directed-rounding mode control.
//! `sin`/`cos` are only used on subintervals of `[0, pi/2]` (give or take one
//! ulp), where both are monotone; their enclosures come from endpoint
//! evaluation widened by two ulps to cover libm's rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn hull(self, other: Self) -> Self {
        Self::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Widen each bound by one unit in the last place.
    #[inline]
    fn widen(self) -> Self {
        Self {
            lo: self.lo.next_down(),
            hi: self.hi.next_up(),
        }
    }

    #[inline]
    fn widen2(self) -> Self {
        self.widen().widen()
    }
}

impl Add for Interval {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.lo + o.lo, self.hi + o.hi).widen()
    }
}

impl Sub for Interval {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.lo - o.hi, self.hi - o.lo).widen()
    }
}

impl Neg for Interval {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let p1 = self.lo * o.lo;
        let p2 = self.lo * o.hi;
        let p3 = self.hi * o.lo;
        let p4 = self.hi * o.hi;
        Self::new(p1.min(p2).min(p3).min(p4), p1.max(p2).max(p3).max(p4)).widen()
    }
}

impl Div for Interval {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        assert!(
            o.lo > 0.0 || o.hi < 0.0,
            "interval division by an interval containing zero: [{}, {}]",
            o.lo,
            o.hi
        );
        let p1 = self.lo / o.lo;
        let p2 = self.lo / o.hi;
        let p3 = self.hi / o.lo;
        let p4 = self.hi / o.hi;
        Self::new(p1.min(p2).min(p3).min(p4), p1.max(p2).max(p3).max(p4)).widen()
    }
}

impl Real for Interval {
    #[inline]
    fn of(x: f64) -> Self {
        Self::point(x)
    }

    /// Square root; `sqrt` is correctly rounded, one ulp of widening keeps
    /// the enclosure sound. Negative dust from earlier widening is clamped.
    fn sqrt(self) -> Self {
        debug_assert!(self.lo > -1e-300, "sqrt of a clearly negative interval");
        let lo = self.lo.max(0.0);
        Self::new(lo.sqrt(), self.hi.sqrt()).widen()
    }

    /// Monotone-increasing on the supported domain.
    fn sin(self) -> Self {
        debug_assert!(self.lo >= -1e-9 && self.hi <= std::f64::consts::FRAC_PI_2 + 1e-9);
        let e = Self::new(self.lo.sin(), self.hi.sin()).widen2();
        Self::new(e.lo.max(-1.0), e.hi.min(1.0))
    }

    /// Monotone-decreasing on the supported domain. The lower bound may be a
    /// hair negative for boxes reaching pi/2; that is genuine, not clamped.
    fn cos(self) -> Self {
        debug_assert!(self.lo >= -1e-9 && self.hi <= std::f64::consts::FRAC_PI_2 + 1e-9);
        let e = Self::new(self.hi.cos(), self.lo.cos()).widen2();
        Self::new(e.lo.max(-1.0), e.hi.min(1.0))
    }

    #[inline]
    fn min2(self, o: Self) -> Self {
        Self::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses_points() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(-0.5, 0.25);
        let s = a + b;
        assert!(s.lo <= 0.5 && s.hi >= 2.25);
        let m = a * b;
        assert!(m.contains(-1.0) && m.contains(0.5));
        let d = a / Interval::new(2.0, 4.0);
        assert!(d.contains(0.25) && d.contains(1.0));
    }

    #[test]
    fn sqrt_and_trig_are_sound() {
        let x = Interval::new(0.0, 4.0);
        let r = x.sqrt();
        assert!(r.lo <= 0.0 && r.hi >= 2.0);
        let t = Interval::new(0.3, 0.9);
        let s = t.sin();
        assert!(s.contains(0.5f64.sin()) && s.contains(0.3f64.sin()) && s.contains(0.9f64.sin()));
        let c = t.cos();
        assert!(c.contains(0.3f64.cos()) && c.contains(0.9f64.cos()));
    }

    #[test]
    #[should_panic]
    fn division_through_zero_panics() {
        let _ = Interval::new(1.0, 2.0) / Interval::new(-1.0, 1.0);
    }

    #[test]
    fn min2_is_elementwise() {
        let a = Interval::new(1.0, 5.0);
        let b = Interval::new(2.0, 3.0);
        let m = a.min2(b);
        assert_eq!(m.lo, 1.0);
        assert_eq!(m.hi, 3.0);
    }
}
