use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic shared by plain `f64` evaluation and interval enclosures.
///
/// The closed forms in [`crate::scalar`] are written once against this trait,
/// so the certifier provably evaluates the same expressions the scalar kernel
/// does.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn of(x: f64) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    /// Pointwise minimum (interval: enclosure of the min).
    fn min2(self, other: Self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn min2(self, other: Self) -> Self {
        f64::min(self, other)
    }
}
