//! Geodesics and distances in the reduced warped metrics.
//!
//! Three rotationally symmetric charts are supported:
//!
//! - the sphere family, reduced to `dr^2 + f(r)^2 da^2 + h(r)^2 db^2` on
//!   `[0, pi/2] x [0, pi] x [0, pi]` (angular separations along great
//!   circles in each fiber);
//! - the limit hemisphere `dphi^2 + cot^2(phi) db^2` on `(0, pi/2] x [0, pi]`;
//! - the Grushin halfplane `dx^2 + x^{-2 alpha} dy^2` on `x > 0`.
//!
//! Distances come from multi-start shooting over the Clairaut constants
//! ([`shooting`]), cross-checked by a grid-graph Dijkstra oracle ([`oracle`]).
//! Completion distances to the singular boundary (`phi = 0`, `x = 0`) are
//! Richardson-extrapolated offsets ([`boundary`]).

pub mod boundary;
pub mod ivp;
pub mod oracle;
pub mod shooting;

pub use boundary::boundary_distance;
pub use ivp::{geodesic_ivp, IvpOptions, PathResult, PathSample};
pub use oracle::{oracle_distance, oracle_distance_with, OracleOptions};
pub use shooting::{distance, distance_with, ShootOptions};

use crate::error::{Error, Result};
use crate::params::WarpParams;
use crate::scalar::forms;

/// Selects one of the metric spaces under study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricSpec {
    SphereDwp(WarpParams),
    LimitHemisphere { n: u32 },
    GrushinHalfplane { alpha: f64 },
}

impl MetricSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            MetricSpec::SphereDwp(p) => {
                WarpParams::new(p.lambda, p.m, p.n)?;
            }
            MetricSpec::LimitHemisphere { n } => {
                if *n < 2 {
                    return Err(Error::Domain(format!("hemisphere needs n >= 2, got {n}")));
                }
            }
            MetricSpec::GrushinHalfplane { alpha } => {
                if !alpha.is_finite() || *alpha <= 0.0 {
                    return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn chart(&self) -> Chart {
        Chart { spec: *self }
    }
}

/// A point in the reduced chart of one variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedPoint {
    Sphere { r: f64, alpha: f64, beta: f64 },
    Hemisphere { phi: f64, beta: f64 },
    Halfplane { x: f64, y: f64 },
}

impl ReducedPoint {
    pub(crate) fn rho(&self) -> f64 {
        match *self {
            ReducedPoint::Sphere { r, .. } => r,
            ReducedPoint::Hemisphere { phi, .. } => phi,
            ReducedPoint::Halfplane { x, .. } => x,
        }
    }

    pub(crate) fn angles(&self) -> [f64; 2] {
        match *self {
            ReducedPoint::Sphere { alpha, beta, .. } => [alpha, beta],
            ReducedPoint::Hemisphere { beta, .. } => [beta, 0.0],
            ReducedPoint::Halfplane { y, .. } => [y, 0.0],
        }
    }

    /// True if the point sits on the metric-completion boundary
    /// (hemisphere equator `phi = 0`, Grushin singular line `x = 0`).
    pub fn on_completion_boundary(&self) -> bool {
        match *self {
            ReducedPoint::Hemisphere { phi, .. } => phi == 0.0,
            ReducedPoint::Halfplane { x, .. } => x == 0.0,
            ReducedPoint::Sphere { .. } => false,
        }
    }
}

/// Fold a signed angle difference onto the separation range `[0, pi]`.
pub(crate) fn fold_angle(x: f64) -> f64 {
    let t = x.abs() % std::f64::consts::TAU;
    if t > std::f64::consts::PI {
        std::f64::consts::TAU - t
    } else {
        t
    }
}

/// Uniform internal view of the three reduced metrics.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Chart {
    pub spec: MetricSpec,
}

impl Chart {
    pub fn nang(&self) -> usize {
        match self.spec {
            MetricSpec::SphereDwp(_) => 2,
            _ => 1,
        }
    }

    /// Chart range of the radial coordinate.
    pub fn rho_range(&self) -> (f64, f64) {
        match self.spec {
            MetricSpec::SphereDwp(_) => (0.0, std::f64::consts::FRAC_PI_2),
            MetricSpec::LimitHemisphere { .. } => (0.0, std::f64::consts::FRAC_PI_2),
            MetricSpec::GrushinHalfplane { .. } => (0.0, f64::INFINITY),
        }
    }

    /// Warp factor of angular fiber `i`.
    pub fn w(&self, i: usize, rho: f64) -> f64 {
        match self.spec {
            MetricSpec::SphereDwp(p) => {
                if i == 0 {
                    forms::warp_f(rho, p.lambda)
                } else {
                    forms::warp_h(rho, p.lambda)
                }
            }
            MetricSpec::LimitHemisphere { .. } => rho.cos() / rho.sin(),
            MetricSpec::GrushinHalfplane { alpha } => rho.powf(-alpha),
        }
    }

    /// d/drho of the warp factor.
    pub fn dw(&self, i: usize, rho: f64) -> f64 {
        match self.spec {
            MetricSpec::SphereDwp(p) => {
                if i == 0 {
                    forms::fprime(rho, p.lambda)
                } else {
                    // h' = -lambda^3 sin r / A^{3/2}
                    let a = forms::aux_a(rho, p.lambda);
                    -p.lambda.powi(3) * rho.sin() / (a * a.sqrt())
                }
            }
            MetricSpec::LimitHemisphere { .. } => {
                let s = rho.sin();
                -1.0 / (s * s)
            }
            MetricSpec::GrushinHalfplane { alpha } => -alpha * rho.powf(-alpha - 1.0),
        }
    }

    /// Which fiber collapses (`w = 0`) at the lower chart end, if any.
    pub fn pole_at_lo(&self) -> Option<usize> {
        match self.spec {
            MetricSpec::SphereDwp(_) => Some(0),
            _ => None,
        }
    }

    /// Which fiber collapses at the upper chart end, if any.
    pub fn pole_at_hi(&self) -> Option<usize> {
        match self.spec {
            MetricSpec::SphereDwp(_) => Some(1),
            MetricSpec::LimitHemisphere { .. } => Some(0),
            MetricSpec::GrushinHalfplane { .. } => None,
        }
    }

    /// Angular fibers are circles except the Grushin `y` line.
    pub fn angle_is_circular(&self, _i: usize) -> bool {
        !matches!(self.spec, MetricSpec::GrushinHalfplane { .. })
    }

    /// Separation of two values of angular coordinate `i`.
    pub fn separation(&self, i: usize, a: f64, b: f64) -> f64 {
        if self.angle_is_circular(i) {
            fold_angle(a - b)
        } else {
            (a - b).abs()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn fold_angle_basics() {
        assert!((fold_angle(0.3) - 0.3).abs() < 1e-15);
        assert!((fold_angle(-0.3) - 0.3).abs() < 1e-15);
        assert!((fold_angle(PI + 0.5) - (PI - 0.5)).abs() < 1e-12);
        assert!((fold_angle(2.0 * PI + 0.1) - 0.1).abs() < 1e-12);
        assert!(fold_angle(PI) <= PI);
    }

    #[test]
    fn chart_warps_match_known_values() {
        let c = MetricSpec::LimitHemisphere { n: 2 }.chart();
        assert!((c.w(0, FRAC_PI_2)).abs() < 1e-15);
        assert!((c.w(0, std::f64::consts::FRAC_PI_4) - 1.0).abs() < 1e-14);

        let g = MetricSpec::GrushinHalfplane { alpha: 1.0 }.chart();
        assert!((g.w(0, 2.0) - 0.5).abs() < 1e-15);
        assert!((g.dw(0, 2.0) + 0.25).abs() < 1e-15);

        let p = WarpParams::new(2.0, 8, 2).unwrap();
        let s = MetricSpec::SphereDwp(p).chart();
        assert!((s.w(0, 0.0)).abs() < 1e-15);
        assert!((s.w(1, 0.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn chart_derivatives_match_finite_differences() {
        let specs = [
            MetricSpec::SphereDwp(WarpParams::new(3.0, 8, 2).unwrap()),
            MetricSpec::LimitHemisphere { n: 2 },
            MetricSpec::GrushinHalfplane { alpha: 1.3 },
        ];
        for spec in specs {
            let c = spec.chart();
            for i in 0..c.nang() {
                for &rho in &[0.3, 0.7, 1.2] {
                    let h = 1e-6;
                    let fd = (c.w(i, rho + h) - c.w(i, rho - h)) / (2.0 * h);
                    assert!(
                        (fd - c.dw(i, rho)).abs() < 1e-6 * (1.0 + fd.abs()),
                        "{spec:?} fiber {i} at rho={rho}: fd={fd}, dw={}",
                        c.dw(i, rho)
                    );
                }
            }
        }
    }

    #[test]
    fn validate_rejects_bad_specs() {
        assert!(MetricSpec::GrushinHalfplane { alpha: 0.0 }.validate().is_err());
        assert!(MetricSpec::LimitHemisphere { n: 1 }.validate().is_err());
        assert!(MetricSpec::LimitHemisphere { n: 2 }.validate().is_ok());
    }
}
