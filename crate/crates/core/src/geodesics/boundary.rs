//! Completion distances to the singular boundary (hemisphere equator
//! `phi = 0`, Grushin line `x = 0`) by offset and Richardson extrapolation.
//!
//! Boundary coordinates are replaced by offsets `delta, delta/2, delta/4`
//! and the three interior distances are extrapolated twice, eliminating the
//! linear and quadratic offset terms. The leading term is linear with slope
//! `-1` per offset endpoint (minimizing paths meet the boundary radially at
//! unit speed), so the extrapolation converges fast.

use super::shooting::{distance_with, ShootOptions};
use super::{MetricSpec, ReducedPoint};
use crate::error::{Error, Result};

/// The fixed offset ladder.
pub const OFFSETS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, Copy)]
pub struct BoundaryDistance {
    pub value: f64,
    /// Difference between the last two extrapolation levels.
    pub error_estimate: f64,
}

fn offset_point(p: &ReducedPoint, delta: f64) -> ReducedPoint {
    match *p {
        ReducedPoint::Hemisphere { phi, beta } => ReducedPoint::Hemisphere {
            phi: if phi == 0.0 { delta } else { phi },
            beta,
        },
        ReducedPoint::Halfplane { x, y } => ReducedPoint::Halfplane {
            x: if x == 0.0 { delta } else { x },
            y,
        },
        other => other,
    }
}

/// Completion distance where at least one endpoint lies on the boundary.
pub fn boundary_distance(
    spec: &MetricSpec,
    p: &ReducedPoint,
    q: &ReducedPoint,
    tol: f64,
) -> Result<BoundaryDistance> {
    boundary_distance_with(spec, p, q, tol, &ShootOptions::default())
}

pub fn boundary_distance_with(
    spec: &MetricSpec,
    p: &ReducedPoint,
    q: &ReducedPoint,
    tol: f64,
    opt: &ShootOptions,
) -> Result<BoundaryDistance> {
    spec.validate()?;
    if matches!(spec, MetricSpec::SphereDwp(_)) {
        return Err(Error::Domain(
            "the sphere family is complete; boundary_distance applies to the limit spaces".into(),
        ));
    }
    if !p.on_completion_boundary() && !q.on_completion_boundary() {
        return Err(Error::Domain(
            "boundary_distance needs at least one endpoint on the completion boundary".into(),
        ));
    }
    if p == q {
        return Ok(BoundaryDistance {
            value: 0.0,
            error_estimate: 0.0,
        });
    }

    let mut vals = [0.0f64; 3];
    for (k, &delta) in OFFSETS.iter().enumerate() {
        let pk = offset_point(p, delta);
        let qk = offset_point(q, delta);
        vals[k] = distance_with(spec, &pk, &qk, tol, opt)?;
    }
    // eliminate the linear term, then the quadratic one
    let r1 = [2.0 * vals[1] - vals[0], 2.0 * vals[2] - vals[1]];
    let r2 = (4.0 * r1[1] - r1[0]) / 3.0;
    let err = (r2 - r1[1]).abs();
    if !r2.is_finite() {
        return Err(Error::Extrapolation("offset distances did not settle".into()));
    }
    Ok(BoundaryDistance {
        value: r2,
        error_estimate: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn pole_to_equator_is_a_quarter_turn() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let pole = ReducedPoint::Hemisphere { phi: FRAC_PI_2, beta: 0.3 };
        let eq = ReducedPoint::Hemisphere { phi: 0.0, beta: 1.1 };
        let d = boundary_distance(&spec, &pole, &eq, 1e-8).unwrap();
        assert!(
            (d.value - FRAC_PI_2).abs() < 1e-6,
            "value = {}, est = {}",
            d.value,
            d.error_estimate
        );
    }

    #[test]
    fn rejects_interior_only_calls() {
        let spec = MetricSpec::GrushinHalfplane { alpha: 1.0 };
        let p = ReducedPoint::Halfplane { x: 0.5, y: 0.0 };
        let q = ReducedPoint::Halfplane { x: 1.0, y: 0.0 };
        assert!(boundary_distance(&spec, &p, &q, 1e-8).is_err());
    }
}
