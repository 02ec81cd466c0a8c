//! Tangent-cone rescaling check at an equator point.
//!
//! Points are placed on a fixed 5x5 pattern of (radial, equatorial) offsets
//! `(u, v)`. At scale `s` the hemisphere configuration is
//! `(phi, beta) = (s u, beta0 + s^2 v)` — radial offsets scale as `s`,
//! equatorial ones as `s^2`, matching the anisotropic dilations of the
//! `alpha = 1` halfplane — and `d_hemisphere / s` is compared against the
//! halfplane distance of `(u, v)` pairs. The isotropic variant
//! (`beta0 + s v`) is reported alongside; it does not converge, which is the
//! point of reporting it.

use crate::error::{Error, Result};
use crate::geodesics::shooting::{distance_with, ShootOptions};
use crate::geodesics::{MetricSpec, ReducedPoint};
use crate::par;

#[derive(Debug, Clone, Copy)]
pub struct TangentOptions {
    pub shoot: ShootOptions,
    pub tol: f64,
}

impl Default for TangentOptions {
    fn default() -> Self {
        Self {
            shoot: ShootOptions {
                grid: 10,
                ..Default::default()
            },
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TangentReport {
    pub scale: f64,
    pub max_rel_err: f64,
    pub max_rel_err_isotropic: f64,
}

const PATTERN_U: [f64; 5] = [0.3, 0.65, 1.0, 1.35, 1.7];
const PATTERN_V: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

fn pattern() -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(25);
    for &u in &PATTERN_U {
        for &v in &PATTERN_V {
            pts.push((u, v));
        }
    }
    pts
}

/// Compare rescaled hemisphere distances at an equator point against the
/// `alpha = 1` Grushin halfplane, one row per scale.
pub fn tangent_cone_check(n: u32, scales: &[f64], opt: &TangentOptions) -> Result<Vec<TangentReport>> {
    if scales.is_empty() {
        return Err(Error::Domain("need at least one scale".into()));
    }
    if scales.iter().any(|&s| !(0.0..=0.1).contains(&s) || s == 0.0) {
        return Err(Error::Domain("scales must lie in (0, 0.1]".into()));
    }
    if scales.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Domain("scales must be strictly decreasing".into()));
    }
    let hemisphere = MetricSpec::LimitHemisphere { n };
    hemisphere.validate()?;
    let halfplane = MetricSpec::GrushinHalfplane { alpha: 1.0 };
    let pts = pattern();
    let mut pairs = Vec::new();
    for i in 0..pts.len() {
        for j in 0..i {
            pairs.push((pts[j], pts[i]));
        }
    }

    // reference distances in the model halfplane
    let refs: Vec<f64> = par::map_slice(&pairs, |&(a, b)| {
        let p = ReducedPoint::Halfplane { x: a.0, y: a.1 };
        let q = ReducedPoint::Halfplane { x: b.0, y: b.1 };
        distance_with(&halfplane, &p, &q, opt.tol, &opt.shoot).unwrap_or(f64::NAN)
    });
    if refs.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonConvergence("halfplane reference distances".into()));
    }

    let beta0 = std::f64::consts::FRAC_PI_2;
    let mut out = Vec::with_capacity(scales.len());
    for &s in scales {
        let errs: Vec<(f64, f64)> = par::map_slice(&pairs, |&(a, b)| {
            let dist_at = |va: f64, vb: f64| {
                let p = ReducedPoint::Hemisphere { phi: s * a.0, beta: beta0 + va };
                let q = ReducedPoint::Hemisphere { phi: s * b.0, beta: beta0 + vb };
                distance_with(&hemisphere, &p, &q, opt.tol * s, &opt.shoot)
                    .map(|d| d / s)
                    .unwrap_or(f64::NAN)
            };
            let aniso = dist_at(s * s * a.1, s * s * b.1);
            let iso = dist_at(s * a.1, s * b.1);
            (aniso, iso)
        });
        let mut max_rel = 0.0f64;
        let mut max_rel_iso = 0.0f64;
        for (k, &(aniso, iso)) in errs.iter().enumerate() {
            let d_ref = refs[k];
            if d_ref <= 0.0 {
                continue;
            }
            if aniso.is_finite() {
                max_rel = max_rel.max((aniso - d_ref).abs() / d_ref);
            } else {
                max_rel = f64::INFINITY;
            }
            if iso.is_finite() {
                max_rel_iso = max_rel_iso.max((iso - d_ref).abs() / d_ref);
            }
        }
        out.push(TangentReport {
            scale: s,
            max_rel_err: max_rel,
            max_rel_err_isotropic: max_rel_iso,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_scales() {
        let opt = TangentOptions::default();
        assert!(tangent_cone_check(2, &[], &opt).is_err());
        assert!(tangent_cone_check(2, &[0.2], &opt).is_err());
        assert!(tangent_cone_check(2, &[0.05, 0.05], &opt).is_err());
    }

    #[test]
    fn zero_separation_pairs_are_excluded_by_pattern() {
        let pts = pattern();
        for i in 0..pts.len() {
            for j in 0..i {
                assert!(pts[i] != pts[j]);
            }
        }
    }
}
