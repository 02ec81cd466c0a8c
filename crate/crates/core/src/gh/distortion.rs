//! The collapse correspondence and its distortion.
//!
//! A net on the sphere family is projected by `(r, alpha, beta) -> (phi = r,
//! beta)` onto the limit hemisphere; the distortion of that correspondence
//! (max pairwise distance discrepancy) is the desk-scale surrogate for the
//! Gromov-Hausdorff gap, reported together with the net scale so the
//! `gh_upper = distortion/2 + 2 eps` bound is explicit.

use super::net::{backend_for, build_net_internal, NetBackend, NetOptions};
use super::DistanceMatrix;
use crate::error::{Error, Result};
use crate::geodesics::MetricSpec;
use crate::geodesics::ReducedPoint;
use crate::par;
use crate::params::WarpParams;

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub net: NetOptions,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            net: NetOptions::default(),
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DistortionReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub distortion: f64,
    pub argmax_pair: (usize, usize),
    pub gh_upper: f64,
    pub gh_lower: f64,
    pub net_size_a: usize,
    pub net_size_b: usize,
}

/// Distribution-of-distances lower bound: half the sup-distance between the
/// sorted distance multisets, compared as quantile functions (exact for the
/// step functions involved).
pub fn gh_lower_bound(a: &DistanceMatrix, b: &DistanceMatrix) -> f64 {
    let mut xs: Vec<f64> = a.entries().to_vec();
    let mut ys: Vec<f64> = b.entries().to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let qa = |t: f64| xs[((t * xs.len() as f64) as usize).min(xs.len() - 1)];
    let qb = |t: f64| ys[((t * ys.len() as f64) as usize).min(ys.len() - 1)];
    // quantile steps change only at k/len; probe the midpoints of the merged
    // breakpoints
    let mut breaks: Vec<f64> = (0..=xs.len())
        .map(|k| k as f64 / xs.len() as f64)
        .chain((0..=ys.len()).map(|k| k as f64 / ys.len() as f64))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut sup: f64 = 0.0;
    for w in breaks.windows(2) {
        let t = 0.5 * (w[0] + w[1]);
        sup = sup.max((qa(t) - qb(t)).abs());
    }
    0.5 * sup
}

/// Net on the sphere family at `params`, its projection to the limit
/// hemisphere, both distance matrices, and the distortion over pairs.
pub fn distortion_projection(
    params: &WarpParams,
    epsilon: f64,
    opt: &SweepOptions,
) -> Result<DistortionReport> {
    let sphere = MetricSpec::SphereDwp(*params);
    let build = build_net_internal(&sphere, epsilon, opt.seed, &opt.net)?;
    let mat_a = &build.matrix;
    let n_pts = build.net.points.len();

    // project: (r, alpha, beta) -> (phi = r, beta), snapped onto the
    // hemisphere probe grid (equator images land on the first interior row)
    let hemisphere = MetricSpec::LimitHemisphere { n: params.n };
    let backend = backend_for(&hemisphere, &opt.net)?;
    let NetBackend::Plane(grid) = &backend else {
        return Err(Error::Domain("hemisphere backend must be planar".into()));
    };
    let proj_nodes: Vec<u32> = build
        .net
        .points
        .iter()
        .map(|p| {
            let ReducedPoint::Sphere { r, beta, .. } = *p else {
                unreachable!()
            };
            let i = ((r - grid.rho.lo) / grid.rho.h()).round().max(0.0) as usize;
            let j = ((beta - grid.ang.lo) / grid.ang.h()).round().max(0.0) as usize;
            grid.node(i.min(grid.rho.n - 1), j.min(grid.ang.n - 1))
        })
        .collect();

    let mut unique: Vec<u32> = proj_nodes.clone();
    unique.sort_unstable();
    unique.dedup();
    let fields: Vec<Vec<f64>> = par::map_slice(&unique, |&node| grid.field(node));
    let index_of = |node: u32| unique.binary_search(&node).unwrap();

    let mut mat_b = DistanceMatrix::zeros(n_pts, epsilon * 1e-6);
    for i in 0..n_pts {
        let fi = &fields[index_of(proj_nodes[i])];
        for j in 0..i {
            mat_b.set(i, j, fi[proj_nodes[j] as usize]);
        }
    }

    let mut distortion = 0.0;
    let mut argmax = (0usize, 0usize);
    for i in 0..n_pts {
        for j in 0..i {
            let d = (mat_a.get(i, j) - mat_b.get(i, j)).abs();
            if d > distortion {
                distortion = d;
                argmax = (j, i);
            }
        }
    }

    Ok(DistortionReport {
        lambda: params.lambda,
        epsilon,
        distortion,
        argmax_pair: argmax,
        gh_upper: 0.5 * distortion + 2.0 * epsilon,
        gh_lower: gh_lower_bound(mat_a, &mat_b),
        net_size_a: n_pts,
        net_size_b: unique.len(),
    })
}

/// One distortion report per `lambda`, CSV-exportable.
pub fn convergence_sweep(
    n: u32,
    m: u32,
    lambdas: &[f64],
    epsilon: f64,
    opt: &SweepOptions,
) -> Result<Vec<DistortionReport>> {
    if lambdas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("lambda_list must be nondecreasing".into()));
    }
    let reports: Vec<Result<DistortionReport>> = par::map_slice(lambdas, |&lam| {
        let p = WarpParams::new(lam, m, n)?;
        distortion_projection(&p, epsilon, opt)
    });
    reports.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_matrices_have_zero_bound() {
        let mut m = DistanceMatrix::zeros(3, 1e-9);
        m.set(0, 1, 1.0);
        m.set(0, 2, 2.0);
        m.set(1, 2, 1.5);
        assert_eq!(gh_lower_bound(&m, &m), 0.0);
    }

    #[test]
    fn point_versus_diameter_space() {
        let point = DistanceMatrix::zeros(1, 1e-9);
        let mut space = DistanceMatrix::zeros(2, 1e-9);
        space.set(0, 1, 3.0);
        let b = gh_lower_bound(&point, &space);
        assert!((b - 1.5).abs() < 1e-12, "bound = {b}");
    }

    #[test]
    fn lower_bound_is_lipschitz_under_pairing() {
        // matrices related by a correspondence with discrepancy <= 0.1
        let mut a = DistanceMatrix::zeros(3, 1e-9);
        let mut b = DistanceMatrix::zeros(3, 1e-9);
        a.set(0, 1, 1.0);
        a.set(0, 2, 2.0);
        a.set(1, 2, 1.2);
        b.set(0, 1, 1.1);
        b.set(0, 2, 1.95);
        b.set(1, 2, 1.25);
        assert!(gh_lower_bound(&a, &b) <= 0.05 + 1e-12);
    }

    #[test]
    fn small_distortion_run() {
        let p = WarpParams::new(1.0, 8, 2).unwrap();
        let opt = SweepOptions {
            net: NetOptions {
                sphere_res: 12,
                plane_res: 48,
                ..Default::default()
            },
            seed: 42,
        };
        let rep = distortion_projection(&p, 1.0, &opt).unwrap();
        assert!(rep.distortion.is_finite() && rep.distortion >= 0.0);
        assert!(rep.gh_lower <= rep.gh_upper + 2.0 * rep.epsilon + 1e-12);
        assert!(rep.net_size_b <= rep.net_size_a);
    }
}
