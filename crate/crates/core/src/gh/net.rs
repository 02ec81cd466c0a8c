//! Farthest-point sampling over a dense chart grid.
//!
//! The probe grid doubles as the distance backend: adding a net point runs
//! one Dijkstra sweep from it, which updates the running covering radius,
//! fills that point's row of the distance matrix against the earlier points,
//! and verifies coverage at the end. One sweep per net point, nothing else.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DistanceMatrix;
use crate::error::{Error, Result};
use crate::geodesics::oracle::{Axis, Grid2, Grid3};
use crate::geodesics::{MetricSpec, ReducedPoint};

#[derive(Debug, Clone, Copy)]
pub struct NetOptions {
    /// Grid nodes per axis for the 3-D sphere chart.
    pub sphere_res: usize,
    /// Grid nodes per axis for the 2-D charts.
    pub plane_res: usize,
    pub sphere_stencil: usize,
    pub plane_stencil: usize,
    /// Safety cap on the net size.
    pub max_points: usize,
}

impl Default for NetOptions {
    fn default() -> Self {
        Self {
            sphere_res: 26,
            plane_res: 192,
            sphere_stencil: 2,
            plane_stencil: 3,
            max_points: 4000,
        }
    }
}

/// An epsilon-net over one chart.
#[derive(Debug, Clone)]
pub struct NetSample {
    pub spec: MetricSpec,
    pub points: Vec<ReducedPoint>,
    pub epsilon: f64,
    pub covering_verified: bool,
    /// Final covering radius over the probe grid.
    pub covering_radius: f64,
    #[allow(dead_code)]
    pub(crate) nodes: Vec<u32>,
}

pub(crate) enum NetBackend {
    Sphere(Grid3),
    Plane(Grid2),
}

impl NetBackend {
    pub fn n_nodes(&self) -> usize {
        match self {
            NetBackend::Sphere(g) => g.n_nodes(),
            NetBackend::Plane(g) => g.n_nodes(),
        }
    }

    pub fn field(&self, source: u32) -> Vec<f64> {
        match self {
            NetBackend::Sphere(g) => g.field(source),
            NetBackend::Plane(g) => g.field(source),
        }
    }

    pub fn to_point(&self, node: u32) -> ReducedPoint {
        match self {
            NetBackend::Sphere(g) => {
                let (r, a, b) = g.point(node);
                ReducedPoint::Sphere { r, alpha: a, beta: b }
            }
            NetBackend::Plane(g) => {
                let (rho, ang) = g.point(node);
                match g.chart.spec {
                    MetricSpec::LimitHemisphere { .. } => {
                        ReducedPoint::Hemisphere { phi: rho, beta: ang }
                    }
                    MetricSpec::GrushinHalfplane { .. } => {
                        ReducedPoint::Halfplane { x: rho, y: ang }
                    }
                    MetricSpec::SphereDwp(_) => unreachable!("sphere uses the 3-D backend"),
                }
            }
        }
    }
}

pub(crate) fn backend_for(spec: &MetricSpec, opt: &NetOptions) -> Result<NetBackend> {
    spec.validate()?;
    match spec {
        MetricSpec::SphereDwp(_) => {
            let chart = spec.chart();
            let n = opt.sphere_res.max(8);
            let rho = Axis { lo: 0.0, hi: std::f64::consts::FRAC_PI_2, n };
            let a0 = Axis { lo: 0.0, hi: std::f64::consts::PI, n };
            let a1 = Axis { lo: 0.0, hi: std::f64::consts::PI, n };
            Ok(NetBackend::Sphere(Grid3::new(chart, rho, a0, a1, opt.sphere_stencil)?))
        }
        MetricSpec::LimitHemisphere { .. } => {
            let chart = spec.chart();
            let n = opt.plane_res.max(16);
            let h = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
            let rho = Axis { lo: h, hi: std::f64::consts::FRAC_PI_2, n };
            let ang = Axis { lo: 0.0, hi: std::f64::consts::PI, n };
            Ok(NetBackend::Plane(Grid2::new(chart, 0, rho, ang, opt.plane_stencil)?))
        }
        MetricSpec::GrushinHalfplane { .. } => {
            let chart = spec.chart();
            let n = opt.plane_res.max(16);
            let rho = Axis { lo: 0.02, hi: 1.5, n };
            let ang = Axis { lo: 0.0, hi: std::f64::consts::PI, n };
            Ok(NetBackend::Plane(Grid2::new(chart, 0, rho, ang, opt.plane_stencil)?))
        }
    }
}

pub(crate) struct NetBuild {
    pub net: NetSample,
    pub matrix: DistanceMatrix,
}

pub(crate) fn build_net_internal(
    spec: &MetricSpec,
    epsilon: f64,
    seed: u64,
    opt: &NetOptions,
) -> Result<NetBuild> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let backend = backend_for(spec, opt)?;
    let n_nodes = backend.n_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.gen_range(0..n_nodes) as u32;

    let mut nodes: Vec<u32> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new(); // rows[k][j] = d(node_k, node_j), j < k
    let mut running_min: Vec<f64> = vec![f64::INFINITY; n_nodes];
    let mut next = first;
    let radius;

    loop {
        let field = backend.field(next);
        let row: Vec<f64> = nodes.iter().map(|&nj| field[nj as usize]).collect();
        rows.push(row);
        nodes.push(next);
        for (rm, &f) in running_min.iter_mut().zip(field.iter()) {
            if f < *rm {
                *rm = f;
            }
        }
        // canonical argmax of the running covering radius
        let (mut arg, mut best) = (0usize, f64::NEG_INFINITY);
        for (i, &v) in running_min.iter().enumerate() {
            if v > best {
                best = v;
                arg = i;
            }
        }
        if best <= epsilon {
            radius = best;
            break;
        }
        if nodes.len() >= opt.max_points {
            return Err(Error::Budget(format!(
                "net exceeded {} points before reaching epsilon = {epsilon} (radius {best:.4})",
                opt.max_points
            )));
        }
        next = arg as u32;
    }

    let k = nodes.len();
    let mut matrix = DistanceMatrix::zeros(k, epsilon * 1e-6);
    for (i, row) in rows.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            matrix.set(i, j, d);
        }
    }
    let points = nodes.iter().map(|&nd| backend.to_point(nd)).collect();
    Ok(NetBuild {
        net: NetSample {
            spec: *spec,
            points,
            epsilon,
            covering_verified: radius <= epsilon,
            covering_radius: radius,
            nodes,
        },
        matrix,
    })
}

/// Farthest-point sampling until the covering radius over the probe grid
/// drops to `epsilon`. Deterministic for a given seed.
pub fn build_net(spec: &MetricSpec, epsilon: f64, seed: u64) -> Result<NetSample> {
    build_net_with(spec, epsilon, seed, &NetOptions::default())
}

pub fn build_net_with(
    spec: &MetricSpec,
    epsilon: f64,
    seed: u64,
    opt: &NetOptions,
) -> Result<NetSample> {
    Ok(build_net_internal(spec, epsilon, seed, opt)?.net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::WarpParams;

    #[test]
    fn hemisphere_net_covers() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let opt = NetOptions { plane_res: 96, ..Default::default() };
        let net = build_net_with(&spec, 0.2, 42, &opt).unwrap();
        assert!(net.covering_verified);
        assert!(net.points.len() >= 10 && net.points.len() <= 400, "size {}", net.points.len());
    }

    #[test]
    fn single_point_net_for_huge_epsilon() {
        let spec = MetricSpec::SphereDwp(WarpParams::new(1.0, 8, 2).unwrap());
        let opt = NetOptions { sphere_res: 14, ..Default::default() };
        let net = build_net_with(&spec, 3.2, 42, &opt).unwrap();
        assert_eq!(net.points.len(), 1);
        assert!(net.covering_verified);
    }

    #[test]
    fn same_seed_same_net() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let opt = NetOptions { plane_res: 64, ..Default::default() };
        let a = build_net_with(&spec, 0.4, 7, &opt).unwrap();
        let b = build_net_with(&spec, 0.4, 7, &opt).unwrap();
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn matrix_from_fps_is_valid() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let opt = NetOptions { plane_res: 64, ..Default::default() };
        let b = build_net_internal(&spec, 0.4, 7, &opt).unwrap();
        b.matrix.validate().unwrap();
        assert_eq!(b.matrix.size, b.net.points.len());
    }
}
