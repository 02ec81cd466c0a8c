//! Brute-force distance oracle: Dijkstra on a grid graph over the chart.
//!
//! Edges connect each node to its primitive-offset neighbors up to a stencil
//! order, weighted by Simpson quadrature of the metric along the straight
//! coordinate segment. Graph distances converge to the true distance from
//! above as the resolution grows, up to the stencil's directional
//! quantization (worst-case `sec(half-gap)`, about 0.5% at order 5 in 2-D).
//! Endpoints are joined to nearby grid nodes by exact metric segments, so no
//! snapping error enters.
//!
//! The sphere variant's chart is three-dimensional; pairs with a vanishing
//! separation in one fiber are solved exactly on the corresponding totally
//! geodesic 2-D slice, generic pairs on a capped-resolution 3-D grid.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Chart, MetricSpec, ReducedPoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Nodes per axis (2-D charts). 3-D grids cap this to stay in budget.
    pub resolution: usize,
    /// Stencil order for 2-D grids (max offset per axis).
    pub stencil2: usize,
    /// Stencil order for 3-D grids.
    pub stencil3: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            resolution: 1024,
            stencil2: 5,
            stencil3: 2,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn stencil_2d(order: usize) -> Vec<(i32, i32)> {
    let k = order as i32;
    let mut v = Vec::new();
    for dx in -k..=k {
        for dy in -k..=k {
            if (dx, dy) == (0, 0) {
                continue;
            }
            if gcd(dx as i64, dy as i64) == 1 {
                v.push((dx, dy));
            }
        }
    }
    v
}

fn stencil_3d(order: usize) -> Vec<(i32, i32, i32)> {
    let k = order as i32;
    let mut v = Vec::new();
    for dx in -k..=k {
        for dy in -k..=k {
            for dz in -k..=k {
                if (dx, dy, dz) == (0, 0, 0) {
                    continue;
                }
                if gcd(gcd(dx as i64, dy as i64), dz as i64) == 1 {
                    v.push((dx, dy, dz));
                }
            }
        }
    }
    v
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn h(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + self.h() * i as f64
        }
    }
    fn nearest(&self, x: f64) -> usize {
        (((x - self.lo) / self.h()).round() as i64).clamp(0, self.n as i64 - 1) as usize
    }
}

struct HeapItem {
    d: f64,
    node: u32,
}

impl PartialEq for HeapItem {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.node == o.node
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        // min-heap by distance, node index breaks ties canonically
        o.d.total_cmp(&self.d).then(o.node.cmp(&self.node))
    }
}

/// A 2-D grid over one radial axis and one angular axis of a chart.
pub(crate) struct Grid2 {
    pub chart: Chart,
    pub fiber: usize,
    pub rho: Axis,
    pub ang: Axis,
    /// warp values at half-steps of the radial axis: index `k` holds
    /// `w(rho.lo + k h/2)`, `k = 0 .. 2(n-1)`.
    w_half: Vec<f64>,
    stencil: Vec<(i32, i32)>,
}

impl Grid2 {
    pub fn new(chart: Chart, fiber: usize, rho: Axis, ang: Axis, stencil_order: usize) -> Result<Self> {
        let nodes = rho.n * ang.n;
        if nodes > 80_000_000 {
            return Err(Error::Budget(format!("grid of {nodes} nodes exceeds the budget")));
        }
        let mut w_half = Vec::with_capacity(2 * rho.n - 1);
        for k in 0..(2 * rho.n - 1) {
            let x = rho.lo + rho.h() * 0.5 * k as f64;
            w_half.push(chart.w(fiber, x.min(rho.hi)));
        }
        Ok(Self {
            chart,
            fiber,
            rho,
            ang,
            w_half,
            stencil: stencil_2d(stencil_order),
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.rho.n * self.ang.n
    }

    pub fn node(&self, i: usize, j: usize) -> u32 {
        (i * self.ang.n + j) as u32
    }

    pub fn coords(&self, node: u32) -> (usize, usize) {
        let n = node as usize;
        (n / self.ang.n, n % self.ang.n)
    }

    pub fn point(&self, node: u32) -> (f64, f64) {
        let (i, j) = self.coords(node);
        (self.rho.x(i), self.ang.x(j))
    }

    /// Straight-segment length from `(r0, a0)` to `(r1, a1)` by Simpson.
    pub fn seg_len(&self, r0: f64, a0: f64, r1: f64, a1: f64) -> f64 {
        let da = a1 - a0;
        let dr = r1 - r0;
        let ds = |w: f64| (dr * dr + w * w * da * da).sqrt();
        let w0 = self.chart.w(self.fiber, r0);
        let wm = self.chart.w(self.fiber, 0.5 * (r0 + r1));
        let w1 = self.chart.w(self.fiber, r1);
        (ds(w0) + 4.0 * ds(wm) + ds(w1)) / 6.0
    }

    #[inline]
    fn edge_len(&self, i: usize, di: i32, dj: i32) -> f64 {
        let dr = di as f64 * self.rho.h();
        let da = dj as f64 * self.ang.h();
        let ds = |w: f64| (dr * dr + w * w * da * da).sqrt();
        let k0 = 2 * i;
        let k1 = (2 * (i as i64) + di as i64) as usize;
        let k2 = (2 * (i as i64) + 2 * di as i64) as usize;
        (ds(self.w_half[k0]) + 4.0 * ds(self.w_half[k1]) + ds(self.w_half[k2])) / 6.0
    }

    /// Dijkstra from seeded sources; stops early once `target`'s best value
    /// cannot improve. Returns the full field (unreached = inf) and, when a
    /// target is given, the best value through its local patch.
    fn run(&self, seeds: &[(u32, f64)], target: Option<&[(u32, f64)]>) -> (Vec<f64>, f64) {
        let mut dist = vec![f64::INFINITY; self.n_nodes()];
        let mut heap = BinaryHeap::new();
        for &(node, d0) in seeds {
            if d0 < dist[node as usize] {
                dist[node as usize] = d0;
                heap.push(HeapItem { d: d0, node });
            }
        }
        let mut target_cost = vec![f64::INFINITY; self.n_nodes()];
        let mut best_target = f64::INFINITY;
        if let Some(t) = target {
            for &(node, c) in t {
                target_cost[node as usize] = c;
            }
        }
        while let Some(HeapItem { d, node }) = heap.pop() {
            if d > dist[node as usize] {
                continue;
            }
            if target.is_some() {
                let tc = target_cost[node as usize];
                if tc.is_finite() {
                    best_target = best_target.min(d + tc);
                }
                if d > best_target {
                    break;
                }
            }
            let (i, j) = self.coords(node);
            for &(di, dj) in &self.stencil {
                let ni = i as i64 + di as i64;
                let nj = j as i64 + dj as i64;
                if ni < 0 || nj < 0 || ni >= self.rho.n as i64 || nj >= self.ang.n as i64 {
                    continue;
                }
                let nd = d + self.edge_len(i, di, dj);
                let nn = self.node(ni as usize, nj as usize);
                if nd < dist[nn as usize] {
                    dist[nn as usize] = nd;
                    heap.push(HeapItem { d: nd, node: nn });
                }
            }
        }
        (dist, best_target)
    }

    /// Full distance field from a grid node.
    pub fn field(&self, source: u32) -> Vec<f64> {
        self.run(&[(source, 0.0)], None).0
    }

    /// Distance between two arbitrary chart points, joining each to the
    /// grid nodes within one stencil radius by exact metric segments.
    pub fn point_distance(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        let seeds = self.patch(p);
        let tpatch = self.patch(q);
        // direct segment, in case p and q are closer than the grid can see
        let direct = self.seg_len(p.0, p.1, q.0, q.1);
        let (_, through) = self.run(&seeds, Some(&tpatch));
        through.min(direct)
    }

    fn patch(&self, p: (f64, f64)) -> Vec<(u32, f64)> {
        let k = self.stencil.iter().map(|&(a, b)| a.abs().max(b.abs())).max().unwrap() as i64;
        let ci = self.rho.nearest(p.0) as i64;
        let cj = self.ang.nearest(p.1) as i64;
        let mut v = Vec::new();
        for di in -k..=k {
            for dj in -k..=k {
                let i = ci + di;
                let j = cj + dj;
                if i < 0 || j < 0 || i >= self.rho.n as i64 || j >= self.ang.n as i64 {
                    continue;
                }
                let (r, a) = (self.rho.x(i as usize), self.ang.x(j as usize));
                v.push((self.node(i as usize, j as usize), self.seg_len(p.0, p.1, r, a)));
            }
        }
        v
    }
}

/// A 3-D grid over the sphere chart `(r, alpha, beta)`.
pub(crate) struct Grid3 {
    pub chart: Chart,
    pub rho: Axis,
    pub a0: Axis,
    pub a1: Axis,
    w0_half: Vec<f64>,
    w1_half: Vec<f64>,
    stencil: Vec<(i32, i32, i32)>,
}

impl Grid3 {
    pub fn new(chart: Chart, rho: Axis, a0: Axis, a1: Axis, stencil_order: usize) -> Result<Self> {
        let nodes = rho.n * a0.n * a1.n;
        if nodes > 8_000_000 {
            return Err(Error::Budget(format!("3-D grid of {nodes} nodes exceeds the budget")));
        }
        let mut w0_half = Vec::with_capacity(2 * rho.n - 1);
        let mut w1_half = Vec::with_capacity(2 * rho.n - 1);
        for k in 0..(2 * rho.n - 1) {
            let x = (rho.lo + rho.h() * 0.5 * k as f64).min(rho.hi);
            w0_half.push(chart.w(0, x));
            w1_half.push(chart.w(1, x));
        }
        Ok(Self {
            chart,
            rho,
            a0,
            a1,
            w0_half,
            w1_half,
            stencil: stencil_3d(stencil_order),
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.rho.n * self.a0.n * self.a1.n
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> u32 {
        ((i * self.a0.n + j) * self.a1.n + k) as u32
    }

    pub fn coords(&self, node: u32) -> (usize, usize, usize) {
        let n = node as usize;
        let k = n % self.a1.n;
        let rest = n / self.a1.n;
        (rest / self.a0.n, rest % self.a0.n, k)
    }

    pub fn point(&self, node: u32) -> (f64, f64, f64) {
        let (i, j, k) = self.coords(node);
        (self.rho.x(i), self.a0.x(j), self.a1.x(k))
    }

    pub fn seg_len(&self, p: (f64, f64, f64), q: (f64, f64, f64)) -> f64 {
        let dr = q.0 - p.0;
        let d0 = q.1 - p.1;
        let d1 = q.2 - p.2;
        let ds = |w0: f64, w1: f64| (dr * dr + w0 * w0 * d0 * d0 + w1 * w1 * d1 * d1).sqrt();
        let at = |r: f64| (self.chart.w(0, r), self.chart.w(1, r));
        let (u0, v0) = at(p.0);
        let (um, vm) = at(0.5 * (p.0 + q.0));
        let (u1, v1) = at(q.0);
        (ds(u0, v0) + 4.0 * ds(um, vm) + ds(u1, v1)) / 6.0
    }

    #[inline]
    fn edge_len(&self, i: usize, di: i32, dj: i32, dk: i32) -> f64 {
        let dr = di as f64 * self.rho.h();
        let d0 = dj as f64 * self.a0.h();
        let d1 = dk as f64 * self.a1.h();
        let ds = |w0: f64, w1: f64| (dr * dr + w0 * w0 * d0 * d0 + w1 * w1 * d1 * d1).sqrt();
        let k0 = 2 * i;
        let k1 = (2 * i as i64 + di as i64) as usize;
        let k2 = (2 * i as i64 + 2 * di as i64) as usize;
        (ds(self.w0_half[k0], self.w1_half[k0])
            + 4.0 * ds(self.w0_half[k1], self.w1_half[k1])
            + ds(self.w0_half[k2], self.w1_half[k2]))
            / 6.0
    }

    fn run(&self, seeds: &[(u32, f64)], target: Option<&[(u32, f64)]>) -> (Vec<f64>, f64) {
        let mut dist = vec![f64::INFINITY; self.n_nodes()];
        let mut heap = BinaryHeap::new();
        for &(node, d0) in seeds {
            if d0 < dist[node as usize] {
                dist[node as usize] = d0;
                heap.push(HeapItem { d: d0, node });
            }
        }
        let mut target_cost: std::collections::HashMap<u32, f64> = std::collections::HashMap::new();
        if let Some(t) = target {
            for &(node, c) in t {
                let e = target_cost.entry(node).or_insert(f64::INFINITY);
                *e = e.min(c);
            }
        }
        let mut best_target = f64::INFINITY;
        while let Some(HeapItem { d, node }) = heap.pop() {
            if d > dist[node as usize] {
                continue;
            }
            if target.is_some() {
                if let Some(&tc) = target_cost.get(&node) {
                    best_target = best_target.min(d + tc);
                }
                if d > best_target {
                    break;
                }
            }
            let (i, j, k) = self.coords(node);
            for &(di, dj, dk) in &self.stencil {
                let ni = i as i64 + di as i64;
                let nj = j as i64 + dj as i64;
                let nk = k as i64 + dk as i64;
                if ni < 0
                    || nj < 0
                    || nk < 0
                    || ni >= self.rho.n as i64
                    || nj >= self.a0.n as i64
                    || nk >= self.a1.n as i64
                {
                    continue;
                }
                let nd = d + self.edge_len(i, di, dj, dk);
                let nn = self.node(ni as usize, nj as usize, nk as usize);
                if nd < dist[nn as usize] {
                    dist[nn as usize] = nd;
                    heap.push(HeapItem { d: nd, node: nn });
                }
            }
        }
        (dist, best_target)
    }

    pub fn field(&self, source: u32) -> Vec<f64> {
        self.run(&[(source, 0.0)], None).0
    }

    pub fn point_distance(&self, p: (f64, f64, f64), q: (f64, f64, f64)) -> f64 {
        let seeds = self.patch(p);
        let tpatch = self.patch(q);
        let direct = self.seg_len(p, q);
        let (_, through) = self.run(&seeds, Some(&tpatch));
        through.min(direct)
    }

    fn patch(&self, p: (f64, f64, f64)) -> Vec<(u32, f64)> {
        let kmax = self
            .stencil
            .iter()
            .map(|&(a, b, c)| a.abs().max(b.abs()).max(c.abs()))
            .max()
            .unwrap() as i64;
        let ci = self.rho.nearest(p.0) as i64;
        let cj = self.a0.nearest(p.1) as i64;
        let ck = self.a1.nearest(p.2) as i64;
        let mut v = Vec::new();
        for di in -kmax..=kmax {
            for dj in -kmax..=kmax {
                for dk in -kmax..=kmax {
                    let (i, j, k) = (ci + di, cj + dj, ck + dk);
                    if i < 0
                        || j < 0
                        || k < 0
                        || i >= self.rho.n as i64
                        || j >= self.a0.n as i64
                        || k >= self.a1.n as i64
                    {
                        continue;
                    }
                    let gp = (self.rho.x(i as usize), self.a0.x(j as usize), self.a1.x(k as usize));
                    v.push((self.node(i as usize, j as usize, k as usize), self.seg_len(p, gp)));
                }
            }
        }
        v
    }
}

/// Grid window for a Grushin pair: minimizing arcs rise above the endpoints
/// (apex about `sqrt(spread in y)` for `alpha = 1`) and stay between their
/// `y` values.
fn grushin_window(p: (f64, f64), q: (f64, f64)) -> (Axis, Axis) {
    let dy = (p.1 - q.1).abs();
    let xmax = p.0.max(q.0);
    let xmin = p.0.min(q.0);
    let x_hi = xmax * 1.3 + dy.sqrt() + 0.5 * dy + 0.2;
    let x_lo = (xmin * 0.7).min(xmin - 0.05).max(1e-4);
    let pad = 0.02 * (dy + 1.0);
    let y_lo = p.1.min(q.1) - pad;
    let y_hi = p.1.max(q.1) + pad;
    (
        Axis { lo: x_lo, hi: x_hi, n: 0 },
        Axis { lo: y_lo, hi: y_hi, n: 0 },
    )
}

/// Shortest grid-graph path between two points of the chart.
pub fn oracle_distance(
    spec: &MetricSpec,
    p: &ReducedPoint,
    q: &ReducedPoint,
    resolution: usize,
) -> Result<f64> {
    oracle_distance_with(
        spec,
        p,
        q,
        &OracleOptions {
            resolution,
            ..Default::default()
        },
    )
}

pub fn oracle_distance_with(
    spec: &MetricSpec,
    p: &ReducedPoint,
    q: &ReducedPoint,
    opt: &OracleOptions,
) -> Result<f64> {
    spec.validate()?;
    if opt.resolution < 64 {
        return Err(Error::Domain(format!(
            "oracle resolution must be >= 64, got {}",
            opt.resolution
        )));
    }
    let chart = spec.chart();
    let res = opt.resolution;
    match (spec, p, q) {
        (
            MetricSpec::GrushinHalfplane { .. },
            ReducedPoint::Halfplane { x: x0, y: y0 },
            ReducedPoint::Halfplane { x: x1, y: y1 },
        ) => {
            if *x0 <= 0.0 || *x1 <= 0.0 {
                return Err(Error::Domain("oracle endpoints must be interior (x > 0)".into()));
            }
            let (mut ax, mut ay) = grushin_window((*x0, *y0), (*x1, *y1));
            ax.n = res;
            ay.n = res;
            if (ay.hi - ay.lo) < 1e-9 {
                ay.lo -= 1e-3;
                ay.hi += 1e-3;
            }
            let g = Grid2::new(chart, 0, ax, ay, opt.stencil2)?;
            Ok(g.point_distance((*x0, *y0), (*x1, *y1)))
        }
        (
            MetricSpec::LimitHemisphere { .. },
            ReducedPoint::Hemisphere { phi: f0, beta: b0 },
            ReducedPoint::Hemisphere { phi: f1, beta: b1 },
        ) => {
            if *f0 <= 0.0 || *f1 <= 0.0 {
                return Err(Error::Domain("oracle endpoints must be interior (phi > 0)".into()));
            }
            let lo = (f0.min(*f1) * 0.8).max(2e-4);
            let rho = Axis { lo, hi: std::f64::consts::FRAC_PI_2, n: res };
            let db = chart.separation(0, *b0, *b1);
            let ang = Axis { lo: 0.0, hi: std::f64::consts::PI, n: res };
            let g = Grid2::new(chart, 0, rho, ang, opt.stencil2)?;
            Ok(g.point_distance((*f0, 0.0), (*f1, db)))
        }
        (
            MetricSpec::SphereDwp(_),
            ReducedPoint::Sphere { r: r0, alpha: al0, beta: be0 },
            ReducedPoint::Sphere { r: r1, alpha: al1, beta: be1 },
        ) => {
            let da = chart.separation(0, *al0, *al1);
            let db = chart.separation(1, *be0, *be1);
            let rho = Axis { lo: 0.0, hi: std::f64::consts::FRAC_PI_2, n: res };
            let ang = Axis { lo: 0.0, hi: std::f64::consts::PI, n: res };
            if da < 1e-12 || db < 1e-12 {
                // totally geodesic slice: only the fiber with separation acts
                let (fiber, sep) = if da < 1e-12 { (1, db) } else { (0, da) };
                let g = Grid2::new(chart, fiber, rho, ang, opt.stencil2)?;
                Ok(g.point_distance((*r0, 0.0), (*r1, sep)))
            } else {
                // generic pair: capped 3-D grid
                let res3 = res.min(128);
                let rho3 = Axis { lo: 0.0, hi: std::f64::consts::FRAC_PI_2, n: res3 };
                let a0 = Axis { lo: 0.0, hi: std::f64::consts::PI, n: res3 };
                let a1 = Axis { lo: 0.0, hi: std::f64::consts::PI, n: res3 };
                let g = Grid3::new(chart, rho3, a0, a1, opt.stencil3)?;
                Ok(g.point_distance((*r0, 0.0, 0.0), (*r1, da, db)))
            }
        }
        _ => Err(Error::Domain("point variants do not match the metric spec".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::WarpParams;

    #[test]
    fn stencils_are_primitive() {
        let s = stencil_2d(5);
        assert!(s.contains(&(1, 0)) && s.contains(&(0, -1)) && s.contains(&(5, 2)));
        assert!(!s.contains(&(2, 2)) && !s.contains(&(4, 2)));
        let s3 = stencil_3d(2);
        assert!(s3.contains(&(1, 1, 1)) && s3.contains(&(2, 1, 0)));
        assert!(!s3.contains(&(2, 2, 2)));
    }

    #[test]
    fn grushin_axis_segment_is_exact() {
        let spec = MetricSpec::GrushinHalfplane { alpha: 1.0 };
        let p = ReducedPoint::Halfplane { x: 1.0, y: 0.0 };
        let q = ReducedPoint::Halfplane { x: 2.0, y: 0.0 };
        let d = oracle_distance(&spec, &p, &q, 512).unwrap();
        assert!((d - 1.0).abs() < 2e-3, "d = {d}");
    }

    #[test]
    fn refinement_never_increases_much() {
        let spec = MetricSpec::GrushinHalfplane { alpha: 1.0 };
        let p = ReducedPoint::Halfplane { x: 0.8, y: 0.0 };
        let q = ReducedPoint::Halfplane { x: 1.1, y: 0.9 };
        let d256 = oracle_distance(&spec, &p, &q, 256).unwrap();
        let d512 = oracle_distance(&spec, &p, &q, 512).unwrap();
        assert!(d512 <= d256 + 1e-6, "{d512} vs {d256}");
    }

    #[test]
    fn sphere_pole_to_pole_is_radial() {
        let spec = MetricSpec::SphereDwp(WarpParams::new(1.0, 8, 2).unwrap());
        let p = ReducedPoint::Sphere { r: 0.0, alpha: 0.0, beta: 0.7 };
        let q = ReducedPoint::Sphere { r: std::f64::consts::FRAC_PI_2, alpha: 0.4, beta: 0.0 };
        let d = oracle_distance(&spec, &p, &q, 512).unwrap();
        assert!(d <= std::f64::consts::FRAC_PI_2 + 5e-3, "d = {d}");
        assert!(d >= std::f64::consts::FRAC_PI_2 - 5e-3, "d = {d}");
    }

    #[test]
    fn rejects_coarse_resolution() {
        let spec = MetricSpec::GrushinHalfplane { alpha: 1.0 };
        let p = ReducedPoint::Halfplane { x: 1.0, y: 0.0 };
        let q = ReducedPoint::Halfplane { x: 2.0, y: 0.0 };
        assert!(oracle_distance(&spec, &p, &q, 32).is_err());
    }
}
