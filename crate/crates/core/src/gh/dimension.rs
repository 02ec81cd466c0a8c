//! Covering-number dimension probes.
//!
//! For each epsilon, the region is greedily covered by metric balls grown by
//! Dijkstra on an implicit anisotropic grid (only visited nodes are stored),
//! and the least-squares slope of `log N(eps)` against `log(1/eps)` is the
//! dimension estimate. The equator band of the limit hemisphere (and the
//! singular line of the Grushin halfplane) needs a very fine angular pitch:
//! an eps-ball centered on the boundary spans only about `2 (eps/C)^2` in
//! the angular coordinate (`C = sqrt(2 pi)` for `alpha = 1`), so the pitch
//! adapts to the smallest epsilon probed.

use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::geodesics::oracle::stencil_2d;
use crate::geodesics::{Chart, MetricSpec};

#[derive(Debug, Clone, Copy)]
pub enum ProbeRegion {
    /// Band along the singular boundary: `rho <= height`.
    EquatorBand { height: f64 },
    /// Metric ball around an interior chart point.
    InteriorBall { center: (f64, f64), radius: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeOptions {
    /// Stencil order of the implicit grid.
    pub stencil: usize,
    /// Cells per smallest epsilon along the radial axis.
    pub radial_cells: usize,
    /// Cells per smallest ball extent along the angular axis.
    pub angular_cells: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            stencil: 3,
            radial_cells: 10,
            angular_cells: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProbeResult {
    /// Least-squares slope of `log N` vs `log(1/eps)`.
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the fit in log space.
    pub residual: f64,
    /// `false` when the fit residual exceeds 0.2.
    pub reliable: bool,
    pub counts: Vec<(f64, usize)>,
}

/// Which fiber of the chart the probe plane uses; the sphere family probes
/// its totally geodesic `(r, beta)` slice.
fn probe_fiber(spec: &MetricSpec) -> usize {
    match spec {
        MetricSpec::SphereDwp(_) => 1,
        _ => 0,
    }
}

struct ImplicitGrid {
    chart: Chart,
    fiber: usize,
    rho_lo: f64,
    h_rho: f64,
    n_rho: i64,
    ang_lo: f64,
    h_ang: f64,
    n_ang: i64,
    stencil: Vec<(i32, i32)>,
}

impl ImplicitGrid {
    fn point(&self, i: i64, j: i64) -> (f64, f64) {
        (self.rho_lo + self.h_rho * i as f64, self.ang_lo + self.h_ang * j as f64)
    }

    fn key(&self, i: i64, j: i64) -> i64 {
        i * self.n_ang + j
    }

    fn seg(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let dr = b.0 - a.0;
        let da = b.1 - a.1;
        let w = |r: f64| self.chart.w(self.fiber, r);
        let ds = |wv: f64| (dr * dr + wv * wv * da * da).sqrt();
        (ds(w(a.0)) + 4.0 * ds(w(0.5 * (a.0 + b.0))) + ds(w(b.0))) / 6.0
    }

    /// Nodes within metric distance `radius` of node `(i, j)`.
    fn ball(&self, i0: i64, j0: i64, radius: f64) -> Vec<(i64, i64)> {
        #[derive(PartialEq)]
        struct Item {
            d: f64,
            key: i64,
            ij: (i64, i64),
        }
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> std::cmp::Ordering {
                o.d.total_cmp(&self.d).then(o.key.cmp(&self.key))
            }
        }
        let mut dist: HashMap<i64, f64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        let k0 = self.key(i0, j0);
        dist.insert(k0, 0.0);
        heap.push(Item { d: 0.0, key: k0, ij: (i0, j0) });
        let mut out = Vec::new();
        while let Some(Item { d, key, ij }) = heap.pop() {
            if d > *dist.get(&key).unwrap_or(&f64::INFINITY) {
                continue;
            }
            if d > radius {
                break;
            }
            out.push(ij);
            let (i, j) = ij;
            let p = self.point(i, j);
            for &(di, dj) in &self.stencil {
                let ni = i + di as i64;
                let nj = j + dj as i64;
                if ni < 0 || nj < 0 || ni >= self.n_rho || nj >= self.n_ang {
                    continue;
                }
                let nd = d + self.seg(p, self.point(ni, nj));
                if nd <= radius {
                    let nk = self.key(ni, nj);
                    let cur = dist.entry(nk).or_insert(f64::INFINITY);
                    if nd < *cur {
                        *cur = nd;
                        heap.push(Item { d: nd, key: nk, ij: (ni, nj) });
                    }
                }
            }
        }
        out
    }
}

/// Greedy covering number of `region` at radius `eps`.
fn covering_number(grid: &ImplicitGrid, region: &[(i64, i64)], eps: f64) -> usize {
    let mut index: HashMap<i64, usize> = HashMap::with_capacity(region.len());
    for (idx, &(i, j)) in region.iter().enumerate() {
        index.insert(grid.key(i, j), idx);
    }
    let mut covered = vec![false; region.len()];
    let mut count = 0usize;
    for (idx, &(i, j)) in region.iter().enumerate() {
        if covered[idx] {
            continue;
        }
        count += 1;
        for (bi, bj) in grid.ball(i, j, eps) {
            if let Some(&ridx) = index.get(&grid.key(bi, bj)) {
                covered[ridx] = true;
            }
        }
    }
    count
}

/// Log-log slope of the greedy covering number over a decreasing epsilon
/// ladder.
pub fn dimension_probe(
    spec: &MetricSpec,
    region: &ProbeRegion,
    eps_list: &[f64],
    opt: &ProbeOptions,
) -> Result<ProbeResult> {
    spec.validate()?;
    if eps_list.len() < 3 {
        return Err(Error::Domain("need at least 3 epsilon values".into()));
    }
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Domain("epsilon_list must be strictly decreasing".into()));
    }
    let eps_min = *eps_list.last().unwrap();
    let eps_max = eps_list[0];
    let chart = spec.chart();
    let fiber = probe_fiber(spec);

    // chart-specific angular span and scale constant of the boundary metric
    let (ang_span, rho_cap) = match spec {
        MetricSpec::SphereDwp(_) | MetricSpec::LimitHemisphere { .. } => {
            (std::f64::consts::PI, std::f64::consts::FRAC_PI_2)
        }
        MetricSpec::GrushinHalfplane { .. } => (std::f64::consts::PI, f64::INFINITY),
    };

    let (grid, region_nodes) = match *region {
        ProbeRegion::EquatorBand { height } => {
            if matches!(spec, MetricSpec::SphereDwp(_)) {
                return Err(Error::Domain(
                    "the sphere family has no singular boundary; probe an interior ball".into(),
                ));
            }
            if height <= 0.0 {
                return Err(Error::Domain("band height must be positive".into()));
            }
            // sqrt-scaling along the boundary: ball extent ~ 2 (eps/C)^2
            let c_scale = (2.0 * std::f64::consts::PI).sqrt();
            let min_extent = 2.0 * (eps_min / c_scale).powi(2);
            let h_ang = min_extent / opt.angular_cells as f64;
            let h_rho = eps_min / opt.radial_cells as f64;
            let rho_hi = (height + 1.3 * eps_max).min(rho_cap);
            let n_rho = (rho_hi / h_rho).ceil() as i64;
            let n_ang = (ang_span / h_ang).ceil() as i64;
            let grid = ImplicitGrid {
                chart,
                fiber,
                rho_lo: h_rho,
                h_rho,
                n_rho,
                ang_lo: 0.0,
                h_ang,
                n_ang,
                stencil: stencil_2d(opt.stencil),
            };
            let band_rows = ((height - grid.rho_lo) / h_rho).floor().max(0.0) as i64 + 1;
            // keep the region a manageable list: subsample rows if needed
            let mut nodes = Vec::new();
            for i in 0..band_rows.min(grid.n_rho) {
                for j in 0..grid.n_ang {
                    nodes.push((i, j));
                }
            }
            if nodes.len() > 40_000_000 {
                return Err(Error::Budget(format!("band region of {} nodes", nodes.len())));
            }
            (grid, nodes)
        }
        ProbeRegion::InteriorBall { center, radius } => {
            if radius <= 0.0 {
                return Err(Error::Domain("ball radius must be positive".into()));
            }
            let h = eps_min / opt.radial_cells as f64;
            let rho_hi = (center.0 + radius + 1.2 * eps_max).min(rho_cap);
            let rho_lo = (center.0 - radius - 1.2 * eps_max).max(h);
            let n_rho = ((rho_hi - rho_lo) / h).ceil() as i64 + 1;
            let n_ang = (ang_span / h).ceil() as i64 + 1;
            let grid = ImplicitGrid {
                chart,
                fiber,
                rho_lo,
                h_rho: h,
                n_rho,
                ang_lo: 0.0,
                h_ang: h,
                n_ang,
                stencil: stencil_2d(opt.stencil),
            };
            let ci = ((center.0 - grid.rho_lo) / grid.h_rho).round() as i64;
            let cj = ((center.1 - grid.ang_lo) / grid.h_ang).round() as i64;
            let nodes = grid.ball(ci.max(0), cj.max(0), radius);
            (grid, nodes)
        }
    };

    let mut counts = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        counts.push((eps, covering_number(&grid, &region_nodes, eps)));
    }

    // least squares in log space
    let xs: Vec<f64> = counts.iter().map(|&(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::NonConvergence("degenerate epsilon ladder".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(ProbeResult {
        slope,
        intercept,
        residual,
        reliable: residual <= 0.2,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_ball_of_the_hemisphere_is_two_dimensional() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let region = ProbeRegion::InteriorBall {
            center: (0.9, 1.2),
            radius: 0.45,
        };
        let res = dimension_probe(
            &spec,
            &region,
            &[0.24, 0.12, 0.06],
            &ProbeOptions {
                radial_cells: 6,
                angular_cells: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            (res.slope - 2.0).abs() < 0.45,
            "slope = {}, counts = {:?}",
            res.slope,
            res.counts
        );
    }

    #[test]
    fn probes_validate_input() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let region = ProbeRegion::EquatorBand { height: 0.02 };
        assert!(dimension_probe(&spec, &region, &[0.2, 0.1], &ProbeOptions::default()).is_err());
        assert!(dimension_probe(&spec, &region, &[0.1, 0.2, 0.3], &ProbeOptions::default()).is_err());
        let sphere = MetricSpec::SphereDwp(crate::params::WarpParams::new(1.0, 8, 2).unwrap());
        assert!(dimension_probe(&sphere, &region, &[0.2, 0.1, 0.05], &ProbeOptions::default()).is_err());
    }
}
