//! Arc-length integration of the reduced geodesic equations.
//!
//! With conserved angular momenta `c_i = w_i^2 d(ang_i)/ds`, the unit-speed
//! system is
//!
//! ```text
//! d(rho)/ds = sigma sqrt(Q(rho)),   Q = 1 - sum_i c_i^2 / w_i(rho)^2
//! d(ang_i)/ds = c_i / w_i(rho)^2
//! ```
//!
//! integrated by an embedded Fehlberg 4(5) pair. Turning points (`Q -> 0`)
//! are events: the radicand's root `rho*` is located and the trajectory is
//! advanced through it by the local quadratic model
//! `rho(s) = rho* + (k/4)(s - s*)^2`, `k = |Q'(rho*)|`, flipping `sigma`.
//! Collapsed fiber ends are crossed by reflection (`ang -> pi - ang` in the
//! collapsing separation) when the corresponding momentum vanishes; the
//! singular completion boundary stops the path.

use super::{Chart, MetricSpec, ReducedPoint};
use crate::error::{Error, Result};

/// One accepted integration node, with derivatives for dense output.
#[derive(Debug, Clone, Copy)]
pub struct PathSample {
    pub s: f64,
    pub rho: f64,
    pub ang: [f64; 2],
    pub drho: f64,
    pub dang: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub length: f64,
    pub samples: Vec<PathSample>,
    pub clairaut: (f64, f64),
    pub converged: bool,
    /// Path stopped on the singular completion boundary.
    pub hit_boundary: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct IvpOptions {
    pub tol: f64,
    pub max_len: f64,
}

/// Below this radicand value the analytic turning patch takes over.
const Q_SWITCH: f64 = 1e-8;
/// Radicand slope below which the orbit is treated as (near-)circular.
const K_FLOOR: f64 = 1e-10;
/// Momenta smaller than this are frozen to zero (degenerate fibers).
pub(crate) const C_FREEZE: f64 = 1e-9;

const MAX_STEPS: usize = 400_000;

pub(crate) struct Engine {
    pub chart: Chart,
    pub c: [f64; 2],
}

impl Engine {
    pub fn new(chart: Chart, mut c: [f64; 2]) -> Self {
        for ci in &mut c {
            if ci.abs() < C_FREEZE {
                *ci = 0.0;
            }
        }
        Self { chart, c }
    }

    pub fn q(&self, rho: f64) -> f64 {
        let mut q = 1.0;
        for i in 0..self.chart.nang() {
            if self.c[i] != 0.0 {
                let w = self.chart.w(i, rho);
                q -= (self.c[i] / w) * (self.c[i] / w);
            }
        }
        q
    }

    fn qprime(&self, rho: f64) -> f64 {
        let mut qp = 0.0;
        for i in 0..self.chart.nang() {
            if self.c[i] != 0.0 {
                let w = self.chart.w(i, rho);
                qp += 2.0 * self.c[i] * self.c[i] * self.chart.dw(i, rho) / (w * w * w);
            }
        }
        qp
    }

    fn gi(&self, i: usize, rho: f64) -> f64 {
        if self.c[i] == 0.0 {
            0.0
        } else {
            let w = self.chart.w(i, rho);
            self.c[i] / (w * w)
        }
    }

    fn rhs(&self, rho: f64, sigma: f64) -> [f64; 3] {
        [
            sigma * self.q(rho).max(0.0).sqrt(),
            self.gi(0, rho),
            self.gi(1, rho),
        ]
    }
}

struct State {
    s: f64,
    rho: f64,
    ang: [f64; 2],
    sigma: f64,
}

fn hermite(p0: f64, d0: f64, p1: f64, d1: f64, h: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + d0 * h * (t3 - 2.0 * t2 + t)
        + p1 * (-2.0 * t3 + 3.0 * t2)
        + d1 * h * (t3 - t2)
}

/// Root of `rho(t) = target` on a Hermite segment with a sign change.
fn hermite_root(p0: f64, d0: f64, p1: f64, d1: f64, h: f64, target: f64) -> f64 {
    let (mut a, mut b) = (0.0, 1.0);
    let fa = p0 - target;
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        let fm = hermite(p0, d0, p1, d1, h, mid) - target;
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

pub(crate) struct RawPath {
    pub samples: Vec<PathSample>,
    pub length: f64,
    pub converged: bool,
    pub hit_boundary: bool,
}

/// Locate the turning radius ahead of `rho` in direction `sigma` and return
/// it, or `None` when `Q` stays positive all the way to `limit`.
fn find_turning(eng: &Engine, rho: f64, sigma: f64, limit: f64) -> Option<f64> {
    let mut step = ((limit - rho).abs() * 1e-3).max(1e-9);
    let mut a = rho;
    loop {
        let b = a + sigma * step;
        let past_limit = if sigma > 0.0 { b >= limit } else { b <= limit };
        let probe = if past_limit { limit } else { b };
        if eng.q(probe) < 0.0 {
            // bisect in [a, probe]
            let (mut lo, mut hi) = (a, probe);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if eng.q(mid) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        if past_limit {
            return None;
        }
        a = probe;
        step *= 2.0;
    }
}

pub(crate) fn integrate(
    chart: &Chart,
    rho0: f64,
    ang0: [f64; 2],
    c: [f64; 2],
    sigma0: f64,
    opts: &IvpOptions,
) -> Result<RawPath> {
    let eng = Engine::new(*chart, c);
    let (chart_lo, chart_hi) = chart.rho_range();
    let q0 = eng.q(rho0);
    if q0 < -1e-9 {
        return Err(Error::NonAdmissible(format!(
            "c_alpha^2/w0^2 + c_beta^2/w1^2 exceeds 1 at the start (Q = {q0:.3e})"
        )));
    }

    let atol = (opts.tol / 10.0).max(1e-14);
    let mut st = State {
        s: 0.0,
        rho: rho0,
        ang: ang0,
        sigma: if sigma0 >= 0.0 { 1.0 } else { -1.0 },
    };
    let mut samples = Vec::with_capacity(256);
    let d0 = eng.rhs(st.rho, st.sigma);
    samples.push(PathSample {
        s: 0.0,
        rho: st.rho,
        ang: st.ang,
        drho: d0[0],
        dang: [d0[1], d0[2]],
    });

    let mut h: f64 = (opts.max_len / 16.0).min(0.01).max(1e-6);
    let mut converged = true;
    let mut hit_boundary = false;
    let mut circle_mode = false;

    let mut steps = 0usize;
    'outer: while st.s < opts.max_len {
        steps += 1;
        if steps > MAX_STEPS {
            converged = false;
            break;
        }

        if circle_mode {
            // near-critical orbit: rho is (to first order) constant
            let ds = opts.max_len - st.s;
            for i in 0..2 {
                st.ang[i] += eng.gi(i, st.rho) * ds;
            }
            st.s = opts.max_len;
            let d = eng.rhs(st.rho, 0.0);
            samples.push(PathSample {
                s: st.s,
                rho: st.rho,
                ang: st.ang,
                drho: 0.0,
                dang: [d[1], d[2]],
            });
            break;
        }

        // turning-point event
        let qcur = eng.q(st.rho);
        if qcur < Q_SWITCH {
            let qp = eng.qprime(st.rho);
            if qp.abs() < K_FLOOR {
                circle_mode = true;
                continue;
            }
            if st.sigma * qp > 0.0 {
                // moving away from the barrier; integrate normally below
            } else {
                let limit = if st.sigma > 0.0 {
                    if chart_hi.is_finite() { chart_hi } else { st.rho + opts.max_len + 1.0 }
                } else {
                    chart_lo
                };
                match find_turning(&eng, st.rho, st.sigma, limit) {
                    Some(rstar) => {
                        let k = eng.qprime(rstar).abs().max(K_FLOOR);
                        let ds_in = 2.0 * qcur.max(0.0).sqrt() / k;
                        if ds_in > 0.05 {
                            circle_mode = true;
                            continue;
                        }
                        // Simpson over the symmetric patch
                        let total = (2.0 * ds_in).max(1e-300);
                        let mut dang = [0.0f64; 2];
                        for i in 0..2 {
                            dang[i] = total / 6.0
                                * (eng.gi(i, st.rho) + 4.0 * eng.gi(i, rstar) + eng.gi(i, st.rho));
                        }
                        // apex sample
                        let mut apex_ang = st.ang;
                        for i in 0..2 {
                            apex_ang[i] += dang[i] * 0.5;
                        }
                        samples.push(PathSample {
                            s: st.s + ds_in,
                            rho: rstar,
                            ang: apex_ang,
                            drho: 0.0,
                            dang: [eng.gi(0, rstar), eng.gi(1, rstar)],
                        });
                        st.s += total;
                        for i in 0..2 {
                            st.ang[i] += dang[i];
                        }
                        st.sigma = -st.sigma;
                        let d = eng.rhs(st.rho, st.sigma);
                        samples.push(PathSample {
                            s: st.s,
                            rho: st.rho,
                            ang: st.ang,
                            drho: d[0],
                            dang: [d[1], d[2]],
                        });
                        h = h.max(1e-6);
                        continue;
                    }
                    None => {
                        // no turning before the chart end; fall through
                    }
                }
            }
        }

        // Fehlberg 4(5) step
        let h_try = h.min(opts.max_len - st.s).max(1e-13);
        let y = [st.rho, st.ang[0], st.ang[1]];
        let f = |yy: [f64; 3]| eng.rhs(yy[0], st.sigma);
        let k1 = f(y);
        let adv = |base: [f64; 3], ks: &[([f64; 3], f64)]| {
            let mut out = base;
            for (k, w) in ks {
                for j in 0..3 {
                    out[j] += h_try * w * k[j];
                }
            }
            out
        };
        let k2 = f(adv(y, &[(k1, 0.25)]));
        let k3 = f(adv(y, &[(k1, 3.0 / 32.0), (k2, 9.0 / 32.0)]));
        let k4 = f(adv(
            y,
            &[(k1, 1932.0 / 2197.0), (k2, -7200.0 / 2197.0), (k3, 7296.0 / 2197.0)],
        ));
        let k5 = f(adv(
            y,
            &[(k1, 439.0 / 216.0), (k2, -8.0), (k3, 3680.0 / 513.0), (k4, -845.0 / 4104.0)],
        ));
        let k6 = f(adv(
            y,
            &[
                (k1, -8.0 / 27.0),
                (k2, 2.0),
                (k3, -3544.0 / 2565.0),
                (k4, 1859.0 / 4104.0),
                (k5, -11.0 / 40.0),
            ],
        ));
        let y4 = adv(
            y,
            &[(k1, 25.0 / 216.0), (k3, 1408.0 / 2565.0), (k4, 2197.0 / 4104.0), (k5, -0.2)],
        );
        let y5 = adv(
            y,
            &[
                (k1, 16.0 / 135.0),
                (k3, 6656.0 / 12825.0),
                (k4, 28561.0 / 56430.0),
                (k5, -9.0 / 50.0),
                (k6, 2.0 / 55.0),
            ],
        );
        // metric-weighted displacement error
        let mut err = (y4[0] - y5[0]).abs();
        for i in 0..chart.nang() {
            let w = chart.w(i, st.rho.max(1e-12)).min(1e6);
            err = err.max(((y4[i + 1] - y5[i + 1]) * w).abs());
        }

        if err > atol && h_try > 1e-12 {
            h = (h_try * 0.5).max(1e-13);
            if h <= 1e-12 && eng.q(st.rho) < 1e-5 {
                // stuck against the barrier: force the patch next round
                continue;
            }
            continue;
        }

        let rho_new = y5[0];
        let q_new = eng.q(rho_new.clamp(chart_lo, if chart_hi.is_finite() { chart_hi } else { f64::MAX }));

        // domain exits
        if rho_new < chart_lo {
            let t = hermite_root(st.rho, st.sigma * eng.q(st.rho).max(0.0).sqrt(), rho_new, st.sigma * 0.0, h_try, chart_lo);
            let s_cross = st.s + t * h_try;
            let mut ang_cross = [0.0f64; 2];
            for i in 0..2 {
                ang_cross[i] = st.ang[i] + (y5[i + 1] - st.ang[i]) * t;
            }
            match chart.pole_at_lo() {
                Some(fib) if eng.c[fib] == 0.0 => {
                    st.s = s_cross;
                    st.rho = chart_lo;
                    st.ang = ang_cross;
                    st.ang[fib] = std::f64::consts::PI - st.ang[fib];
                    st.sigma = 1.0;
                    let d = eng.rhs(st.rho, st.sigma);
                    samples.push(PathSample {
                        s: st.s,
                        rho: st.rho,
                        ang: st.ang,
                        drho: d[0],
                        dang: [d[1], d[2]],
                    });
                    continue;
                }
                Some(_) => {
                    // inadmissible overshoot into a barrier; retry smaller
                    h = (h_try * 0.25).max(1e-13);
                    if h <= 1e-12 {
                        converged = false;
                        break 'outer;
                    }
                    continue;
                }
                None => {
                    st.s = s_cross;
                    st.rho = chart_lo;
                    st.ang = ang_cross;
                    samples.push(PathSample {
                        s: st.s,
                        rho: st.rho,
                        ang: st.ang,
                        drho: st.sigma,
                        dang: [0.0, 0.0],
                    });
                    hit_boundary = true;
                    break;
                }
            }
        }
        if chart_hi.is_finite() && rho_new > chart_hi {
            let t = hermite_root(st.rho, st.sigma * eng.q(st.rho).max(0.0).sqrt(), rho_new, 0.0, h_try, chart_hi);
            let s_cross = st.s + t * h_try;
            let mut ang_cross = [0.0f64; 2];
            for i in 0..2 {
                ang_cross[i] = st.ang[i] + (y5[i + 1] - st.ang[i]) * t;
            }
            match chart.pole_at_hi() {
                Some(fib) if eng.c[fib] == 0.0 => {
                    st.s = s_cross;
                    st.rho = chart_hi;
                    st.ang = ang_cross;
                    st.ang[fib] = std::f64::consts::PI - st.ang[fib];
                    st.sigma = -1.0;
                    let d = eng.rhs(st.rho, st.sigma);
                    samples.push(PathSample {
                        s: st.s,
                        rho: st.rho,
                        ang: st.ang,
                        drho: d[0],
                        dang: [d[1], d[2]],
                    });
                    continue;
                }
                _ => {
                    h = (h_try * 0.25).max(1e-13);
                    if h <= 1e-12 {
                        converged = false;
                        break 'outer;
                    }
                    continue;
                }
            }
        }

        if q_new < 0.0 {
            h = (h_try * 0.5).max(1e-13);
            if h <= 1e-12 {
                converged = false;
                break 'outer;
            }
            continue;
        }

        // accept
        st.s += h_try;
        st.rho = rho_new;
        st.ang = [y5[1], y5[2]];
        let d = eng.rhs(st.rho, st.sigma);
        samples.push(PathSample {
            s: st.s,
            rho: st.rho,
            ang: st.ang,
            drho: d[0],
            dang: [d[1], d[2]],
        });
        let grow = if err > 0.0 {
            (0.9 * (atol / err).powf(0.2)).clamp(0.2, 4.0)
        } else {
            4.0
        };
        h = (h_try * grow).clamp(1e-13, 0.05f64.max(opts.max_len / 64.0));
    }

    Ok(RawPath {
        length: st.s,
        samples,
        converged,
        hit_boundary,
    })
}

/// Integrate a geodesic of the reduced metric from `start` with Clairaut
/// constants `(c_alpha, c_beta)` and initial radial direction `sign`.
///
/// For the one-fiber charts (limit hemisphere, Grushin halfplane) the single
/// angular constant is `c_beta` and `c_alpha` must be zero.
pub fn geodesic_ivp(
    spec: &MetricSpec,
    start: &ReducedPoint,
    c_alpha: f64,
    c_beta: f64,
    sign: i8,
    max_len: f64,
    tol: f64,
) -> Result<PathResult> {
    spec.validate()?;
    if !max_len.is_finite() || max_len <= 0.0 {
        return Err(Error::Domain(format!("max_len must be positive, got {max_len}")));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let chart = spec.chart();
    let (lo, hi) = chart.rho_range();
    let (rho0, ang0, c) = match (spec, start) {
        (MetricSpec::SphereDwp(_), ReducedPoint::Sphere { r, alpha, beta }) => {
            (*r, [*alpha, *beta], [c_alpha, c_beta])
        }
        (MetricSpec::LimitHemisphere { .. }, ReducedPoint::Hemisphere { phi, beta }) => {
            if c_alpha != 0.0 {
                return Err(Error::Domain(
                    "the hemisphere has a single angular fiber; pass its constant as c_beta".into(),
                ));
            }
            (*phi, [*beta, 0.0], [c_beta, 0.0])
        }
        (MetricSpec::GrushinHalfplane { .. }, ReducedPoint::Halfplane { x, y }) => {
            if c_alpha != 0.0 {
                return Err(Error::Domain(
                    "the halfplane has a single angular direction; pass its constant as c_beta"
                        .into(),
                ));
            }
            (*x, [*y, 0.0], [c_beta, 0.0])
        }
        _ => {
            return Err(Error::Domain(
                "start point variant does not match the metric spec".into(),
            ))
        }
    };
    let lo_open = chart.pole_at_lo().is_none();
    if rho0 < lo || (lo_open && rho0 <= lo) || (hi.is_finite() && rho0 > hi) {
        return Err(Error::Domain(format!(
            "start radial coordinate {rho0} outside the chart"
        )));
    }

    let raw = integrate(&chart, rho0, ang0, c, f64::from(sign), &IvpOptions { tol, max_len })?;
    Ok(PathResult {
        length: raw.length,
        samples: raw.samples,
        clairaut: (c[0], c[1]),
        converged: raw.converged,
        hit_boundary: raw.hit_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::WarpParams;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn radial_paths_are_unit_speed() {
        let spec = MetricSpec::SphereDwp(WarpParams::new(1.0, 8, 2).unwrap());
        let start = ReducedPoint::Sphere { r: 0.3, alpha: 0.0, beta: 0.0 };
        let p = geodesic_ivp(&spec, &start, 0.0, 0.0, 1, 0.5, 1e-9).unwrap();
        assert!(p.converged);
        let end = p.samples.last().unwrap();
        assert!((end.rho - 0.8).abs() < 1e-9, "end rho = {}", end.rho);
        assert!((p.length - 0.5).abs() < 1e-12);
    }

    #[test]
    fn meridian_reaches_the_equator() {
        let spec = MetricSpec::LimitHemisphere { n: 2 };
        let start = ReducedPoint::Hemisphere { phi: FRAC_PI_2, beta: 0.0 };
        let p = geodesic_ivp(&spec, &start, 0.0, 0.0, -1, FRAC_PI_2 + 0.1, 1e-9).unwrap();
        assert!(p.hit_boundary);
        assert!((p.length - FRAC_PI_2).abs() < 1e-9, "length = {}", p.length);
    }

    #[test]
    fn non_admissible_start_is_rejected() {
        let spec = MetricSpec::SphereDwp(WarpParams::new(1.0, 8, 2).unwrap());
        let start = ReducedPoint::Sphere { r: 0.3, alpha: 0.0, beta: 0.0 };
        // w0 = f(0.3) ~ 0.29, so c_alpha = 1 is far out of the admissible disk
        assert!(matches!(
            geodesic_ivp(&spec, &start, 1.0, 0.0, 1, 1.0, 1e-8),
            Err(Error::NonAdmissible(_))
        ));
    }

    #[test]
    fn turning_point_reflects_the_radial_motion() {
        let spec = MetricSpec::SphereDwp(WarpParams::new(1.0, 8, 2).unwrap());
        let chart = spec.chart();
        let rho0 = 0.9;
        let b = 0.8; // angular fraction in the beta fiber
        let c1 = chart.w(1, rho0) * b;
        let p = geodesic_ivp(
            &spec,
            &ReducedPoint::Sphere { r: rho0, alpha: 0.0, beta: 0.0 },
            0.0,
            c1,
            1,
            2.0,
            1e-9,
        )
        .unwrap();
        assert!(p.converged);
        // the path must have turned somewhere (rho bounded) and kept moving
        let max_rho = p.samples.iter().map(|q| q.rho).fold(0.0, f64::max);
        let final_rho = p.samples.last().unwrap().rho;
        assert!(max_rho < FRAC_PI_2);
        assert!(final_rho < max_rho);
    }

    #[test]
    fn pole_crossing_flips_the_separation() {
        // radial shot through the collapsed f-fiber at r = 0
        let spec = MetricSpec::SphereDwp(WarpParams::new(2.0, 8, 2).unwrap());
        let p = geodesic_ivp(
            &spec,
            &ReducedPoint::Sphere { r: 0.4, alpha: 0.2, beta: 0.3 },
            0.0,
            0.0,
            -1,
            1.0,
            1e-9,
        )
        .unwrap();
        assert!(p.converged);
        let end = p.samples.last().unwrap();
        assert!((end.rho - 0.6).abs() < 1e-8);
        assert!((end.ang[0] - (std::f64::consts::PI - 0.2)).abs() < 1e-9);
        assert!((end.ang[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn grushin_straight_line_along_x() {
        let spec = MetricSpec::GrushinHalfplane { alpha: 1.0 };
        let p = geodesic_ivp(
            &spec,
            &ReducedPoint::Halfplane { x: 1.0, y: 0.0 },
            0.0,
            0.0,
            1,
            1.0,
            1e-9,
        )
        .unwrap();
        let end = p.samples.last().unwrap();
        assert!((end.rho - 2.0).abs() < 1e-9);
        assert!((end.ang[0]).abs() < 1e-12);
    }
}
