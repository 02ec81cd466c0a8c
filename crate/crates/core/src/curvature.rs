//! The three Ricci components of the doubly warped product, assembled from
//! the scalar kernel, plus a non-rigorous grid scan for their minimum (the
//! rigorous version lives in [`crate::certify`]).

use crate::error::Result;
use crate::par;
use crate::params::WarpParams;
use crate::scalar::{check_domain, forms};

/// Values of `Ric(H,H)`, `Ric(U,U)`, `Ric(V,V)` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicComponents {
    pub hh: f64,
    pub uu: f64,
    pub vv: f64,
}

impl RicComponents {
    pub fn min(&self) -> f64 {
        self.hh.min(self.uu).min(self.vv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RicDirection {
    HH,
    UU,
    VV,
}

impl std::fmt::Display for RicDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RicDirection::HH => "hh",
            RicDirection::UU => "uu",
            RicDirection::VV => "vv",
        })
    }
}

pub fn ric_hh(r: f64, p: &WarpParams) -> Result<f64> {
    check_domain(r, p.lambda)?;
    Ok(forms::ric_hh(r, p.lambda, p.m, p.n))
}

pub fn ric_uu(r: f64, p: &WarpParams) -> Result<f64> {
    check_domain(r, p.lambda)?;
    Ok(forms::ric_uu(r, p.lambda, p.m, p.n))
}

pub fn ric_vv(r: f64, p: &WarpParams) -> Result<f64> {
    check_domain(r, p.lambda)?;
    Ok(forms::ric_vv(r, p.lambda, p.m, p.n))
}

pub fn ric_components(r: f64, p: &WarpParams) -> Result<RicComponents> {
    check_domain(r, p.lambda)?;
    Ok(RicComponents {
        hh: forms::ric_hh(r, p.lambda, p.m, p.n),
        uu: forms::ric_uu(r, p.lambda, p.m, p.n),
        vv: forms::ric_vv(r, p.lambda, p.m, p.n),
    })
}

/// The bracketed polynomial in the `Ric(H,H)` estimate:
/// `I = m A^2 (lambda^4 sin^4 r + lambda^4 sin^2 r + 6 lambda^2 + 4) - 8 (n-1) B^2 lambda^4 sin^2 r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermI {
    pub value: f64,
}

pub fn term_i(r: f64, p: &WarpParams) -> Result<TermI> {
    check_domain(r, p.lambda)?;
    Ok(TermI {
        value: forms::term_i(r, p.lambda, p.m, p.n),
    })
}

/// Outcome of a uniform-grid minimum scan over all three components.
#[derive(Debug, Clone, Copy)]
pub struct ScanResult {
    pub min: f64,
    pub argmin_r: f64,
    pub component: RicDirection,
}

/// Minimum of `{hh, uu, vv}` over a uniform grid of `grid_size` radii
/// including both endpoints. The argmin seeds refutation witnesses in the
/// certifier. Result is independent of how the grid is partitioned across
/// workers.
pub fn ric_min_scan(p: &WarpParams, grid_size: usize) -> Result<ScanResult> {
    if grid_size < 2 {
        return Err(crate::error::Error::Domain(format!(
            "grid_size must be >= 2, got {grid_size}"
        )));
    }
    let hi = std::f64::consts::FRAC_PI_2;
    let pts = par::map_range(grid_size, |i| {
        let r = if i + 1 == grid_size {
            hi
        } else {
            hi * i as f64 / (grid_size - 1) as f64
        };
        let c = RicComponents {
            hh: forms::ric_hh(r, p.lambda, p.m, p.n),
            uu: forms::ric_uu(r, p.lambda, p.m, p.n),
            vv: forms::ric_vv(r, p.lambda, p.m, p.n),
        };
        (r, c)
    });
    let mut best = ScanResult {
        min: f64::INFINITY,
        argmin_r: 0.0,
        component: RicDirection::HH,
    };
    for (r, c) in pts {
        for (v, dir) in [
            (c.hh, RicDirection::HH),
            (c.uu, RicDirection::UU),
            (c.vv, RicDirection::VV),
        ] {
            if v < best.min {
                best = ScanResult {
                    min: v,
                    argmin_r: r,
                    component: dir,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn params(lambda: f64, m: u32, n: u32) -> WarpParams {
        WarpParams::new(lambda, m, n).unwrap()
    }

    #[test]
    fn ric_hh_examples() {
        assert!((ric_hh(0.0, &params(1.0, 8, 2)).unwrap() - 21.0).abs() < 1e-13);
        assert!((ric_hh(FRAC_PI_2, &params(2.0, 8, 2)).unwrap() - 3.55).abs() < 1e-13);
        assert!((ric_hh(FRAC_PI_2, &params(1.0, 8, 2)).unwrap() - 7.0).abs() < 1e-13);
    }

    #[test]
    fn ric_uu_at_collapsed_end() {
        // 0.75 + 7 sqrt(2) + 0.75: the cross term's limit at pi/2 is the
        // closed form lambda^2(B+1)/(2AB) = 3/4, not zero.
        let expect = 1.5 + 7.0 * 2f64.sqrt();
        assert!((ric_uu(FRAC_PI_2, &params(1.0, 8, 2)).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn ric_vv_examples() {
        assert!((ric_vv(FRAC_PI_2, &params(1.0, 8, 2)).unwrap() - 7.0).abs() < 1e-13);
        assert!((ric_vv(FRAC_PI_2, &params(2.0, 8, 2)).unwrap() - 3.55).abs() < 1e-13);
        // n = 3 exercises the (n-2) term
        let v = ric_vv(0.7, &params(2.0, 8, 3)).unwrap();
        assert!(v.is_finite() && v > 1.0);
    }

    #[test]
    fn term_i_examples() {
        assert!((term_i(0.0, &params(1.0, 8, 2)).unwrap().value - 80.0).abs() < 1e-12);
        assert!((term_i(FRAC_PI_2, &params(1.0, 8, 2)).unwrap().value - 64.0).abs() < 1e-12);
        // m below the threshold goes negative at pi/2
        assert!((term_i(FRAC_PI_2, &params(1.0, 1, 2)).unwrap().value + 20.0).abs() < 1e-12);
    }

    #[test]
    fn scan_finds_the_collapse_end() {
        let s = ric_min_scan(&params(1.0, 8, 2), 1000).unwrap();
        assert!(s.min >= 1.0 - 1e-9, "min = {}", s.min);
        assert!((s.min - 7.0).abs() < 1e-6);
        let s = ric_min_scan(&params(100.0, 8, 2), 1000).unwrap();
        assert!(s.min >= 1.0 - 1e-9, "min = {}", s.min);
        // m too small: the bound fails for lambda >= 2 (at lambda = 1 the
        // minimum is 1.5, still above the threshold)
        let s = ric_min_scan(&params(2.0, 1, 2), 1000).unwrap();
        assert!(s.min < 1.0, "min = {}", s.min);
        assert!((s.argmin_r - FRAC_PI_2).abs() < 1e-2);
    }

    #[test]
    fn scan_rejects_tiny_grid() {
        assert!(ric_min_scan(&params(1.0, 8, 2), 1).is_err());
    }
}
