//! Desk-scale Gromov-Hausdorff convergence laboratory.
//!
//! Farthest-point-sampled epsilon-nets with grid-graph distance matrices,
//! the collapse correspondence `(r, alpha, beta) -> (phi = r, beta)` and its
//! distortion as a function of `lambda`, a distribution-of-distances lower
//! bound, covering-number dimension probes, and tangent-cone rescaling
//! checks at the equator.

pub mod dimension;
pub mod distortion;
pub mod net;
pub mod tangent;

pub use dimension::{dimension_probe, ProbeOptions, ProbeRegion, ProbeResult};
pub use distortion::{
    convergence_sweep, distortion_projection, gh_lower_bound, DistortionReport, SweepOptions,
};
pub use net::{build_net, build_net_with, NetOptions, NetSample};
pub use tangent::{tangent_cone_check, TangentOptions, TangentReport};

use crate::error::{Error, Result};

/// Symmetric distance matrix over a finite sample.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub size: usize,
    entries: Vec<f64>,
    pub tol: f64,
}

impl DistanceMatrix {
    pub fn zeros(size: usize, tol: f64) -> Self {
        Self {
            size,
            entries: vec![0.0; size * size],
            tol,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    /// Sets both `(i, j)` and `(j, i)`; symmetry holds by construction.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.size + j] = v;
        self.entries[j * self.size + i] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Zero diagonal, symmetry, and finiteness.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.size {
            if self.get(i, i) != 0.0 {
                return Err(Error::Domain(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let d = self.get(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::Domain(format!("bad entry at ({i}, {j}): {d}")));
                }
                if d != self.get(j, i) {
                    return Err(Error::Domain(format!("asymmetry at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_is_symmetric_by_construction() {
        let mut m = DistanceMatrix::zeros(3, 1e-6);
        m.set(0, 1, 2.0);
        m.set(1, 2, 3.0);
        assert_eq!(m.get(1, 0), 2.0);
        assert_eq!(m.get(2, 1), 3.0);
        assert!(m.validate().is_ok());
        assert_eq!(m.max_entry(), 3.0);
    }
}
