//! Numerical laboratory for a family of doubly warped product metrics on the
//! sphere `S^{m+n}` that collapse, as the parameter `lambda` grows, onto the
//! n-dimensional Grushin hemisphere.
//!
//! The family is `g = dr^2 + f(r)^2 ds_m^2 + h(r)^2 ds_{n-1}^2` on
//! `[0, pi/2] x S^m x S^{n-1}` with
//!
//! ```text
//! f(r) = sin r / (1 + lambda^2 sin^2 r)^{1/4}
//! h(r) = (1/lambda^2 + tan^2 r)^{-1/2}
//! ```
//!
//! The crate provides:
//!
//! - [`scalar`]: closed-form evaluation of the warping functions, the
//!   auxiliaries `A`, `B`, and the seven curvature ratios, together with an
//!   independent second-order forward-mode differentiation oracle ([`jet`]).
//! - [`curvature`]: the three Ricci components of the warped product and a
//!   grid scan for their minimum.
//! - [`certify`]: a rigorous interval-arithmetic branch-and-bound engine that
//!   verifies or refutes a fixed registry of inequalities about the family,
//!   including the theorem-level bound `Ric >= 1`.
//! - [`geodesics`]: geodesic initial-value integration, two-point distance by
//!   multi-start shooting, a grid-graph Dijkstra oracle, and completion
//!   distances to the singular boundary.
//! - [`gh`]: epsilon-nets, distance matrices, the collapse correspondence and
//!   its distortion as a function of `lambda`, covering-number dimension
//!   probes, and tangent-cone rescaling checks.
//!
//! All numerical kernels are pure functions; grid scans, box queues, and
//! distance-matrix fills are data-parallel (rayon) when the default
//! `parallel` feature is enabled, with a sequential fallback otherwise.
//! Results are deterministic and independent of the worker count.

pub mod certify;
pub mod curvature;
pub mod error;
pub mod geodesics;
pub mod gh;
pub mod interval;
pub mod jet;
pub mod par;
pub mod params;
pub mod real;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use interval::Interval;
pub use params::WarpParams;
