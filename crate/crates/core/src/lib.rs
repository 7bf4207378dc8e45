//! Geometry, effective potentials and eigenvalue-moment bounds for the
//! Dirichlet Laplacian on spiral-shaped planar domains.
//!
//! The crate is organised bottom-up:
//!
//! * [`spiral`]: the curve `r(θ) = a0·θ + ρ(θ)` and pointwise geometry.
//! * [`window`]: the admissible arc-length window `[s0, horizon]` with a cached
//!   sample table.
//! * [`potential`]: curvature in arc length, `W(s, u)` and the effective
//!   potential `W̃(s)`.
//! * [`bounds`]: semiclassical constants and the two-term moment bounds.
//! * [`conditions`]: the no-discrete-spectrum certificate, tail integrability
//!   and asymptotic residual diagnostics.

pub mod bounds;
pub mod conditions;
pub mod error;
pub mod potential;
pub mod quadrature;
pub mod spiral;
pub mod window;

pub use error::{Error, Result};
pub use spiral::{GeometryOptions, Perturbation, SpiralSpec};
pub use window::GeometryWindow;
