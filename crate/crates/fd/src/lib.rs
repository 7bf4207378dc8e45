//! Finite-difference eigenvalue oracle for truncated spiral domains.
//!
//! The spiral complement is truncated to a disk, discretized with the
//! five-point Laplacian on a uniform grid, and its lowest Dirichlet
//! eigenvalues are computed by shift-invert Lanczos on a sparse `LDLᵀ`
//! factorization. Truncation and the thickened curve both raise eigenvalues,
//! so the moment sums computed here can only undershoot those of the
//! unbounded domain.

pub mod dump;
pub mod error;
pub mod grid;
pub mod lanczos;
pub mod laplacian;
pub mod ldl;
pub mod ordering;
pub mod spectrum;

pub use error::{FdError, Result};
pub use grid::{build_grid, GridDomain, NodeStatus};
pub use laplacian::{assemble_laplacian, Laplacian};
pub use spectrum::{lowest_eigenvalues, moment_sum, EigenSolution, Oracle, SolverOptions, SpectrumResult};
