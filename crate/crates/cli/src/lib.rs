//! Configuration-driven pipeline for spiral-domain eigenvalue bounds.
//!
//! A run reads one TOML file, builds the geometry window, evaluates the
//! moment bounds and certificates, optionally runs the finite-difference
//! oracle, and writes CSV tables and JSON reports tagged with a hash of the
//! configuration.

pub mod config;
pub mod output;
pub mod stages;

pub use config::{Family, Format, RunConfig};
pub use stages::{run_stage, RunContext, Stage, StageReport};

/// Exit status when a stage fails.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for configuration errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status when every stage ran but a verification check is false.
pub const EXIT_CHECK_FAILED: i32 = 3;
