//! Declarative run configuration read from TOML.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spiral_core::bounds::TailCut;
use spiral_core::{Perturbation, SpiralSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Pure,
    PowerTail,
    Bump,
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(Self::Pure),
            "power_tail" | "power-tail" => Ok(Self::PowerTail),
            "bump" => Ok(Self::Bump),
            other => bail!("unknown spiral family `{other}` (expected pure, power_tail or bump)"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pure => "pure",
            Self::PowerTail => "power_tail",
            Self::Bump => "bump",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpiralConfig {
    pub family: Family,
    pub a0: f64,
    /// Power-tail coefficient.
    pub c: Option<f64>,
    /// Power-tail decay exponent.
    pub p: Option<f64>,
    pub amplitude: Option<f64>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    /// Arc-length horizon of the window.
    pub horizon: f64,
    pub margin: f64,
    /// Number of log-spaced angles for the asymptotic diagnostics.
    pub diagnostic_points: usize,
    pub diagnostic_range: [f64; 2],
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self { horizon: 1e4, margin: 0.1, diagnostic_points: 50, diagnostic_range: [10.0, 100.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundConfig {
    pub sigmas: Vec<f64>,
    /// Factor applied in the low-σ routine; the main routine always uses 1.
    pub r_factor: Option<f64>,
    pub threshold: Option<f64>,
    pub quad_rel_tol: f64,
    pub tail_cut: TailCut,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { sigmas: vec![0.5, 1.0, 1.5, 2.0], r_factor: None, threshold: None, quad_rel_tol: 1e-8, tail_cut: TailCut::PowerLaw }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub h: f64,
    /// Truncation radius; when absent it is `r(2π·coils) + πa0`.
    pub radius: Option<f64>,
    pub coils: f64,
    /// Minimum number of eigenvalues to compute.
    pub k: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_restarts: usize,
    /// Repeat the solve with the radius grown by one coil and report the change of λ₁.
    pub check_truncation: bool,
    /// Write the mask and eigenvectors as flat binary files.
    pub dump: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            h: 1.0 / 32.0,
            radius: None,
            coils: 5.0,
            k: 4,
            tol: 1e-8,
            seed: 20_240_917,
            max_restarts: 300,
            check_truncation: false,
            dump: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: PathBuf::from("out"), formats: vec![Format::Csv, Format::Json] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spiral: SpiralConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub bound: BoundConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn required(value: Option<f64>, field: &str, family: Family) -> Result<f64> {
    value.with_context(|| format!("spiral.{field} is required for family {family}"))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn spiral_spec(&self) -> Result<SpiralSpec> {
        let s = &self.spiral;
        let perturbation = match s.family {
            Family::Pure => Perturbation::Pure,
            Family::PowerTail => Perturbation::PowerTail {
                c: required(s.c, "c", s.family)?,
                p: required(s.p, "p", s.family)?,
            },
            Family::Bump => Perturbation::Bump {
                amplitude: required(s.amplitude, "amplitude", s.family)?,
                theta1: required(s.theta1, "theta1", s.family)?,
                theta2: required(s.theta2, "theta2", s.family)?,
            },
        };
        SpiralSpec::new(s.a0, perturbation).context("spiral")
    }

    /// Checks every range the modules rely on, naming the offending key.
    pub fn validate(&self) -> Result<()> {
        ensure!(self.spiral.a0 > 0.0 && self.spiral.a0.is_finite(), "spiral.a0 must be positive, got {}", self.spiral.a0);
        self.spiral_spec()?;
        let g = &self.geometry;
        ensure!(g.horizon > 0.0 && g.horizon.is_finite(), "geometry.horizon must be positive, got {}", g.horizon);
        ensure!(g.margin > 0.0 && g.margin < 1.0, "geometry.margin must lie in (0, 1), got {}", g.margin);
        ensure!(g.diagnostic_points >= 2, "geometry.diagnostic_points must be at least 2");
        let [lo, hi] = g.diagnostic_range;
        ensure!(lo > 0.0 && hi > lo, "geometry.diagnostic_range must satisfy 0 < lo < hi, got [{lo}, {hi}]");
        let b = &self.bound;
        ensure!(!b.sigmas.is_empty(), "bound.sigmas must not be empty");
        for &sigma in &b.sigmas {
            ensure!(sigma >= 0.5 && sigma.is_finite(), "bound.sigmas entries must be at least 1/2, got {sigma}");
        }
        if let Some(r) = b.r_factor {
            ensure!(r > 0.0 && r <= 2.0, "bound.r_factor must lie in (0, 2], got {r}");
        }
        if let Some(t) = b.threshold {
            ensure!(t > 0.0 && t.is_finite(), "bound.threshold must be positive, got {t}");
        }
        ensure!(b.quad_rel_tol > 0.0 && b.quad_rel_tol < 1.0, "bound.quad_rel_tol must lie in (0, 1)");
        let o = &self.oracle;
        ensure!(o.h > 0.0, "oracle.h must be positive, got {}", o.h);
        ensure!(o.k >= 1, "oracle.k must be at least 1");
        ensure!(o.tol > 0.0, "oracle.tol must be positive");
        ensure!(o.coils >= 4.0, "oracle.coils must be at least 4, got {}", o.coils);
        if let Some(r) = o.radius {
            ensure!(r > 0.0, "oracle.radius must be positive, got {r}");
        }
        ensure!(!self.output.formats.is_empty(), "output.formats must not be empty");
        Ok(())
    }

    pub fn oracle_radius(&self, spec: &SpiralSpec) -> f64 {
        self.oracle
            .radius
            .unwrap_or_else(|| spec.radius(std::f64::consts::TAU * self.oracle.coils) + std::f64::consts::PI * spec.a0)
    }

    pub fn wants(&self, format: Format) -> bool {
        self.output.formats.contains(&format)
    }

    /// First 16 hex digits of the SHA-256 of the configuration, excluding the output section.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "spiral": self.spiral,
            "geometry": self.geometry,
            "bound": self.bound,
            "oracle": self.oracle,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
