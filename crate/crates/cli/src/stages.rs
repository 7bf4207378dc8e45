//! The pipeline stages behind each subcommand.

use std::sync::OnceLock;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use log::info;
use serde::{Deserialize, Serialize};
use spiral_core::bounds::{bound, integrand_at, BoundParams, BoundResult, BoundRoutine};
use spiral_core::conditions::{
    asymptotic_diagnostics_on, log_grid, no_discrete_spectrum_certificate, tail_integrability, CertificateReport,
    Diagnostics, TailIntegrability,
};
use spiral_core::potential::w_effective;
use spiral_core::window::find_s0;
use spiral_core::{GeometryWindow, Perturbation, SpiralSpec};
use spiral_fd::dump::write_dump;
use spiral_fd::{assemble_laplacian, build_grid, Oracle, SolverOptions, SpectrumResult};

use crate::config::{Format, RunConfig};
use crate::output::{write_json, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Geometry,
    Bounds,
    Certify,
    Verify,
    All,
}

/// Files written by one stage and whether its verification checks held.
#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: &'static str,
    pub files: Vec<PathBuf>,
    pub checks_passed: bool,
}

/// Shared state of one run: configuration, its hash and cached intermediate results.
pub struct RunContext {
    pub config: RunConfig,
    pub hash: String,
    pub spec: SpiralSpec,
    window: OnceLock<GeometryWindow>,
    bounds: OnceLock<Vec<BoundResult>>,
}

impl RunContext {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let spec = config.spiral_spec()?;
        let hash = config.hash();
        fs::create_dir_all(&config.output.directory)
            .with_context(|| format!("creating {}", config.output.directory.display()))?;
        Ok(Self { config, hash, spec, window: OnceLock::new(), bounds: OnceLock::new() })
    }

    fn out(&self) -> &std::path::Path {
        &self.config.output.directory
    }

    pub fn threshold(&self) -> f64 {
        self.config.bound.threshold.unwrap_or(1.0 / (4.0 * self.spec.a0 * self.spec.a0))
    }

    pub fn window(&self) -> Result<&GeometryWindow> {
        if let Some(w) = self.window.get() {
            return Ok(w);
        }
        let g = &self.config.geometry;
        let w = find_s0(&self.spec, g.horizon, g.margin).context("geometry")?;
        Ok(self.window.get_or_init(|| w))
    }

    pub fn bound_params(&self, sigma: f64) -> BoundParams {
        let b = &self.config.bound;
        BoundParams {
            sigma,
            threshold: b.threshold,
            r_factor: if sigma >= 1.5 { None } else { b.r_factor },
            quad_rel_tol: b.quad_rel_tol,
            tail_cut: b.tail_cut,
        }
    }

    pub fn bounds(&self) -> Result<&[BoundResult]> {
        if let Some(b) = self.bounds.get() {
            return Ok(b);
        }
        let window = self.window()?;
        let results = self
            .config
            .bound
            .sigmas
            .iter()
            .map(|&sigma| bound(window, &self.bound_params(sigma)).with_context(|| format!("bound for σ = {sigma}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.bounds.get_or_init(|| results))
    }

    fn wants(&self, f: Format) -> bool {
        self.config.wants(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub config_hash: String,
    pub family: String,
    pub a0: f64,
    pub margin: f64,
    pub s0: f64,
    pub theta0: f64,
    pub horizon: f64,
    pub theta_horizon: f64,
    pub rows: usize,
    pub admissible_rows: usize,
}

pub fn run_geometry(ctx: &RunContext) -> Result<StageReport> {
    let w = ctx.window()?;
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let mut t = Table::new(&["theta", "s", "gamma", "dgamma_ds", "d2gamma_ds2", "d", "d_gamma", "w_eff"], &ctx.hash);
        for r in w.admissible() {
            let g = r.geom;
            let weff = w_effective(g.gamma, g.dgamma, g.ddgamma, g.d).context("geometry")?;
            t.push(vec![
                g.theta.into(),
                r.s.into(),
                g.gamma.into(),
                g.dgamma.into(),
                g.ddgamma.into(),
                g.d.into(),
                r.d_gamma().into(),
                weff.into(),
            ]);
        }
        files.push(t.write(ctx.out(), "geometry.csv")?);
    }
    if ctx.wants(Format::Json) {
        let summary = GeometrySummary {
            config_hash: ctx.hash.clone(),
            family: ctx.config.spiral.family.to_string(),
            a0: ctx.spec.a0,
            margin: w.margin,
            s0: w.s0,
            theta0: w.theta0,
            horizon: w.horizon,
            theta_horizon: w.theta_horizon,
            rows: w.samples.len(),
            admissible_rows: w.admissible().len(),
        };
        files.push(write_json(ctx.out(), "geometry.json", &summary)?);
    }
    info!("geometry: s0 = {:.6}, {} admissible rows", w.s0, w.admissible().len());
    Ok(StageReport { stage: "geometry", files, checks_passed: true })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub config_hash: String,
    pub results: Vec<BoundResult>,
}

fn routine_name(r: BoundRoutine) -> &'static str {
    match r {
        BoundRoutine::Main => "main",
        BoundRoutine::LowSigma => "low_sigma",
    }
}

/// Integrand along the admissible rows, one block per σ.
fn integrand_table(ctx: &RunContext) -> Result<Table> {
    let w = ctx.window()?;
    let mut t = Table::new(&["sigma", "theta", "s", "d", "w_eff", "gap", "integrand_per_s"], &ctx.hash);
    for &sigma in &ctx.config.bound.sigmas {
        let params = ctx.bound_params(sigma);
        for r in w.admissible() {
            let p = integrand_at(w, &params, r.theta()).context("integrand")?;
            t.push(vec![sigma.into(), p.theta.into(), r.s.into(), p.d.into(), p.w_eff.into(), p.gap.into(), p.per_s.into()]);
        }
    }
    Ok(t)
}

pub fn run_bounds(ctx: &RunContext) -> Result<StageReport> {
    let results = ctx.bounds()?;
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let mut t = Table::new(
            &[
                "sigma",
                "routine",
                "lambda",
                "integral_term",
                "omega2_term",
                "total",
                "quad_error_estimate",
                "tail_uncertainty",
                "s_star",
            ],
            &ctx.hash,
        );
        for r in results {
            t.push(vec![
                r.sigma.into(),
                routine_name(r.routine).into(),
                r.lambda.into(),
                r.integral_term.into(),
                r.omega2_term.into(),
                r.total.into(),
                r.quad_error_estimate.into(),
                r.tail.map(|t| t.uncertainty).into(),
                r.s_star.into(),
            ]);
        }
        files.push(t.write(ctx.out(), "bounds.csv")?);
        files.push(integrand_table(ctx)?.write(ctx.out(), "integrand.csv")?);
    }
    if ctx.wants(Format::Json) {
        let report = BoundsReport { config_hash: ctx.hash.clone(), results: results.to_vec() };
        files.push(write_json(ctx.out(), "bounds.json", &report)?);
    }
    for r in results {
        info!("bound σ = {}: total {:.6e} (integral {:.6e}, volume {:.6e})", r.sigma, r.total, r.integral_term, r.omega2_term);
    }
    Ok(StageReport { stage: "bounds", files, checks_passed: true })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub sigma: f64,
    pub result: Option<TailIntegrability>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub config_hash: String,
    pub certificate: CertificateReport,
    pub tail_integrability: Vec<TailEntry>,
    pub diagnostics: Option<Diagnostics>,
}

pub fn certify(ctx: &RunContext) -> Result<CertifyReport> {
    let w = ctx.window()?;
    let certificate = no_discrete_spectrum_certificate(w).context("certificate")?;
    let tail_integrability = ctx
        .config
        .bound
        .sigmas
        .iter()
        .map(|&sigma| match tail_integrability(w, sigma) {
            Ok(r) => TailEntry { sigma, result: Some(r), error: None },
            Err(e) => TailEntry { sigma, result: None, error: Some(e.to_string()) },
        })
        .collect();
    let diagnostics = match ctx.spec.perturbation {
        Perturbation::PowerTail { .. } => None,
        _ => {
            let g = &ctx.config.geometry;
            let grid = log_grid(g.diagnostic_range[0], g.diagnostic_range[1], g.diagnostic_points);
            Some(asymptotic_diagnostics_on(w, &grid).context("diagnostics")?)
        }
    };
    Ok(CertifyReport { config_hash: ctx.hash.clone(), certificate, tail_integrability, diagnostics })
}

pub fn run_certify(ctx: &RunContext) -> Result<StageReport> {
    let report = certify(ctx)?;
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        if let Some(d) = &report.diagnostics {
            let mut t = Table::new(
                &[
                    "theta",
                    "s",
                    "d",
                    "expansion_residual",
                    "scaled_residual",
                    "gamma_residual",
                    "arc_length_residual",
                    "w_eff_residual",
                ],
                &ctx.hash,
            );
            for r in &d.rows {
                t.push(vec![
                    r.theta.into(),
                    r.s.into(),
                    r.d.into(),
                    r.expansion_residual.into(),
                    r.scaled_residual.into(),
                    r.gamma_residual.into(),
                    r.arc_length_residual.into(),
                    r.w_eff_residual.into(),
                ]);
            }
            files.push(t.write(ctx.out(), "diagnostics.csv")?);
        }
    }
    if ctx.wants(Format::Json) {
        files.push(write_json(ctx.out(), "certificate.json", &report)?);
    }
    info!("certificate verdict: {:?}", report.certificate.verdict);
    Ok(StageReport { stage: "certify", files, checks_passed: true })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub sigma: f64,
    pub routine: BoundRoutine,
    pub moment: f64,
    pub bound_total: f64,
    pub bound_uncertainty: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationCheck {
    pub radius_enlarged: f64,
    pub lambda1: f64,
    pub lambda1_enlarged: f64,
    pub relative_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config_hash: String,
    pub threshold: f64,
    pub h: f64,
    pub radius: f64,
    pub unknowns: usize,
    pub spectrum: SpectrumResult,
    pub comparisons: Vec<Comparison>,
    pub truncation: Option<TruncationCheck>,
    pub all_hold: bool,
}

fn solver_options(ctx: &RunContext) -> SolverOptions {
    let o = &ctx.config.oracle;
    SolverOptions { tol: o.tol, seed: o.seed, max_restarts: o.max_restarts }
}

pub fn verify(ctx: &RunContext) -> Result<(VerifyReport, spiral_fd::EigenSolution, spiral_fd::GridDomain)> {
    let bounds = ctx.bounds()?;
    let o = &ctx.config.oracle;
    let lambda = ctx.threshold();
    let radius = ctx.config.oracle_radius(&ctx.spec);
    let grid = build_grid(&ctx.spec, o.h, radius).context("oracle grid")?;
    let op = assemble_laplacian(&grid);
    let sigmas = &ctx.config.bound.sigmas;
    let sol = Oracle::new(&op)
        .below_threshold(lambda, o.k, sigmas, &solver_options(ctx))
        .context("oracle eigenvalues")?;

    let comparisons: Vec<Comparison> = bounds
        .iter()
        .zip(&sol.result.moments)
        .map(|(b, m)| Comparison {
            sigma: b.sigma,
            routine: b.routine,
            moment: m.value,
            bound_total: b.total,
            bound_uncertainty: b.total_uncertainty(),
            holds: m.value <= b.total,
        })
        .collect();

    let truncation = if o.check_truncation {
        let enlarged = radius + std::f64::consts::TAU * ctx.spec.a0;
        let op2 = assemble_laplacian(&build_grid(&ctx.spec, o.h, enlarged).context("enlarged oracle grid")?);
        let l2 = Oracle::new(&op2).lowest(1, &solver_options(ctx)).context("enlarged oracle")?.result.eigenvalues[0];
        let l1 = sol.result.eigenvalues[0];
        Some(TruncationCheck { radius_enlarged: enlarged, lambda1: l1, lambda1_enlarged: l2, relative_change: (l1 - l2) / l1 })
    } else {
        None
    };

    let mut spectrum = sol.result.clone();
    spectrum.radius = Some(radius);
    let report = VerifyReport {
        config_hash: ctx.hash.clone(),
        threshold: lambda,
        h: o.h,
        radius,
        unknowns: grid.unknowns(),
        all_hold: comparisons.iter().all(|c| c.holds),
        spectrum,
        comparisons,
        truncation,
    };
    Ok((report, sol, grid))
}

pub fn run_verify(ctx: &RunContext) -> Result<StageReport> {
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        files.push(integrand_table(ctx)?.write(ctx.out(), "integrand.csv")?);
    }
    let (report, sol, grid) = verify(ctx)?;
    if ctx.wants(Format::Csv) {
        let mut e = Table::new(&["index", "eigenvalue", "threshold", "below_threshold", "residual"], &ctx.hash);
        for (k, (l, r)) in report.spectrum.eigenvalues.iter().zip(&report.spectrum.residuals).enumerate() {
            e.push(vec![(k + 1).into(), (*l).into(), report.threshold.into(), (*l < report.threshold).into(), (*r).into()]);
        }
        files.push(e.write(ctx.out(), "eigenvalues.csv")?);
        let mut c = Table::new(&["sigma", "routine", "moment", "bound_total", "holds"], &ctx.hash);
        for cmp in &report.comparisons {
            c.push(vec![
                cmp.sigma.into(),
                routine_name(cmp.routine).into(),
                cmp.moment.into(),
                cmp.bound_total.into(),
                cmp.holds.into(),
            ]);
        }
        files.push(c.write(ctx.out(), "verify.csv")?);
    }
    if ctx.wants(Format::Json) {
        files.push(write_json(ctx.out(), "verify.json", &report)?);
    }
    if ctx.config.oracle.dump {
        let header = write_dump(ctx.out(), "oracle", &grid, &sol.result.eigenvalues, &sol.vectors)?;
        files.push(ctx.out().join(&header.mask_file));
        files.push(ctx.out().join(&header.vectors_file));
        files.push(ctx.out().join("oracle.json"));
    }
    for c in &report.comparisons {
        info!("σ = {}: moment {:.6e} ≤ bound {:.6e}: {}", c.sigma, c.moment, c.bound_total, c.holds);
    }
    Ok(StageReport { stage: "verify", files, checks_passed: report.all_hold })
}

/// Runs the requested stage, or every stage in order for [`Stage::All`].
pub fn run_stage(ctx: &RunContext, stage: Stage) -> Result<Vec<StageReport>> {
    Ok(match stage {
        Stage::Geometry => vec![run_geometry(ctx)?],
        Stage::Bounds => vec![run_bounds(ctx)?],
        Stage::Certify => vec![run_certify(ctx)?],
        Stage::Verify => vec![run_verify(ctx)?],
        Stage::All => vec![run_geometry(ctx)?, run_bounds(ctx)?, run_certify(ctx)?, run_verify(ctx)?],
    })
}
