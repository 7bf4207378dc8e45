use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use log::{error, info};
use spiral_cli::{run_stage, Family, RunConfig, RunContext, Stage, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_FAILURE};

#[derive(Debug, Parser)]
#[command(name = "spiral-lt", version, about = "Eigenvalue-moment bounds and finite-difference checks for spiral domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, overriding `output.directory`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Comma-separated σ values, overriding `bound.sigmas`.
    #[arg(long, global = true, value_delimiter = ',')]
    sigma: Option<Vec<f64>>,

    /// Spiral family, overriding `spiral.family`.
    #[arg(long, global = true)]
    family: Option<Family>,

    /// Eigensolver seed, overriding `oracle.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for the oracle.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the geometry window and write its table.
    Geometry,
    /// Evaluate the moment bounds for each σ.
    Bounds,
    /// Run the no-discrete-spectrum certificate and diagnostics.
    Certify,
    /// Compare finite-difference moments with the bounds.
    Verify,
    /// All stages in order.
    All,
}

impl From<&Command> for Stage {
    fn from(c: &Command) -> Self {
        match c {
            Command::Geometry => Stage::Geometry,
            Command::Bounds => Stage::Bounds,
            Command::Certify => Stage::Certify,
            Command::Verify => Stage::Verify,
            Command::All => Stage::All,
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().context("--config <path> is required")?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(out) = &cli.out {
        cfg.output.directory = out.clone();
    }
    if let Some(sigmas) = &cli.sigma {
        cfg.bound.sigmas = sigmas.clone();
    }
    if let Some(family) = cli.family {
        cfg.spiral.family = family;
    }
    if let Some(seed) = cli.seed {
        cfg.oracle.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            error!("--threads: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }
    let ctx = match load_config(&cli).and_then(RunContext::new) {
        Ok(ctx) => ctx,
        Err(e) => {
            error!("configuration error: {e:#}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    info!("config hash {}", ctx.hash);
    match run_stage(&ctx, Stage::from(&cli.command)) {
        Ok(reports) => {
            for r in &reports {
                for f in &r.files {
                    info!("{}: wrote {}", r.stage, f.display());
                }
            }
            if reports.iter().all(|r| r.checks_passed) {
                ExitCode::SUCCESS
            } else {
                error!("verification check failed");
                ExitCode::from(EXIT_CHECK_FAILED as u8)
            }
        }
        Err(e) => {
            error!("{e:#}");
            ExitCode::from(EXIT_FAILURE as u8)
        }
    }
}
