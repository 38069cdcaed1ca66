//! The `vqueue` command: one JSON configuration in, a directory of CSV/JSON
//! results and a `manifest.json` out.

mod commands;
pub mod config;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde_json::json;

pub use config::{parse_config, Command, RunConfig};

/// The second impatience parameter of the transform series is read as the
/// patience rate.
pub const OMEGA2_BINDING: &str = "gamma";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Validation(String),
    #[error(transparent)]
    Model(#[from] vacq::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("validation checks failed: {0}")]
    ChecksFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "vqueue",
    version,
    about = "Vacation queue with balking: simulate, solve, check tails"
)]
pub struct Options {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    pub force: bool,
}

/// What a successful run wrote.
#[derive(Debug)]
pub struct Summary {
    pub files: Vec<PathBuf>,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn run(opts: &Options) -> Result<Summary, CliError> {
    let text = std::fs::read_to_string(&opts.config).map_err(|e| io_err(&opts.config, e))?;
    let (mut cfg, model) = parse_config(&text)?;
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let started = Instant::now();
    let artifacts = commands::dispatch(&cfg, &model)?;
    let wall = started.elapsed().as_secs_f64();

    let mut names: Vec<&str> = artifacts.files.iter().map(|(n, _)| n.as_str()).collect();
    names.push("manifest.json");
    if !opts.force {
        if let Some(clash) = names.iter().map(|n| opts.out.join(n)).find(|p| p.exists()) {
            return Err(CliError::Io(format!(
                "{} exists; pass --force to overwrite",
                clash.display()
            )));
        }
    }
    std::fs::create_dir_all(&opts.out).map_err(|e| io_err(&opts.out, e))?;

    let manifest = json!({
        "tool": "vqueue",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": vacq::VERSION,
        "command": cfg.command.name(),
        "seed": cfg.seed,
        "config": cfg,
        "files": names,
        "omega2_binding": OMEGA2_BINDING,
        "product_convention": cfg.series.form,
        "lambda2_rule": cfg.solve.lambda2_rule,
        "results": artifacts.results,
        "checks_failed": artifacts.failure,
        "wall_time_seconds": wall,
    });
    let mut manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    manifest_text.push('\n');

    let mut written = Vec::new();
    for (name, body) in artifacts
        .files
        .iter()
        .map(|(n, b)| (n.as_str(), b))
        .chain([("manifest.json", &manifest_text)])
    {
        let path = opts.out.join(name);
        std::fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    match artifacts.failure {
        Some(f) => Err(CliError::ChecksFailed(f)),
        None => Ok(Summary { files: written }),
    }
}
