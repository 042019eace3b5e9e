//! Command-line surface of `fibnest`: argument parsing, config
//! resolution, report rendering and plotting.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod plot;

use std::io::Write;

pub use args::Cli;
pub use commands::Output;
pub use config::{RunConfig, PRECISION_ENV};
pub use error::{CliError, EXIT_COMPUTE, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

/// Runs a parsed command without touching the filesystem beyond reading
/// the config file. Parallel suites run on a pool of `--workers` threads.
pub fn execute(cli: &Cli, env_precision: Option<String>) -> Result<Output, CliError> {
    let cfg = RunConfig::resolve(cli, env_precision)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    pool.install(|| commands::dispatch(&cli.command, &cfg))
}

/// [`execute`], then writes the report (to `--output` or `out`) and any
/// side files. Returns the exit status.
pub fn run(cli: &Cli, env_precision: Option<String>, out: &mut dyn Write) -> Result<u8, CliError> {
    let output = execute(cli, env_precision.clone())?;
    let cfg = RunConfig::resolve(cli, env_precision)?;
    for (path, bytes) in &output.files {
        std::fs::write(path, bytes)?;
    }
    match (&cfg.output, output.files.is_empty()) {
        (Some(path), true) => std::fs::write(path, &output.report)?,
        _ => out.write_all(&output.report)?,
    }
    Ok(if output.passed { EXIT_OK } else { EXIT_FAILED })
}
