//! Command-line front end: configuration, commands, the acceptance suite
//! and machine-readable records.

pub mod commands;
pub mod config;
pub mod error;
pub mod fields;
pub mod record;
pub mod suite;

use std::time::Instant;

use serde_json::json;

pub use config::{Command, Format, RunConfig};
pub use error::{CliError, CliResult};
pub use record::{ResultRecord, Status, SCHEMA_VERSION};

/// Environment variable consulted when no thread count is configured.
pub const THREADS_ENV: &str = "FUETERLAB_THREADS";

/// Thread count: explicit setting, then the environment, then rayon's default.
pub fn resolve_threads(explicit: Option<usize>) -> CliResult<Option<usize>> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs the suite and wraps the criteria in a signed record.
pub fn cmd_suite(config: &RunConfig) -> CliResult<ResultRecord> {
    let criteria = suite::run(config.seed, config.filter.as_deref(), config.quick, config.timings);
    if criteria.is_empty() {
        return Err(CliError::Config(format!("filter {:?} selects no criterion", config.filter)));
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    let status = if passed == criteria.len() { Status::Pass } else { Status::Fail };
    let outputs = json!({ "criteria": criteria, "passed": passed, "total": criteria.len() });
    let mut record = ResultRecord::new(config, status, outputs, Vec::new());
    record.sign();
    Ok(record)
}

fn dispatch(config: &RunConfig) -> CliResult<ResultRecord> {
    match config.command {
        Command::Kernel => commands::cmd_kernel(config),
        Command::Selfdual => commands::cmd_selfdual(config),
        Command::Chern => commands::cmd_chern(config),
        Command::Ord => commands::cmd_ord(config),
        Command::Suite => cmd_suite(config),
    }
}

/// Validates the configuration and runs its command on a dedicated pool.
pub fn execute(config: &RunConfig) -> CliResult<ResultRecord> {
    config.validate()?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = resolve_threads(config.threads)? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    let mut record = pool.install(|| dispatch(config))?;
    if config.timings {
        record.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(record)
}
