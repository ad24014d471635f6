//! Command-line front end: model documents in, JSON reports out.

pub mod commands;
pub mod model;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::Parser;

use commands::Command;
use report::{to_canonical_json, Report, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "gaussctl", version, about = "Controllability analysis for quadratic oscillator models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Runs a command and builds its report. Errors are input problems.
pub fn execute(command: &Command) -> Result<Report> {
    let start = Instant::now();
    let outcome = command.run()?;
    Ok(Report {
        command: command.name().to_string(),
        arguments: serde_json::to_value(command)?,
        tool_version: TOOL_VERSION,
        input_digest: outcome.input_digest,
        tolerances: outcome.tolerances,
        exit_status: outcome.status,
        results: outcome.results,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Writes the report and returns the process exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    let report = execute(&cli.command)?;
    let text = to_canonical_json(&report)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.exit_status)
}
