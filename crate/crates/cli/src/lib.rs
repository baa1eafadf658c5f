//! Command-line front end of the coordsim toolkit.
//!
//! Every command reads an [`ExperimentConfig`] assembled from an optional JSON
//! file and flag overrides, validates it, runs it and writes a CSV or JSON
//! artifact that embeds the toolkit version, the full configuration and the
//! seed list.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use cache::{Cache, CACHE_ENV};
pub use commands::{execute, TOOLKIT_VERSION};
pub use config::{parse_seeds, CommandKind, ExperimentConfig, Overrides, Rate, Scheme, SeedList};
pub use error::{CliError, EXIT_IO, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VALIDATION};
pub use validate::{validate, Violation, ViolationKind};

#[derive(Debug, Parser)]
#[command(name = "coordsim", version, about = "Strong coordination over noisy channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Randomness sum rates of the binary example over a channel-noise grid (CSV).
    Fig3(Overrides),
    /// Communication rates of the binary example over a channel-noise grid (CSV).
    Fig4(Overrides),
    /// Induced-pmf gaps and decoding errors of the allied scheme (JSON).
    Allied(Overrides),
    /// Monte Carlo run of the joint coordination scheme (JSON).
    Coordinate(Overrides),
    /// Monte Carlo run of the separation scheme (JSON).
    Separate(Overrides),
    /// Channel-noise recovery and extraction diagnostics (JSON).
    Lemma4(Overrides),
    /// Achievable-region membership of a rate tuple (JSON).
    RegionCheck(Overrides),
    /// Lists every violated precondition without running anything (JSON).
    Validate {
        /// Command whose preconditions apply; defaults to the config file's `command`.
        #[arg(long = "for", value_enum)]
        target: Option<CommandKind>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    command: Option<CommandKind>,
    valid: bool,
    violations: &'a [Violation],
}

/// Validates and executes `config`, returning the artifact text.
pub fn run_config(config: &ExperimentConfig, cache: &Cache) -> Result<String, CliError> {
    let violations = validate(config);
    if !violations.is_empty() {
        return Err(CliError::Invalid(violations));
    }
    execute(config, cache)
}

fn write_artifact(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, text)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    let (kind, overrides) = match command {
        Command::Fig3(o) => (CommandKind::Fig3, o),
        Command::Fig4(o) => (CommandKind::Fig4, o),
        Command::Allied(o) => (CommandKind::Allied, o),
        Command::Coordinate(o) => (CommandKind::Coordinate, o),
        Command::Separate(o) => (CommandKind::Separate, o),
        Command::Lemma4(o) => (CommandKind::Lemma4, o),
        Command::RegionCheck(o) => (CommandKind::RegionCheck, o),
        Command::Validate { target, overrides } => {
            let mut config = overrides.resolve()?;
            if target.is_some() {
                config.command = target;
            }
            let violations = validate(&config);
            let report = ValidationReport {
                command: config.command,
                valid: violations.is_empty(),
                violations: &violations,
            };
            let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
            text.push('\n');
            write_artifact(&text, config.output.as_deref())?;
            return Ok(if violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            });
        }
    };
    let mut config = overrides.resolve()?;
    config.command = Some(kind);
    let text = run_config(&config, &Cache::from_env())?;
    write_artifact(&text, config.output.as_deref())?;
    Ok(EXIT_OK)
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("coordsim: {e}");
            e.exit_code()
        }
    }
}
