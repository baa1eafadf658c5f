use thiserror::Error;

use crate::validate::Violation;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Process exit status for I/O failures while writing artifacts.
pub const EXIT_IO: i32 = 1;
/// Process exit status for configurations that violate a module precondition.
pub const EXIT_VALIDATION: i32 = 2;
/// Process exit status for runs that would exceed a table or codebook cap.
pub const EXIT_RESOURCE: i32 = 3;
/// Process exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("configuration rejected:\n{}", list(.0))]
    Invalid(Vec<Violation>),

    #[error(transparent)]
    Core(#[from] coordsim::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  - {}", x.message))
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(_) => EXIT_VALIDATION,
            CliError::Invalid(v) if v.iter().all(|x| x.is_cap()) => EXIT_RESOURCE,
            CliError::Invalid(_) => EXIT_VALIDATION,
            CliError::Core(e) if e.is_resource() => EXIT_RESOURCE,
            CliError::Core(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}
