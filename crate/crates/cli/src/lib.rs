//! Library side of the `kfold` command-line tool.
//!
//! Every subcommand is a function from parsed inputs to a serializable
//! report plus a writer for the requested output formats, so the binary and
//! the integration tests drive the same code.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

pub use config::{ConfigError, Format, RunConfig};

/// Exit status for a command outcome.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const RESOURCE: i32 = 3;
}

/// Raised by `verify` when at least one check fails.
#[derive(Debug, Clone)]
pub struct ChecksFailed {
    pub failed: Vec<String>,
}

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.failed.join(", "))
    }
}

impl std::error::Error for ChecksFailed {}

/// Maps an error chain onto the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return exit::CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<kfold_core::Error>() {
            return match e {
                kfold_core::Error::InvalidArgument(_) => exit::CONFIG,
                kfold_core::Error::ResourceLimit(_) => exit::RESOURCE,
                _ => exit::INTERNAL,
            };
        }
    }
    exit::INTERNAL
}
