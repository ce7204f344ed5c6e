//! Library half of the `multidep` binary: CSV ingestion, JSON/DOT rendering,
//! and the command runners. The binary in `main.rs` only parses arguments,
//! configures the thread pool, and maps errors to exit codes.

pub mod commands;
pub mod csv_io;
pub mod graph;
pub mod json;

/// Exit code 0: success, 2: configuration or input error, 3: computation
/// error.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn compute(err: multidep::Error) -> CliError {
        CliError {
            code: 3,
            message: err.to_string(),
        }
    }

    pub fn compute_msg(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
