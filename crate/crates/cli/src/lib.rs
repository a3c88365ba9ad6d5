//! Commands behind the `metaconverse` binary. Each command returns its
//! output text together with any failed internal checks, so callers decide
//! how to write and how to exit.

mod check;
mod figures;
mod format;
mod lossy_demo;
mod solve;

use std::path::PathBuf;

use thiserror::Error;

pub use check::cmd_check;
pub use figures::{cmd_bsc_fig2, cmd_example_fig1};
pub use format::fmt_g12;
pub use lossy_demo::{cmd_lossy_demo, LossyInstance};
pub use solve::{cmd_solve, QyChoice, SolveInstance};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] metaconverse_core::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for exceeded size guards, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(metaconverse_core::Error::GuardExceeded { .. }) => 2,
            _ => 1,
        }
    }
}

/// Exit status for a run whose internal checks failed.
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Rendered command output and the names of any failed checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(serde_json::from_str(&text)?)
}
