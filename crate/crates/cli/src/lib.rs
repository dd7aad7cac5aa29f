//! Command implementations behind the `msetord` binary. Each command
//! returns its output text and exit code so the binary stays a thin shell.

pub mod bench;
pub mod check;
mod error;
pub mod fuzzy;
pub mod instance;
pub mod perf;

pub use error::{CliError, Result};

/// Text to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub code: i32,
}

impl Report {
    pub fn ok(text: impl Into<String>) -> Self {
        Self { text: text.into(), code: 0 }
    }

    pub fn failed(text: impl Into<String>) -> Self {
        Self { text: text.into(), code: 1 }
    }
}
