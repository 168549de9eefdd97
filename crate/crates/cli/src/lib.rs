//! Report, verification and sweep commands over problem files.

pub mod config;
pub mod output;
pub mod report;
pub mod suites;
pub mod sweep;

use std::fmt;

/// Report rows carry this version so downstream readers can detect
/// column changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid configuration or problem input.
    Config(String),
    /// A system exceeds the enumeration budget.
    Budget(String),
    /// One or more verification checks failed.
    Invariant(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Budget(m) => write!(f, "budget error: {m}"),
            CliError::Invariant(n) => write!(f, "{n} invariant check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<infodens::Error> for CliError {
    fn from(e: infodens::Error) -> Self {
        match e {
            infodens::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}
