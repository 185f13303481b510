//! CLI error type and the process exit-code policy.
//!
//! Exit codes: 0 success; 2 parse/validation error (including bad paths
//! and malformed input files); 3 numeric-certification failure; 4
//! internal invariant violation (e.g. a vanishing convergent
//! denominator).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Unparseable or invalid input: bad coordinates, malformed JSON,
    /// out-of-range grids, unusable paths. Exit code 2.
    Parse(String),
    /// A certified numeric claim failed: verification mismatch, or a
    /// tolerance that could not be certified. Exit code 3.
    Certification(String),
    /// A mathematical invariant broke mid-computation. Exit code 4.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Certification(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Certification(m) | CliError::Invariant(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message())
    }
}

impl From<heiscf::Error> for CliError {
    fn from(e: heiscf::Error) -> Self {
        match e {
            heiscf::Error::Precondition(_) => CliError::Parse(e.to_string()),
            heiscf::Error::Certification(_) => CliError::Certification(e.to_string()),
            // Everything else (vanishing denominators, zero digits raised
            // by the engine, unitarity breaches, inversion at the
            // identity, …) is an invariant violation at this level.
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(format!(
            "JSON error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Wraps an I/O result with the offending path.
pub fn io_ctx<T>(r: std::io::Result<T>, path: &std::path::Path) -> CliResult<T> {
    r.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
