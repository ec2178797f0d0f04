use std::fmt;
use std::path::Path;

use cqg_core::khintchine::KhintchineError;
use cqg_core::models::ModelError;
use cqg_core::schur::SchurError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_DIVERGENT: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// A diagnostic with a stable code and the exit status it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn validation(code: &'static str, message: String) -> Self {
        CliError { code, message, exit: EXIT_VALIDATION }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError { code: "CLI_IO", message: format!("{}: {err}", path.display()), exit: EXIT_IO }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::validation(e.code(), e.to_string())
    }
}

impl From<KhintchineError> for CliError {
    fn from(e: KhintchineError) -> Self {
        CliError::validation(e.code(), e.to_string())
    }
}

impl From<SchurError> for CliError {
    fn from(e: SchurError) -> Self {
        CliError::validation(e.code(), e.to_string())
    }
}
