use thiserror::Error;

/// Process exit status for a successful command.
pub const EXIT_OK: i32 = 0;
/// The golden table deviated from the published values.
pub const EXIT_GOLDEN_MISMATCH: i32 = 1;
/// Invalid configuration or usage.
pub const EXIT_CONFIG: i32 = 2;
/// A numerical routine failed.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("golden mismatch at row x_{row}, column {column}: got {got}, expected {expected} (|diff| = {diff:e})")]
    GoldenMismatch { row: usize, column: &'static str, got: f64, expected: f64, diff: f64 },

    #[error("numeric failure ({context}): {source}")]
    Numeric {
        context: String,
        #[source]
        source: fixiter_core::Error,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::GoldenMismatch { .. } => EXIT_GOLDEN_MISMATCH,
            CliError::Numeric { .. } | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_NUMERIC,
        }
    }

    pub(crate) fn numeric(context: impl Into<String>) -> impl FnOnce(fixiter_core::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Numeric { context, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
