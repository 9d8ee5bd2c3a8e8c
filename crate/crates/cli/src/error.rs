//! Error classification for exit codes: 2 for configuration problems,
//! 3 for bad input data, 4 for runtime failures.

use std::fmt;

use shadowboost::Error as CoreError;

#[derive(Debug)]
pub enum AppError {
    Config(String),
    Data(String),
    Runtime(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Data(_) => 3,
            AppError::Runtime(_) => 4,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(m) => write!(f, "configuration error: {}", m),
            AppError::Data(m) => write!(f, "data error: {}", m),
            AppError::Runtime(m) => write!(f, "runtime error: {}", m),
        }
    }
}

impl std::error::Error for AppError {}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match &e {
            CoreError::InvalidConfig(_) => AppError::Config(e.to_string()),
            CoreError::ShapeMismatch(_)
            | CoreError::NonFinite(_)
            | CoreError::DegenerateResponse(_)
            | CoreError::InvalidResponse(_)
            | CoreError::EmptyInformativeSet => AppError::Data(e.to_string()),
            CoreError::NoUsableCovariate | CoreError::RetryLimit { .. } => {
                AppError::Runtime(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Data(e.to_string())
    }
}

/// Short stable label for per-run failure rows in the benchmark CSV.
pub fn error_label(e: &CoreError) -> &'static str {
    match e {
        CoreError::InvalidConfig(_) => "invalid-config",
        CoreError::ShapeMismatch(_) => "shape-mismatch",
        CoreError::NonFinite(_) => "non-finite",
        CoreError::DegenerateResponse(_) => "degenerate-response",
        CoreError::InvalidResponse(_) => "invalid-response",
        CoreError::NoUsableCovariate => "no-usable-covariate",
        CoreError::RetryLimit { .. } => "retry-limit",
        CoreError::EmptyInformativeSet => "empty-informative-set",
    }
}

pub type AppResult<T> = Result<T, AppError>;
