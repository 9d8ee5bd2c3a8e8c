//! Library side of the `shadowboost` CLI: CSV/JSON I/O, key-value config
//! files, and the benchmark harness. The binary in `main.rs` is a thin
//! clap wrapper over these modules.

pub mod bench;
pub mod config;
pub mod error;
pub mod io;

pub use error::{AppError, AppResult};

/// Environment variable that sets the rayon thread-pool size.
pub const THREADS_ENV_VAR: &str = "SHADOWBOOST_THREADS";

/// Builds the global thread pool from `SHADOWBOOST_THREADS` if set.
/// Must run before any parallel work.
pub fn init_thread_pool() -> AppResult<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV_VAR) {
        let threads: usize = raw.parse().map_err(|_| {
            AppError::Config(format!(
                "{} must be a positive integer, got '{}'",
                THREADS_ENV_VAR, raw
            ))
        })?;
        if threads == 0 {
            return Err(AppError::Config(format!(
                "{} must be a positive integer",
                THREADS_ENV_VAR
            )));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| AppError::Runtime(e.to_string()))?;
    }
    Ok(())
}
