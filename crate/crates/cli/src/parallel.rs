//! Fan-out of independent runs, capped by `CPDE_THREADS`.

use crate::error::CliError;
use rayon::prelude::*;

pub const THREADS_VAR: &str = "CPDE_THREADS";

/// `None` uses rayon's default pool, `Some(0)` runs sequentially.
pub fn thread_limit() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{THREADS_VAR} must be a non-negative integer, got `{v}`"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("{THREADS_VAR}: {e}"))),
    }
}

/// Maps `f` over `items`, keeping the input order whatever the completion order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match thread_limit()? {
        Some(0) => Ok(items.iter().map(f).collect()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(|| items.par_iter().map(f).collect()))
        }
        None => Ok(items.par_iter().map(f).collect()),
    }
}
