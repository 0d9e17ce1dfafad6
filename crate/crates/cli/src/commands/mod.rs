//! Subcommand implementations.

pub mod regress;
pub mod report;
pub mod screen;
pub mod sync;
pub mod synth;

use cellsync_core::{Error, Result};

/// Run `f` under an explicitly sized rayon pool when `--threads` is given.
/// Every stage is deterministic regardless, so this only controls resource
/// use.
pub(crate) fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        None => f(),
        Some(0) => Err(Error::Validation("--threads must be ≥ 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Validation(format!("building thread pool: {e}")))?
            .install(f),
    }
}

pub(crate) fn emit_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}
