//! Exact enumeration of (a-)parking functions and their area statistic:
//! counts, area generating polynomials, derivative jets at `x = 1`,
//! factorial and scaled moments, undetermined-coefficient fits of moment
//! formulas, and comparison with the moments of the Airy distribution.

pub mod airy;
pub mod counting;
pub mod error;
pub mod exactalg;
pub mod fit;
pub mod genfun;
pub mod moments;
pub mod parking;
mod sweep;

pub use error::{Error, Result};

/// Runs `f` on a dedicated pool with `threads` workers. Every parallel
/// section in this crate produces identical output for any pool size.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}
