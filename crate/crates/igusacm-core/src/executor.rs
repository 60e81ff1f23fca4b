//! Minimal work-distribution abstraction.
//!
//! The theta summation and the per-triple pipeline stages are pure functions
//! over disjoint inputs, and fixed-point addition is exact, so chunked
//! parallel evaluation is bit-identical to sequential evaluation. The core
//! crate only defines the interface and a serial implementation; the `std`
//! companion provides a thread-pool implementation honoring
//! `IGUSACM_THREADS`.

use alloc::vec::Vec;

pub trait Executor {
    /// Evaluates `f(0), …, f(n-1)` (possibly concurrently) and returns the
    /// results in index order.
    fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, n: usize, f: F) -> Vec<T>;
}

/// Runs everything on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }
}
