//! Scoped-thread executor. Fixed-point sums are exact, so chunked parallel
//! evaluation is bit-identical to the serial path; `IGUSACM_THREADS` caps
//! the worker count.

use igusacm_core::executor::Executor;

#[derive(Clone, Copy, Debug)]
pub struct ThreadExecutor {
    workers: usize,
}

impl ThreadExecutor {
    pub fn new(workers: usize) -> Self {
        ThreadExecutor {
            workers: workers.max(1),
        }
    }

    /// Worker count from `IGUSACM_THREADS`, defaulting to the machine's
    /// available parallelism.
    pub fn from_env() -> Self {
        let avail = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        let n = std::env::var("IGUSACM_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&v| v > 0)
            .map(|v| v.min(avail.max(1) * 4))
            .unwrap_or(avail);
        ThreadExecutor::new(n)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl Executor for ThreadExecutor {
    fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, n: usize, f: F) -> Vec<T> {
        if self.workers == 1 || n <= 1 {
            return (0..n).map(f).collect();
        }
        let workers = self.workers.min(n);
        let f = &f;
        let mut chunks: Vec<Vec<(usize, T)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|wid| {
                    scope.spawn(move || {
                        // Interleaved assignment balances the uneven stripe
                        // costs without coordination.
                        (wid..n)
                            .step_by(workers)
                            .map(|i| (i, f(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
        for chunk in chunks.drain(..) {
            for (i, v) in chunk {
                out[i] = Some(v);
            }
        }
        out.into_iter().map(Option::unwrap).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_preserved() {
        let ex = ThreadExecutor::new(3);
        let out = ex.map(17, |i| i * i);
        assert_eq!(out, (0..17).map(|i| i * i).collect::<Vec<_>>());
    }
}
