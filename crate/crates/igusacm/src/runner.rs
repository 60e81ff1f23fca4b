//! Drives a pipeline run with wall-clock accounting and the thread pool.

use std::time::Instant;

use igusacm_core::classpoly::{igusa_class_polynomials, ClassPolynomialSet, PipelineConfig};
use igusacm_core::cmfield::CMFieldSpec;
use igusacm_core::Result;

use crate::formats::Timings;
use crate::threads::ThreadExecutor;

pub fn run_pipeline(
    spec: &CMFieldSpec,
    config: &PipelineConfig,
    exec: &ThreadExecutor,
) -> Result<(ClassPolynomialSet, Timings)> {
    let t0 = Instant::now();
    let set = igusa_class_polynomials(spec, config, exec)?;
    let timings = Timings {
        total_ms: t0.elapsed().as_millis() as u64,
        threads: exec.workers(),
    };
    Ok((set, timings))
}
