//! Parallel, deterministic experiment runners. Replicas are cut into
//! fixed-size chunks independent of the worker count; each chunk draws
//! its own replica streams and chunks are concatenated in order.

use rayon::prelude::*;
use rayon::ThreadPool;

use wdg_core::montecarlo::{clt_report, draw_replicas, CltReport, SampleBatch, Statistic};

use crate::error::{CliError, CliResult};

/// Replicas per work item.
pub const CHUNK: u64 = 64;

/// A pool with `workers` threads, or the available parallelism.
pub fn pool(workers: Option<usize>) -> CliResult<ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn parallel_batch(pool: &ThreadPool, stat: &Statistic, n: usize, count: usize, seed: u64) -> CliResult<SampleBatch> {
    let count = count as u64;
    let chunks: Vec<(u64, u64)> = (0..count.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(count)))
        .collect();
    let parts = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(a, b)| draw_replicas(stat, n, seed, a..b))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let (model, name) = stat.tags();
    Ok(SampleBatch {
        model: model.into(),
        statistic: name.into(),
        n,
        seed,
        jittered: stat.is_integer(),
        values: parts.into_iter().flatten().collect(),
    })
}

/// The report of `wdg_core::montecarlo::clt_experiment`, computed in
/// parallel; bit-identical to it for every worker count.
pub fn clt_experiment(pool: &ThreadPool, stat: &Statistic, grid: &[usize], count: usize, seed: u64) -> CliResult<CltReport> {
    let batches = grid
        .iter()
        .map(|&n| parallel_batch(pool, stat, n, count, seed))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(clt_report(stat, &batches)?)
}
