//! Parallel sweeps over `(phase, t₁)` blocks with a resumable ledger file.
//!
//! Blocks are computed a chunk at a time on a rayon pool and written in
//! canonical order, so the file never depends on the worker count or on
//! where a previous run stopped.

use std::path::Path;
use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;

use spectroqsim_core::ledger::MeasurementLedger;
use spectroqsim_core::protocol::{Block, Protocol, SweepContext};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ledger_io::{ledger_shape, read_ledger, rewrite_complete_blocks, LedgerWriter};

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker threads; `None` lets rayon decide.
    pub workers: Option<usize>,
    /// Continue an existing ledger instead of refusing to overwrite it.
    pub resume: bool,
    /// Stop after this many new blocks.
    pub max_blocks: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub ledger: MeasurementLedger,
    /// Blocks computed by this call.
    pub computed: usize,
    /// Complete blocks found on disk.
    pub reused: usize,
    /// Blocks that are still missing.
    pub remaining: usize,
}

pub fn context(cfg: &RunConfig) -> Result<SweepContext> {
    let exp = cfg.experiment()?;
    Ok(match cfg.protocol()? {
        Protocol::Sqsp => SweepContext::sqsp(&exp)?,
        Protocol::Pqp => SweepContext::pqp(&exp, &cfg.probes()?)?,
    })
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| Error::Pool(e.to_string()))
}

fn compute(
    pool: &rayon::ThreadPool,
    ctx: &SweepContext,
    todo: &[(usize, usize)],
) -> Result<Vec<Block>> {
    pool.install(|| {
        todo.par_iter()
            .map(|&(phase, t1)| ctx.block(phase, t1))
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(Error::from)
}

/// Whole sweep in memory. Bitwise equal to `SweepContext::run_serial`.
pub fn run_parallel(ctx: &SweepContext, workers: Option<usize>) -> Result<MeasurementLedger> {
    let pool = pool(workers)?;
    let shape = ctx.ledger_shape();
    let todo: Vec<_> = (0..shape.n_phase)
        .flat_map(|p| (0..shape.n_t1).map(move |t| (p, t)))
        .collect();
    let mut ledger = MeasurementLedger::new(shape);
    for b in compute(&pool, ctx, &todo)? {
        ledger.insert_block(&b)?;
    }
    Ok(ledger)
}

/// Runs or resumes the sweep described by `cfg` into the ledger at `path`.
pub fn run_sweep(cfg: &RunConfig, path: &Path, opts: &SweepOptions) -> Result<SweepReport> {
    cfg.validate()?;
    let shape = ledger_shape(cfg)?;
    let (mut ledger, reused) = if path.exists() {
        if !opts.resume {
            return Err(Error::LedgerExists(path.to_path_buf()));
        }
        let found = read_ledger(path)?;
        if found.hash != cfg.hash() {
            return Err(Error::HashMismatch {
                expected: cfg.hash(),
                found: found.hash,
            });
        }
        // Partial blocks and interrupted lines are dropped and recomputed.
        let mut complete = MeasurementLedger::new(shape);
        for (k, v) in found.ledger.iter() {
            if found.ledger.has_block(k.phase, k.t1) {
                complete.insert(&k, v)?;
            }
        }
        let reused = rewrite_complete_blocks(path, cfg, &complete)?;
        info!(
            "resuming {}: {reused} complete blocks on disk",
            path.display()
        );
        (complete, reused)
    } else {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(crate::error::io_err(dir))?;
        }
        LedgerWriter::create(path, cfg)?;
        (MeasurementLedger::new(shape), 0)
    };

    let mut todo: Vec<(usize, usize)> = (0..shape.n_phase)
        .flat_map(|p| (0..shape.n_t1).map(move |t| (p, t)))
        .filter(|&(p, t)| !ledger.has_block(p, t))
        .collect();
    let total_missing = todo.len();
    if let Some(m) = opts.max_blocks {
        todo.truncate(m);
    }
    if todo.is_empty() {
        return Ok(SweepReport {
            ledger,
            computed: 0,
            reused,
            remaining: total_missing,
        });
    }

    let ctx = context(cfg)?;
    let pool = pool(opts.workers)?;
    let chunk = 4 * pool.current_num_threads();
    let mut writer = LedgerWriter::append(path, cfg)?;
    let start = Instant::now();
    let mut done = 0;
    for part in todo.chunks(chunk) {
        for b in compute(&pool, &ctx, part)? {
            writer.write_block(&b)?;
            ledger.insert_block(&b)?;
        }
        writer.flush()?;
        done += part.len();
        debug!("{done}/{} blocks, {:.1?}", todo.len(), start.elapsed());
    }
    info!("computed {done} blocks in {:.1?}", start.elapsed());
    Ok(SweepReport {
        ledger,
        computed: done,
        reused,
        remaining: total_missing - done,
    })
}
