use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::{thread_pool, write_atomic, HarnessError};
use crate::equilibria::{poa, PoaMode};
use crate::games::{optimal_welfare, random_game};
use crate::smoothness::rpoa;

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    /// CSV destination; `None` keeps the rows in memory only.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    /// Seed of this game: base seed plus its index.
    pub seed: u64,
    pub opt: f64,
    pub rpoa: f64,
    pub poa_worst: f64,
    pub poa_best: f64,
}

const SCAN_TOL: f64 = 1e-6;

fn scan_one(rows: usize, cols: usize, seed: u64) -> Result<ScanRow, HarnessError> {
    let g = random_game(2, &[rows, cols], seed)?;
    Ok(ScanRow {
        seed,
        opt: optimal_welfare(&g)?.0,
        rpoa: rpoa(&g, 0.0)?.rho,
        poa_worst: poa(&g, PoaMode::Worst, None)?,
        poa_best: poa(&g, PoaMode::Best, None)?,
    })
}

pub fn write_scan_csv(rows: &[ScanRow], out: &mut dyn Write) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["seed", "opt", "rpoa", "poa_worst", "poa_best"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Random bimatrix games with uniform `[0, 1)` payoffs; game `k` uses seed `seed + k`.
/// Fails with [`HarnessError::Check`] if some row has `poa_worst < rpoa − 1e-6`.
pub fn cmd_scan(config: &ScanConfig) -> Result<Vec<ScanRow>, HarnessError> {
    for (field, v) in [("rows", config.rows), ("cols", config.cols)] {
        if !(1..=5).contains(&v) {
            return Err(HarnessError::Config { field, message: format!("must be between 1 and 5, got {v}") });
        }
    }
    let pool = thread_pool()?;
    let rows: Vec<ScanRow> = pool.install(|| {
        (0..config.count as u64)
            .into_par_iter()
            .map(|k| scan_one(config.rows, config.cols, config.seed.wrapping_add(k)))
            .collect::<Result<_, _>>()
    })?;
    if let Some(path) = &config.out {
        write_atomic(path, |w| write_scan_csv(&rows, w))?;
    }
    if let Some(bad) = rows.iter().find(|r| r.poa_worst < r.rpoa - SCAN_TOL) {
        return Err(HarnessError::Check(format!(
            "seed {}: poa_worst {} < rpoa {}",
            bad.seed, bad.poa_worst, bad.rpoa
        )));
    }
    Ok(rows)
}
