//! The synthetic experiment grid.
//!
//! Each `(d, zeta, repetition)` cell generates one matrix, then every
//! `(ell, method)` pair sketches it from scratch. Only the append and finalize
//! calls are timed; generation and accuracy evaluation are not. Seeds are
//! derived from the cell coordinates, so accuracies do not depend on whether
//! cells run in parallel.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::accuracy::measure_accuracy;
use crate::baselines::Method;
use crate::datagen::{GenSpec, Generator};
use crate::error::Result;
use crate::linalg::{gram, Matrix};
use crate::rng::hash3;

const CELL_STREAM: u64 = 0x4345_4c4c;
const SKETCH_STREAM: u64 = 0x534b_4554;

/// One measured sketch. Field order is the results CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: String,
    pub ell: usize,
    pub d: usize,
    pub zeta: f64,
    pub seed: u64,
    pub repetition: usize,
    pub accuracy: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchGrid {
    pub n: usize,
    pub m: usize,
    pub ells: Vec<usize>,
    pub ds: Vec<usize>,
    pub zetas: Vec<f64>,
    pub methods: Vec<Method>,
    pub repetitions: usize,
    pub base_seed: u64,
    /// Fast-mode parameter for `fd-fast`.
    pub c: f64,
    /// Run `(d, zeta, repetition)` cells on the rayon pool.
    pub parallel: bool,
}

impl BenchGrid {
    /// A grid that finishes in a few minutes on a laptop.
    pub fn desk() -> Self {
        Self {
            n: 2000,
            m: 200,
            ells: (1..=8).map(|k| 10 * k).collect(),
            ds: vec![5, 10, 20],
            zetas: vec![1.0, 5.0, 10.0],
            methods: vec![
                Method::FdFast,
                Method::Naive,
                Method::BruteForce,
                Method::Sampling,
                Method::Hashing,
                Method::RandomProjection,
            ],
            repetitions: 3,
            base_seed: 1,
            c: 1.0 / 3.0,
            parallel: false,
        }
    }

    /// The full-size grid: n = 10000, m = 1000, 30 sketch sizes, 7 repetitions.
    pub fn full() -> Self {
        Self {
            n: 10_000,
            m: 1000,
            ells: (1..=30).map(|k| 10 * k).collect(),
            ds: vec![5, 10, 20, 50, 100],
            zetas: (1..=15).map(f64::from).collect(),
            repetitions: 7,
            ..Self::desk()
        }
    }

    /// Seed of the matrix generated for a cell.
    pub fn cell_seed(&self, d: usize, zeta: f64, repetition: usize) -> u64 {
        let coord = hash3(d as u64, zeta.to_bits(), repetition as u64);
        hash3(self.base_seed, CELL_STREAM, coord)
    }

    /// Seed handed to a sketcher inside a cell.
    pub fn sketch_seed(cell_seed: u64, ell: usize, method: Method) -> u64 {
        hash3(
            cell_seed,
            SKETCH_STREAM,
            ((ell as u64) << 8) | method as u64,
        )
    }
}

/// Per-matrix facts the records refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSummary {
    pub d: usize,
    pub zeta: f64,
    pub repetition: usize,
    pub seed: u64,
    pub frob_sq: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure {
    pub d: usize,
    pub zeta: f64,
    pub repetition: usize,
    pub ell: Option<usize>,
    pub method: Option<Method>,
    pub error: String,
}

#[derive(Clone, Debug, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub matrices: Vec<MatrixSummary>,
    pub failures: Vec<CellFailure>,
}

struct CellResult {
    records: Vec<BenchRecord>,
    summary: Option<MatrixSummary>,
    failures: Vec<CellFailure>,
}

/// Runs the whole grid. Failures are collected per cell; the grid always completes.
pub fn run_bench(grid: &BenchGrid) -> BenchOutcome {
    let mut cells = Vec::new();
    for &d in &grid.ds {
        for &zeta in &grid.zetas {
            for rep in 0..grid.repetitions {
                cells.push((d, zeta, rep));
            }
        }
    }
    if grid.methods.is_empty() || grid.ells.is_empty() {
        return BenchOutcome::default();
    }

    let results: Vec<CellResult> = if grid.parallel {
        cells
            .par_iter()
            .map(|&(d, zeta, rep)| run_cell(grid, d, zeta, rep))
            .collect()
    } else {
        cells
            .iter()
            .map(|&(d, zeta, rep)| run_cell(grid, d, zeta, rep))
            .collect()
    };

    let mut outcome = BenchOutcome::default();
    for r in results {
        outcome.records.extend(r.records);
        outcome.matrices.extend(r.summary);
        outcome.failures.extend(r.failures);
    }
    outcome
}

fn run_cell(grid: &BenchGrid, d: usize, zeta: f64, repetition: usize) -> CellResult {
    let seed = grid.cell_seed(d, zeta, repetition);
    let failure = |ell, method, error: String| CellFailure {
        d,
        zeta,
        repetition,
        ell,
        method,
        error,
    };
    let spec = GenSpec {
        n: grid.n,
        m: grid.m,
        d,
        zeta,
        seed,
    };
    let a = match Generator::new(spec) {
        Ok(g) => g.matrix(),
        Err(e) => {
            return CellResult {
                records: Vec::new(),
                summary: None,
                failures: vec![failure(None, None, e.to_string())],
            }
        }
    };
    let a_gram = gram(&a);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &ell in &grid.ells {
        for &method in &grid.methods {
            let sketch_seed = BenchGrid::sketch_seed(seed, ell, method);
            match time_method(method, ell, grid.c, sketch_seed, &a)
                .and_then(|(b, secs)| Ok((measure_accuracy(&a_gram, &b)?, secs)))
            {
                Ok((accuracy, seconds)) => records.push(BenchRecord {
                    method: method.name().to_string(),
                    ell,
                    d,
                    zeta,
                    seed,
                    repetition,
                    accuracy,
                    seconds,
                }),
                Err(e) => failures.push(failure(Some(ell), Some(method), e.to_string())),
            }
        }
    }
    CellResult {
        records,
        summary: Some(MatrixSummary {
            d,
            zeta,
            repetition,
            seed,
            frob_sq: a.frobenius_sq(),
        }),
        failures,
    }
}

fn time_method(method: Method, ell: usize, c: f64, seed: u64, a: &Matrix) -> Result<(Matrix, f64)> {
    let mut sketcher = method.build(ell, a.cols(), c, seed)?;
    let start = Instant::now();
    for row in a.iter_rows() {
        sketcher.append(row)?;
    }
    let b = sketcher.finalize()?;
    Ok((b, start.elapsed().as_secs_f64()))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Median accuracy and median time per `(method, ell, d, zeta)` over repetitions.
///
/// In the output `seed` is the grid's base seed and `repetition` holds the
/// number of repetitions aggregated.
pub fn median_records(records: &[BenchRecord], base_seed: u64) -> Vec<BenchRecord> {
    // (method, ell, d, zeta bits) -> (accuracies, seconds)
    type Groups = BTreeMap<(String, usize, usize, u64), (Vec<f64>, Vec<f64>)>;
    let mut groups = Groups::new();
    for r in records {
        let entry = groups
            .entry((r.method.clone(), r.ell, r.d, r.zeta.to_bits()))
            .or_default();
        entry.0.push(r.accuracy);
        entry.1.push(r.seconds);
    }
    groups
        .into_iter()
        .map(
            |((method, ell, d, zeta_bits), (mut acc, mut secs))| BenchRecord {
                method,
                ell,
                d,
                zeta: f64::from_bits(zeta_bits),
                seed: base_seed,
                repetition: acc.len(),
                accuracy: median(&mut acc),
                seconds: median(&mut secs),
            },
        )
        .collect()
}

/// Writes records as CSV with header `method,ell,d,zeta,seed,repetition,accuracy,seconds`.
pub fn write_records(path: impl AsRef<Path>, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if records.is_empty() {
        w.write_record([
            "method",
            "ell",
            "d",
            "zeta",
            "seed",
            "repetition",
            "accuracy",
            "seconds",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
