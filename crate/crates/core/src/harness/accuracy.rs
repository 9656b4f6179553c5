use crate::error::{Error, Result};
use crate::linalg::{add_outer_upper, gram, mirror_upper, norm_sq, spectral_norm_sym, Matrix};

pub const ACCURACY_TOL: f64 = 1e-6;
pub const ACCURACY_MAX_ITER: usize = 200_000;
const ACCURACY_SEED: u64 = 0x4143_4355;

/// `||AᵀA - BᵀB||` given `AᵀA`.
pub fn measure_accuracy(a_gram: &Matrix, b: &Matrix) -> Result<f64> {
    let m = a_gram.cols();
    if a_gram.rows() != m {
        return Err(Error::NotSquare {
            rows: a_gram.rows(),
            cols: m,
        });
    }
    if b.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: b.cols(),
        });
    }
    let diff = a_gram.sub(&gram(b))?;
    Ok(spectral_norm_sym(
        &diff,
        ACCURACY_TOL,
        ACCURACY_MAX_ITER,
        ACCURACY_SEED,
    ))
}

/// Worst-case Frequent-Directions error `||A||_F² / (c ell)`; `c = 1` for exact mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdBound {
    pub ell: usize,
    pub c: f64,
    pub frob_sq: f64,
}

impl FdBound {
    pub fn bound(&self) -> f64 {
        self.frob_sq / (self.c * self.ell as f64)
    }
}

/// Streams rows into `AᵀA` and `||A||_F²`.
#[derive(Clone, Debug)]
pub struct GramAccumulator {
    gram: Matrix,
    frob_sq: f64,
    rows: u64,
}

impl GramAccumulator {
    pub fn new(cols: usize) -> Self {
        Self {
            gram: Matrix::zeros(cols, cols),
            frob_sq: 0.0,
            rows: 0,
        }
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.gram.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.gram.cols(),
                actual: row.len(),
            });
        }
        add_outer_upper(&mut self.gram, row, 1.0);
        self.frob_sq += norm_sq(row);
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn frob_sq(&self) -> f64 {
        self.frob_sq
    }

    pub fn finish(mut self) -> Matrix {
        mirror_upper(&mut self.gram);
        self.gram
    }
}
