//! Frequent-Directions sketching.
//!
//! Rows of `A` are written into zero rows of an `ell x m` buffer `B`. When no
//! zero row is left the buffer is rotated to `ΣV`, every squared singular
//! value is reduced by `δ = σ_j²` (clamped at zero) and the rows whose value
//! hit zero become free again. Exact mode uses `j = ell`, so a row is freed
//! after every full buffer and `||AᵀA - BᵀB|| <= ||A||_F² / ell`. Fast mode
//! uses `j = ceil(c * ell)`, which frees at least `floor((1 - c) * ell)` rows
//! per decomposition and weakens the bound to `||A||_F² / (c * ell)`.
//!
//! Sketches of disjoint parts of a stream combine with [`FdSketch::merge`];
//! the result obeys the bound of a single sketch over the whole stream.

use crate::baselines::Sketcher;
use crate::error::{invalid, Error, Result};
use crate::linalg::{axpy, norm_sq, thin_svd, Matrix};

pub const MIN_FAST_C: f64 = 0.1;
pub const MAX_FAST_C: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ShrinkMode {
    /// Shrink by the smallest squared singular value.
    Exact,
    /// Shrink by the `ceil(c * ell)`-th squared singular value.
    Fast { c: f64 },
}

#[derive(Clone, Debug)]
pub struct FdSketch {
    ell: usize,
    cols: usize,
    mode: ShrinkMode,
    /// 1-based index of the singular value that sets `δ`.
    shrink_index: usize,
    buffer: Matrix,
    /// Rows `filled..ell` of `buffer` are zero.
    filled: usize,
    delta_total: f64,
    input_frob_sq: f64,
    removed_mass: f64,
    rows_seen: u64,
    svd_calls: u64,
}

impl FdSketch {
    /// Exact-mode sketch with `ell` rows over `cols` columns.
    pub fn new(ell: usize, cols: usize) -> Result<Self> {
        Self::with_mode(ell, cols, ShrinkMode::Exact)
    }

    /// Exact-mode sketch with `ell = ceil(1 / epsilon)`, `epsilon` in `(0, 1]`.
    pub fn with_epsilon(epsilon: f64, cols: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(invalid(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        let ell = (1.0 / epsilon).ceil();
        if ell > usize::MAX as f64 / 2.0 {
            return Err(invalid("epsilon too small"));
        }
        Self::new(ell as usize, cols)
    }

    /// Fast-mode sketch; `c` must lie in `[0.1, 0.9]`.
    pub fn new_fast(ell: usize, cols: usize, c: f64) -> Result<Self> {
        Self::with_mode(ell, cols, ShrinkMode::Fast { c })
    }

    pub fn with_mode(ell: usize, cols: usize, mode: ShrinkMode) -> Result<Self> {
        if ell == 0 {
            return Err(invalid("sketch size ell must be at least 1"));
        }
        if cols == 0 {
            return Err(invalid("column count must be at least 1"));
        }
        let shrink_index = match mode {
            ShrinkMode::Exact => ell,
            ShrinkMode::Fast { c } => {
                if !(MIN_FAST_C..=MAX_FAST_C).contains(&c) {
                    return Err(invalid(format!(
                        "fast-mode c must lie in [0.1, 0.9], got {c}"
                    )));
                }
                // c * ell within rounding of an integer counts as that integer
                ((c * ell as f64 - 1e-9).ceil() as usize).clamp(1, ell)
            }
        };
        Ok(Self {
            ell,
            cols,
            mode,
            shrink_index,
            buffer: Matrix::zeros(ell, cols),
            filled: 0,
            delta_total: 0.0,
            input_frob_sq: 0.0,
            removed_mass: 0.0,
            rows_seen: 0,
            svd_calls: 0,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mode(&self) -> ShrinkMode {
        self.mode
    }

    pub fn shrink_index(&self) -> usize {
        self.shrink_index
    }

    /// `Σ δ_i` over all shrinks so far.
    pub fn delta_total(&self) -> f64 {
        self.delta_total
    }

    /// Squared Frobenius norm of everything appended.
    pub fn input_frob_sq(&self) -> f64 {
        self.input_frob_sq
    }

    /// Squared Frobenius mass removed by shrinking; `ell * delta_total` in exact mode.
    pub fn removed_mass(&self) -> f64 {
        self.removed_mass
    }

    pub fn rows_seen(&self) -> u64 {
        self.rows_seen
    }

    pub fn svd_calls(&self) -> u64 {
        self.svd_calls
    }

    pub fn zero_rows(&self) -> usize {
        self.ell - self.filled
    }

    /// Worst-case spectral error `||A||_F² / shrink_index`, which is at most `||A||_F² / (c * ell)`.
    pub fn error_bound(&self) -> f64 {
        self.input_frob_sq / self.shrink_index as f64
    }

    pub fn append(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: row.len(),
            });
        }
        if let Some(pos) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        self.rows_seen += 1;
        let mass = norm_sq(row);
        if mass == 0.0 {
            // a zero row changes neither BᵀB nor any δ
            return Ok(());
        }
        self.input_frob_sq += mass;
        self.buffer.row_mut(self.filled).copy_from_slice(row);
        self.filled += 1;
        if self.filled == self.ell {
            self.shrink()?;
        }
        Ok(())
    }

    fn shrink(&mut self) -> Result<()> {
        let svd = thin_svd(&self.buffer)?;
        self.svd_calls += 1;
        let delta = svd
            .singular_values
            .get(self.shrink_index - 1)
            .map_or(0.0, |s| s * s);

        let mut next = Matrix::zeros(self.ell, self.cols);
        let mut kept = 0;
        for (k, &sigma) in svd.singular_values.iter().enumerate() {
            let s2 = sigma * sigma;
            self.removed_mass += s2.min(delta);
            let shrunk = (s2 - delta).max(0.0);
            if shrunk > 0.0 {
                axpy(shrunk.sqrt(), svd.right_vectors.row(k), next.row_mut(kept));
                kept += 1;
            }
        }
        self.buffer = next;
        self.filled = kept;
        self.delta_total += delta;
        Ok(())
    }

    /// Borrowed view of the current buffer.
    pub fn buffer(&self) -> &Matrix {
        &self.buffer
    }

    /// Current sketch `B`, zero rows included.
    pub fn sketch(&self) -> Matrix {
        self.buffer.clone()
    }

    /// Streams the rows of another sketch of the same size into this one.
    pub fn merge(&mut self, src_sketch: &Matrix) -> Result<()> {
        if src_sketch.cols() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: src_sketch.cols(),
            });
        }
        if src_sketch.rows() != self.ell {
            return Err(invalid(format!(
                "merged sketch has {} rows, expected ell = {}",
                src_sketch.rows(),
                self.ell
            )));
        }
        for row in src_sketch.iter_rows() {
            self.append(row)?;
        }
        Ok(())
    }

    pub fn merge_sketch(&mut self, other: &FdSketch) -> Result<()> {
        self.merge(&other.buffer)
    }

    /// Projector `V_kᵀ V_k` onto the span of the top-`k` right singular vectors of `B`.
    pub fn lowrank_projection(&self, k: usize) -> Result<Matrix> {
        if k == 0 || k > self.ell {
            return Err(invalid(format!("k must lie in [1, {}], got {k}", self.ell)));
        }
        let svd = thin_svd(&self.buffer)?;
        let basis = &svd.right_vectors;
        let m = self.cols;
        let mut p = Matrix::zeros(m, m);
        for idx in 0..k.min(basis.rows()) {
            crate::linalg::add_outer_upper(&mut p, basis.row(idx), 1.0);
        }
        crate::linalg::mirror_upper(&mut p);
        Ok(p)
    }
}

impl Sketcher for FdSketch {
    fn ell(&self) -> usize {
        self.ell
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn append(&mut self, row: &[f64]) -> Result<()> {
        FdSketch::append(self, row)
    }

    fn finalize(&self) -> Result<Matrix> {
        Ok(self.sketch())
    }
}
