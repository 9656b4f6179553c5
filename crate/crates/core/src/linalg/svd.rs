use super::{axpy, dot, gram, gram_rows, norm_sq, sym_eigh, Matrix};
use crate::error::Result;

/// Singular values with `sigma_k^2 <= RANK_CUTOFF * sigma_1^2` are reported as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Thin SVD `B = Σ_k σ_k u_k v_kᵀ` with `k` ranging over `min(rows, cols)`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Non-increasing, non-negative.
    pub singular_values: Vec<f64>,
    /// One left singular vector (length `rows`) per row.
    pub left_vectors: Matrix,
    /// One right singular vector (length `cols`) per row.
    pub right_vectors: Matrix,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.singular_values
            .iter()
            .take_while(|&&s| s > 0.0)
            .count()
    }

    /// `Σ_k σ_k u_k v_kᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let mut b = Matrix::zeros(self.left_vectors.cols(), self.right_vectors.cols());
        for (k, &sigma) in self.singular_values.iter().enumerate() {
            if sigma == 0.0 {
                continue;
            }
            let v = self.right_vectors.row(k);
            for (i, &u) in self.left_vectors.row(k).iter().enumerate() {
                axpy(sigma * u, v, b.row_mut(i));
            }
        }
        b
    }
}

/// Thin SVD through the eigendecomposition of the smaller Gram matrix.
///
/// For the short-fat case (`rows <= cols`) the left vectors come from `BBᵀ` and
/// the right ones from `v_k = u_kᵀB / σ_k`. Tall input goes through `BᵀB`
/// symmetrically. Directions below the rank cutoff get `σ_k = 0` and a
/// Gram-Schmidt completion seeded from the standard basis, so both vector sets
/// are always full.
pub fn thin_svd(b: &Matrix) -> Result<SvdResult> {
    let (rows, cols) = b.shape();
    let short_fat = rows <= cols;
    let small = if short_fat { gram_rows(b) } else { gram(b) };
    let eig = sym_eigh(&small)?;
    let k = rows.min(cols);

    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let mut singular_values = Vec::with_capacity(k);
    for &lambda in &eig.values[..k] {
        let lambda = lambda.max(0.0);
        if lambda > 0.0 && lambda > RANK_CUTOFF * top {
            singular_values.push(lambda.sqrt());
        } else {
            singular_values.push(0.0);
        }
    }

    // `near` spans the space the small Gram matrix lives in, `far` the other side.
    let near_dim = if short_fat { rows } else { cols };
    let far_dim = if short_fat { cols } else { rows };
    let mut near = Matrix::zeros(k, near_dim);
    let mut far = Matrix::zeros(k, far_dim);
    for (idx, &sigma) in singular_values.iter().enumerate() {
        near.row_mut(idx).copy_from_slice(eig.vectors.row(idx));
        if sigma == 0.0 {
            continue;
        }
        let out = far.row_mut(idx);
        let w = eig.vectors.row(idx);
        if short_fat {
            // v = Bᵀu / σ
            for (i, &wi) in w.iter().enumerate() {
                if wi != 0.0 {
                    axpy(wi / sigma, b.row(i), out);
                }
            }
        } else {
            // u = Bv / σ
            for (i, o) in out.iter_mut().enumerate() {
                *o = dot(b.row(i), w) / sigma;
            }
        }
    }
    let rank = singular_values.iter().take_while(|&&s| s > 0.0).count();
    complete_orthonormal(&mut far, rank);

    let (left_vectors, right_vectors) = if short_fat { (near, far) } else { (far, near) };
    Ok(SvdResult {
        singular_values,
        left_vectors,
        right_vectors,
    })
}

/// Fills rows `filled..` of `q` with unit vectors orthogonal to all earlier rows,
/// trying standard basis vectors in order.
fn complete_orthonormal(q: &mut Matrix, filled: usize) {
    let dim = q.cols();
    let mut next = filled;
    let mut candidate = 0;
    let mut w = vec![0.0; dim];
    while next < q.rows() && candidate < dim {
        w.iter_mut().for_each(|x| *x = 0.0);
        w[candidate] = 1.0;
        candidate += 1;
        for _ in 0..2 {
            for r in 0..next {
                let row = q.row(r);
                let proj = dot(row, &w) / norm_sq(row).max(f64::MIN_POSITIVE);
                axpy(-proj, row, &mut w);
            }
        }
        let norm = norm_sq(&w).sqrt();
        if norm > 1e-6 {
            q.row_mut(next)
                .iter_mut()
                .zip(&w)
                .for_each(|(d, x)| *d = x / norm);
            next += 1;
        }
    }
}
