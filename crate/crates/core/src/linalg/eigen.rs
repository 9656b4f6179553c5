use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 30;
const OFF_DIAGONAL_TOL: f64 = 1e-14;
const SYMMETRY_TOL: f64 = 1e-9;

/// Eigendecomposition `S = Qᵀ diag(values) Q` of a symmetric matrix.
///
/// `vectors` stores one unit eigenvector per row, in the same order as
/// `values`, which are sorted non-increasing.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEigen {
    /// `Qᵀ diag(values) Q`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut s = Matrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            super::add_outer_upper(&mut s, self.vectors.row(k), lambda);
        }
        super::mirror_upper(&mut s);
        s
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps stop once the largest off-diagonal magnitude is at most
/// `1e-14 * ||S||_F`, or after 30 sweeps. The input must be square and
/// symmetric to within `1e-9 * ||S||_F`; it is symmetrized before rotating.
pub fn sym_eigh(s: &Matrix) -> Result<SymEigen> {
    let (rows, cols) = s.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let n = rows;
    let fro = s.frobenius_sq().sqrt();
    let asym = s.max_asymmetry().unwrap_or(0.0);
    if asym > SYMMETRY_TOL * fro {
        return Err(Error::NotSymmetric(asym));
    }

    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (s.get(i, j) + s.get(j, i));
        }
    }
    // rows of `v` are the accumulated eigenvectors
    let mut v = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * fro;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold {
                    continue;
                }
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their sweep order
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.row_mut(dst).copy_from_slice(v.row(src));
    }
    Ok(SymEigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut [f64], v: &mut Matrix, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        a[k * n + p] = new_p;
        a[p * n + k] = new_p;
        a[k * n + q] = new_q;
        a[q * n + k] = new_q;
    }
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    let cols = v.cols();
    let data = &mut v.data;
    let (lo, hi) = data.split_at_mut(q * cols);
    let vp = &mut lo[p * cols..(p + 1) * cols];
    let vq = &mut hi[..cols];
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}
