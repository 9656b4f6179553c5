#![allow(dead_code)]

use fdsketch::linalg::{gram, Matrix};
use fdsketch::rng::{standard_normal, uniform};
use nalgebra::DMatrix;

pub fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

/// i.i.d. standard normal `rows x cols`.
pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| {
        standard_normal(seed, 0xA11CE, (i * cols + j) as u64)
    })
}

/// Singular values of `a`, non-increasing, from nalgebra.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Eigenvalues of a symmetric matrix, non-increasing, from nalgebra.
pub fn eigenvalues(s: &Matrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_na(s).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// `AᵀA - BᵀB`.
pub fn gram_gap(a: &Matrix, b: &Matrix) -> Matrix {
    gram(a).sub(&gram(b)).unwrap()
}

/// `(min eigenvalue, spectral norm)` of a symmetric matrix.
pub fn min_and_norm(s: &Matrix) -> (f64, f64) {
    let ev = eigenvalues(s);
    let min = *ev.last().unwrap();
    let norm = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (min, norm)
}

/// Item stream over `items` ids with Zipf(1.1)-like skew.
pub fn skewed_stream(n: usize, items: usize, seed: u64) -> Vec<usize> {
    let weights: Vec<f64> = (0..items)
        .map(|j| 1.0 / ((j + 1) as f64).powf(1.1))
        .collect();
    let total: f64 = weights.iter().sum();
    (0..n as u64)
        .map(|i| {
            let mut u = uniform(seed, 0x5EED, i) * total;
            for (j, w) in weights.iter().enumerate() {
                if u < *w {
                    return j;
                }
                u -= w;
            }
            items - 1
        })
        .collect()
}

pub fn indicator(item: usize, dim: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[item] = 1.0;
    e
}
