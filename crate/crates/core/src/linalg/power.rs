use super::{norm_sq, Matrix};
use crate::rng;

const START_STREAM: u64 = 0x5057_4552; // "POWER"

/// Largest absolute eigenvalue of a symmetric matrix by power iteration.
///
/// The estimate `||S x_k||` for unit iterates `x_k` is non-decreasing, which
/// makes the remaining error extrapolable from successive increments: if
/// increments shrink by a ratio `q`, what is left is about `Δ q / (1 - q)`.
/// Iteration stops once that extrapolated remainder drops below
/// `0.1 * tol * estimate` on two consecutive steps, or after `max_iter`
/// products. The start vector is drawn from `seed`.
pub fn spectral_norm_sym(s: &Matrix, tol: f64, max_iter: usize, seed: u64) -> f64 {
    assert_eq!(
        s.rows(),
        s.cols(),
        "spectral_norm_sym needs a square matrix"
    );
    assert!(tol > 0.0, "tol must be positive");
    let n = s.rows();
    if n == 0 || s.frobenius_sq() == 0.0 {
        return 0.0;
    }

    let mut x: Vec<f64> = (0..n as u64)
        .map(|i| 2.0 * rng::uniform(seed, START_STREAM, i) - 1.0)
        .collect();
    normalize(&mut x);

    let mut estimate = 0.0f64;
    let mut last_increment = f64::INFINITY;
    let mut settled = 0;
    for _ in 0..max_iter.max(1) {
        let mut y = s.matvec(&x);
        let norm = norm_sq(&y).sqrt();
        if norm == 0.0 {
            // start vector in the null space; restart along a fresh direction
            x = (0..n as u64)
                .map(|i| 2.0 * rng::uniform(seed.wrapping_add(1), START_STREAM, i) - 1.0)
                .collect();
            normalize(&mut x);
            continue;
        }
        let increment = (norm - estimate).max(0.0);
        estimate = estimate.max(norm);
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;

        let ratio = if last_increment.is_finite() && last_increment > 0.0 {
            increment / last_increment
        } else {
            1.0
        };
        let remainder = if increment == 0.0 {
            0.0
        } else if ratio < 1.0 {
            increment * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        last_increment = increment;
        if remainder <= 0.1 * tol * estimate && increment <= tol * estimate {
            settled += 1;
            if settled >= 2 {
                break;
            }
        } else {
            settled = 0;
        }
    }
    estimate
}

fn normalize(x: &mut [f64]) {
    let norm = norm_sq(x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigh;
    use crate::rng::standard_normal;

    #[test]
    fn identity_and_diagonal() {
        let v = spectral_norm_sym(&Matrix::identity(3), 1e-10, 1000, 1);
        assert!((v - 1.0).abs() < 1e-12);
        let v = spectral_norm_sym(&Matrix::from_diag(&[5.0, -7.0, 2.0]), 1e-10, 10_000, 1);
        assert!((v - 7.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn zero_matrix_is_zero() {
        assert_eq!(spectral_norm_sym(&Matrix::zeros(4, 4), 1e-6, 100, 0), 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let s = Matrix::from_diag(&[3.0, 2.9, 1.0]);
        let a = spectral_norm_sym(&s, 1e-6, 50, 42);
        let b = spectral_norm_sym(&s, 1e-6, 50, 42);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn random_symmetric_matches_eigh() {
        for seed in 0..10 {
            let n = 12;
            let mut s = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = standard_normal(seed, 2, (i * n + j) as u64);
                    s.set(i, j, v);
                    s.set(j, i, v);
                }
            }
            let oracle = sym_eigh(&s)
                .unwrap()
                .values
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            let est = spectral_norm_sym(&s, 1e-6, 100_000, seed);
            assert!((est - oracle).abs() <= 1e-6 * oracle, "{est} vs {oracle}");
        }
    }
}
