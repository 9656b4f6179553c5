mod common;

use common::*;
use fdsketch::baselines::{BruteForce, Hashing, Naive, RandomProjection, Sampling};
use fdsketch::linalg::{gram, Matrix};
use fdsketch::{Method, Sketcher};
use proptest::prelude::*;

fn run(mut s: Box<dyn Sketcher>, a: &Matrix) -> Matrix {
    for r in a.iter_rows() {
        s.append(r).unwrap();
    }
    s.finalize().unwrap()
}

/// Entrywise `|mean(BᵀB) - AᵀA| <= 4 * standard error` over `seeds`.
fn assert_unbiased(method: Method, a: &Matrix, ell: usize, seeds: u64) {
    let m = a.cols();
    let target = gram(a);
    let mut sum = vec![0.0; m * m];
    let mut sum_sq = vec![0.0; m * m];
    for seed in 0..seeds {
        let g = gram(&run(method.build(ell, m, 0.5, seed).unwrap(), a));
        for (k, v) in g.as_slice().iter().enumerate() {
            sum[k] += v;
            sum_sq[k] += v * v;
        }
    }
    let n = seeds as f64;
    for k in 0..m * m {
        let mean = sum[k] / n;
        let var = (sum_sq[k] / n - mean * mean).max(0.0) * n / (n - 1.0);
        let se = (var / n).sqrt();
        let diff = (mean - target.as_slice()[k]).abs();
        assert!(
            diff <= 4.0 * se + 1e-9,
            "{method} entry {k}: |{mean} - {}| > 4 * {se}",
            target.as_slice()[k]
        );
    }
}

#[test]
fn randomized_methods_are_unbiased() {
    let a = gaussian(120, 6, 9);
    for method in [Method::Sampling, Method::Hashing, Method::RandomProjection] {
        assert_unbiased(method, &a, 4, 200);
    }
}

#[test]
fn brute_force_error_is_next_singular_value() {
    for seed in 0..6 {
        let a = gaussian(60, 15, seed);
        let sigma = singular_values(&a);
        for ell in [1, 4, 10] {
            let b = run(Box::new(BruteForce::new(ell, 15).unwrap()), &a);
            let (_, err) = min_and_norm(&gram_gap(&a, &b));
            let want = sigma[ell].powi(2);
            assert!(
                (err - want).abs() <= 1e-8 * sigma[0].powi(2),
                "ell={ell}: {err} vs {want}"
            );
        }
    }
}

#[test]
fn naive_returns_zeros() {
    let a = gaussian(10, 4, 1);
    let b = run(Box::new(Naive::new(3, 4).unwrap()), &a);
    assert_eq!(b, Matrix::zeros(3, 4));
}

#[test]
fn sampling_keeps_whole_rows() {
    let a = gaussian(50, 5, 4);
    let b = run(Box::new(Sampling::new(6, 5, 11).unwrap()), &a);
    for row in b.iter_rows() {
        // every sketch row is a positive multiple of some input row
        let found = a.iter_rows().any(|r| {
            let scale = row[0] / r[0];
            scale > 0.0
                && row
                    .iter()
                    .zip(r)
                    .all(|(x, y)| (x - scale * y).abs() <= 1e-12 * x.abs().max(1.0))
        });
        assert!(found);
    }
}

#[test]
fn hashing_slots_and_projection_signs_are_deterministic() {
    let h1 = Hashing::new(7, 3, 5).unwrap();
    let h2 = Hashing::new(7, 3, 5).unwrap();
    let p = RandomProjection::new(7, 3, 5).unwrap();
    let mut counts = [0usize; 7];
    for i in 0..7000u64 {
        let (slot, sign) = h1.slot(i);
        assert_eq!((slot, sign), h2.slot(i));
        assert!(sign == 1.0 || sign == -1.0);
        counts[slot] += 1;
        assert_eq!(p.sign(i as usize % 7, i).abs(), 1.0);
    }
    assert!(
        counts.iter().all(|&c| (800..1200).contains(&c)),
        "{counts:?}"
    );
}

#[test]
fn method_names_round_trip() {
    for m in Method::ALL {
        assert_eq!(m.name().parse::<Method>().unwrap(), m);
    }
    assert!("svd-magic".parse::<Method>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_method_has_declared_shape(n in 0usize..40, m in 1usize..8, ell in 1usize..6, seed in any::<u64>()) {
        let a = gaussian(n, m, seed);
        for method in Method::ALL {
            let b = run(method.build(ell, m, 0.5, seed).unwrap(), &a);
            prop_assert_eq!(b.shape(), (ell, m));
            prop_assert!(b.as_slice().iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn same_seed_same_sketch(seed in any::<u64>()) {
        let a = gaussian(30, 5, seed);
        for method in Method::ALL {
            let b1 = run(method.build(4, 5, 0.5, seed).unwrap(), &a);
            let b2 = run(method.build(4, 5, 0.5, seed).unwrap(), &a);
            prop_assert_eq!(b1, b2);
        }
    }

    #[test]
    fn brute_force_never_beaten(seed in any::<u64>(), ell in 1usize..6) {
        let a = gaussian(40, 8, seed);
        let (_, best) = min_and_norm(&gram_gap(&a, &run(Method::BruteForce.build(ell, 8, 0.5, 0).unwrap(), &a)));
        for method in Method::ALL {
            let (_, err) = min_and_norm(&gram_gap(&a, &run(method.build(ell, 8, 0.5, seed).unwrap(), &a)));
            prop_assert!(best <= err + 1e-9 * a.frobenius_sq());
        }
    }
}
