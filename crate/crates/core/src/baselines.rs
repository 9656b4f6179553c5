//! Competitor sketchers behind the common [`Sketcher`] interface.
//!
//! All of them produce an `ell x m` matrix `B`. The randomized ones satisfy
//! `E[BᵀB] = AᵀA`; their randomness is a pure function of `(seed, row index)`
//! through [`crate::rng`], so a given seed and stream always produce the
//! same bits. Only [`BruteForce`] stores more than `ell * m` numbers.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::fd::FdSketch;
use crate::linalg::{add_outer_upper, axpy, mirror_upper, norm_sq, sym_eigh, Matrix};
use crate::rng;

/// A streaming sketcher: rows go in one at a time, an `ell x cols` matrix comes out.
pub trait Sketcher: Send {
    fn ell(&self) -> usize;

    fn cols(&self) -> usize;

    fn append(&mut self, row: &[f64]) -> Result<()>;

    fn finalize(&self) -> Result<Matrix>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Fd,
    FdFast,
    Naive,
    BruteForce,
    Sampling,
    Hashing,
    RandomProjection,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Fd,
        Method::FdFast,
        Method::Naive,
        Method::BruteForce,
        Method::Sampling,
        Method::Hashing,
        Method::RandomProjection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Fd => "fd",
            Method::FdFast => "fd-fast",
            Method::Naive => "naive",
            Method::BruteForce => "brute",
            Method::Sampling => "sample",
            Method::Hashing => "hash",
            Method::RandomProjection => "project",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            Method::Sampling | Method::Hashing | Method::RandomProjection
        )
    }

    /// Builds a sketcher. `c` is only read by `FdFast`, `seed` only by the randomized methods.
    pub fn build(self, ell: usize, cols: usize, c: f64, seed: u64) -> Result<Box<dyn Sketcher>> {
        Ok(match self {
            Method::Fd => Box::new(FdSketch::new(ell, cols)?),
            Method::FdFast => Box::new(FdSketch::new_fast(ell, cols, c)?),
            Method::Naive => Box::new(Naive::new(ell, cols)?),
            Method::BruteForce => Box::new(BruteForce::new(ell, cols)?),
            Method::Sampling => Box::new(Sampling::new(ell, cols, seed)?),
            Method::Hashing => Box::new(Hashing::new(ell, cols, seed)?),
            Method::RandomProjection => Box::new(RandomProjection::new(ell, cols, seed)?),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "fd" => Method::Fd,
            "fd-fast" | "fd_fast" => Method::FdFast,
            "naive" => Method::Naive,
            "brute" | "brute-force" | "brute_force" => Method::BruteForce,
            "sample" | "sampling" => Method::Sampling,
            "hash" | "hashing" => Method::Hashing,
            "project" | "projection" | "random-projection" | "random_projection" => {
                Method::RandomProjection
            }
            other => return Err(invalid(format!("unknown method '{other}'"))),
        })
    }
}

fn check_shape(ell: usize, cols: usize) -> Result<()> {
    if ell == 0 || cols == 0 {
        return Err(invalid(format!(
            "ell and cols must be positive, got {ell}x{cols}"
        )));
    }
    Ok(())
}

fn check_row(row: &[f64], cols: usize) -> Result<()> {
    if row.len() != cols {
        return Err(Error::DimensionMismatch {
            expected: cols,
            actual: row.len(),
        });
    }
    match row.iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(Error::NonFinite(pos)),
        None => Ok(()),
    }
}

/// Ignores its input and returns zeros.
#[derive(Clone, Debug)]
pub struct Naive {
    ell: usize,
    cols: usize,
}

impl Naive {
    pub fn new(ell: usize, cols: usize) -> Result<Self> {
        check_shape(ell, cols)?;
        Ok(Self { ell, cols })
    }
}

impl Sketcher for Naive {
    fn ell(&self) -> usize {
        self.ell
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn append(&mut self, row: &[f64]) -> Result<()> {
        check_row(row, self.cols)
    }

    fn finalize(&self) -> Result<Matrix> {
        Ok(Matrix::zeros(self.ell, self.cols))
    }
}

/// Accumulates `AᵀA` exactly and returns its best rank-`ell` factor.
#[derive(Clone, Debug)]
pub struct BruteForce {
    ell: usize,
    gram: Matrix,
}

impl BruteForce {
    pub fn new(ell: usize, cols: usize) -> Result<Self> {
        check_shape(ell, cols)?;
        Ok(Self {
            ell,
            gram: Matrix::zeros(cols, cols),
        })
    }
}

impl Sketcher for BruteForce {
    fn ell(&self) -> usize {
        self.ell
    }

    fn cols(&self) -> usize {
        self.gram.cols()
    }

    fn append(&mut self, row: &[f64]) -> Result<()> {
        check_row(row, self.gram.cols())?;
        add_outer_upper(&mut self.gram, row, 1.0);
        Ok(())
    }

    /// `B = diag(√λ_1..√λ_ell) V_ell` from the top eigenpairs of the accumulated `AᵀA`.
    fn finalize(&self) -> Result<Matrix> {
        let mut g = self.gram.clone();
        mirror_upper(&mut g);
        let eig = sym_eigh(&g)?;
        let cols = g.cols();
        let mut b = Matrix::zeros(self.ell, cols);
        for k in 0..self.ell.min(cols) {
            let lambda = eig.values[k].max(0.0);
            if lambda > 0.0 {
                axpy(lambda.sqrt(), eig.vectors.row(k), b.row_mut(k));
            }
        }
        Ok(b)
    }
}

const SAMPLING_STREAM: u64 = 0x5341_4d50_0000_0000;
const BUCKET_STREAM: u64 = 0x4841_5348_0000_0001;
const SIGN_STREAM: u64 = 0x4841_5348_0000_0002;
const PROJECTION_STREAM: u64 = 0x5052_4f4a_0000_0000;

/// `ell` independent weighted reservoirs, each keeping one row drawn with
/// probability `||A_i||² / ||A||_F²`.
///
/// Reservoir `j` replaces its row by row `i` with probability `||A_i||² / W_i`
/// where `W_i` is the running squared norm, which yields the target marginal
/// for the final `W`. Output rows are rescaled by `||A||_F / (√ell ||A_i||)`.
#[derive(Clone, Debug)]
pub struct Sampling {
    ell: usize,
    cols: usize,
    seed: u64,
    held: Matrix,
    held_norm_sq: Vec<f64>,
    total_weight: f64,
    index: u64,
}

impl Sampling {
    pub fn new(ell: usize, cols: usize, seed: u64) -> Result<Self> {
        check_shape(ell, cols)?;
        Ok(Self {
            ell,
            cols,
            seed,
            held: Matrix::zeros(ell, cols),
            held_norm_sq: vec![0.0; ell],
            total_weight: 0.0,
            index: 0,
        })
    }
}

impl Sketcher for Sampling {
    fn ell(&self) -> usize {
        self.ell
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn append(&mut self, row: &[f64]) -> Result<()> {
        check_row(row, self.cols)?;
        let i = self.index;
        self.index += 1;
        let weight = norm_sq(row);
        if weight == 0.0 {
            return Ok(());
        }
        self.total_weight += weight;
        let p = weight / self.total_weight;
        for j in 0..self.ell {
            if rng::uniform(self.seed, SAMPLING_STREAM | j as u64, i) < p {
                self.held.row_mut(j).copy_from_slice(row);
                self.held_norm_sq[j] = weight;
            }
        }
        Ok(())
    }

    fn finalize(&self) -> Result<Matrix> {
        let mut b = Matrix::zeros(self.ell, self.cols);
        for j in 0..self.ell {
            let w = self.held_norm_sq[j];
            if w > 0.0 {
                let scale = (self.total_weight / (self.ell as f64 * w)).sqrt();
                axpy(scale, self.held.row(j), b.row_mut(j));
            }
        }
        Ok(b)
    }
}

/// Feature hashing: row `i` is added with sign `s(i)` into bucket `h(i)`.
#[derive(Clone, Debug)]
pub struct Hashing {
    seed: u64,
    acc: Matrix,
    index: u64,
}

impl Hashing {
    pub fn new(ell: usize, cols: usize, seed: u64) -> Result<Self> {
        check_shape(ell, cols)?;
        Ok(Self {
            seed,
            acc: Matrix::zeros(ell, cols),
            index: 0,
        })
    }

    /// `(h(i), s(i))` for stream index `i`.
    pub fn slot(&self, i: u64) -> (usize, f64) {
        let bits = rng::hash3(self.seed, BUCKET_STREAM, i);
        // multiply-shift keeps the bucket unbiased for any ell
        let bucket = ((bits as u128 * self.acc.rows() as u128) >> 64) as usize;
        (bucket, rng::sign(self.seed, SIGN_STREAM, i))
    }
}

impl Sketcher for Hashing {
    fn ell(&self) -> usize {
        self.acc.rows()
    }

    fn cols(&self) -> usize {
        self.acc.cols()
    }

    fn append(&mut self, row: &[f64]) -> Result<()> {
        check_row(row, self.acc.cols())?;
        let (bucket, sign) = self.slot(self.index);
        self.index += 1;
        axpy(sign, row, self.acc.row_mut(bucket));
        Ok(())
    }

    fn finalize(&self) -> Result<Matrix> {
        Ok(self.acc.clone())
    }
}

/// `B = RA` for a never-materialized `ell x n` matrix `R` with entries `±1/√ell`.
///
/// The signs of column `i` of `R` are the bits of `ceil(ell / 64)` hashes of
/// `(seed, word, i)`.
#[derive(Clone, Debug)]
pub struct RandomProjection {
    seed: u64,
    acc: Matrix,
    index: u64,
    scale: f64,
}

impl RandomProjection {
    pub fn new(ell: usize, cols: usize, seed: u64) -> Result<Self> {
        check_shape(ell, cols)?;
        Ok(Self {
            seed,
            acc: Matrix::zeros(ell, cols),
            index: 0,
            scale: 1.0 / (ell as f64).sqrt(),
        })
    }

    /// `R[j][i] * √ell`.
    pub fn sign(&self, j: usize, i: u64) -> f64 {
        let word = rng::hash3(self.seed, PROJECTION_STREAM | (j / 64) as u64, i);
        if (word >> (j % 64)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl Sketcher for RandomProjection {
    fn ell(&self) -> usize {
        self.acc.rows()
    }

    fn cols(&self) -> usize {
        self.acc.cols()
    }

    fn append(&mut self, row: &[f64]) -> Result<()> {
        check_row(row, self.acc.cols())?;
        let i = self.index;
        self.index += 1;
        let ell = self.acc.rows();
        let mut word = 0u64;
        for j in 0..ell {
            if j % 64 == 0 {
                word = rng::hash3(self.seed, PROJECTION_STREAM | (j / 64) as u64, i);
            }
            let sign = if (word >> (j % 64)) & 1 == 0 {
                1.0
            } else {
                -1.0
            };
            axpy(sign * self.scale, row, self.acc.row_mut(j));
        }
        Ok(())
    }

    fn finalize(&self) -> Result<Matrix> {
        Ok(self.acc.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gram;

    fn feed(s: &mut dyn Sketcher, a: &Matrix) {
        for r in a.iter_rows() {
            s.append(r).unwrap();
        }
    }

    fn sample_matrix() -> Matrix {
        Matrix::from_fn(30, 6, |i, j| ((i * 13 + j * 7) % 11) as f64 - 5.0)
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn output_shapes() {
        let a = sample_matrix();
        for m in Method::ALL {
            let mut s = m.build(4, 6, 0.5, 1).unwrap();
            feed(s.as_mut(), &a);
            assert_eq!(s.finalize().unwrap().shape(), (4, 6), "{m}");
            assert!(s.append(&[1.0; 5]).is_err());
        }
    }

    #[test]
    fn zero_shapes_rejected() {
        for m in Method::ALL {
            assert!(m.build(0, 3, 0.5, 0).is_err());
            assert!(m.build(3, 0, 0.5, 0).is_err());
        }
    }

    #[test]
    fn naive_returns_zeros() {
        let mut s = Naive::new(3, 6).unwrap();
        feed(&mut s, &sample_matrix());
        assert_eq!(s.finalize().unwrap(), Matrix::zeros(3, 6));
    }

    #[test]
    fn sampling_single_nonzero_row() {
        let r = [1.0, -2.0, 0.5];
        let mut s = Sampling::new(4, 3, 9).unwrap();
        s.append(&[0.0; 3]).unwrap();
        s.append(&r).unwrap();
        s.append(&[0.0; 3]).unwrap();
        let b = s.finalize().unwrap();
        // every reservoir holds r scaled by ||A||_F / (√ell ||r||) = 1/2
        for j in 0..4 {
            for (x, y) in b.row(j).iter().zip(&r) {
                assert!((x - 0.5 * y).abs() < 1e-15);
            }
        }
        let gb = gram(&b);
        let ga = gram(&Matrix::from_rows(&[r]).unwrap());
        for (x, y) in gb.as_slice().iter().zip(ga.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_all_zero_stream() {
        let mut s = Sampling::new(3, 2, 0).unwrap();
        s.append(&[0.0, 0.0]).unwrap();
        assert_eq!(s.finalize().unwrap(), Matrix::zeros(3, 2));
    }

    #[test]
    fn hashing_single_row() {
        let r = [3.0, 0.0, -1.0];
        let mut s = Hashing::new(5, 3, 4).unwrap();
        s.append(&r).unwrap();
        let b = s.finalize().unwrap();
        let nonzero: Vec<usize> = (0..5)
            .filter(|&j| b.row(j).iter().any(|&v| v != 0.0))
            .collect();
        assert_eq!(nonzero.len(), 1);
        let slot = b.row(nonzero[0]);
        assert!(slot == r || slot.iter().zip(&r).all(|(x, y)| *x == -y));
        assert_eq!(gram(&b), gram(&Matrix::from_rows(&[r]).unwrap()));
    }

    #[test]
    fn projection_signs_match_lazy_generation() {
        let a = sample_matrix();
        let mut s = RandomProjection::new(70, 6, 5).unwrap();
        feed(&mut s, &a);
        let b = s.finalize().unwrap();
        let scale = 1.0 / 70f64.sqrt();
        for j in [0, 1, 63, 64, 69] {
            for c in 0..6 {
                let want: f64 = (0..a.rows())
                    .map(|i| s.sign(j, i as u64) * scale * a.get(i, c))
                    .sum();
                assert!((b.get(j, c) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn randomized_methods_are_deterministic() {
        let a = sample_matrix();
        for m in [Method::Sampling, Method::Hashing, Method::RandomProjection] {
            let mut x = m.build(5, 6, 0.5, 17).unwrap();
            let mut y = m.build(5, 6, 0.5, 17).unwrap();
            let mut z = m.build(5, 6, 0.5, 18).unwrap();
            feed(x.as_mut(), &a);
            feed(y.as_mut(), &a);
            feed(z.as_mut(), &a);
            let (bx, by, bz) = (
                x.finalize().unwrap(),
                y.finalize().unwrap(),
                z.finalize().unwrap(),
            );
            let bits = |b: &Matrix| b.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&bx), bits(&by), "{m}");
            assert_ne!(bits(&bx), bits(&bz), "{m}");
        }
    }

    #[test]
    fn brute_force_recovers_low_rank_input() {
        // rank 2 inside 6 columns
        let a = Matrix::from_fn(20, 6, |i, j| {
            (i as f64) * (j as f64 + 1.0) + ((i % 3) as f64) * (6.0 - j as f64)
        });
        let mut s = BruteForce::new(2, 6).unwrap();
        feed(&mut s, &a);
        let diff = gram(&a).sub(&gram(&s.finalize().unwrap())).unwrap();
        let err = crate::linalg::spectral_norm_sym(&diff, 1e-8, 10_000, 0);
        assert!(err <= 1e-7 * a.frobenius_sq(), "{err}");
    }

    #[test]
    fn brute_force_with_ell_above_cols() {
        let a = sample_matrix();
        let mut s = BruteForce::new(9, 6).unwrap();
        feed(&mut s, &a);
        let b = s.finalize().unwrap();
        assert_eq!(b.shape(), (9, 6));
        assert!(b.row(8).iter().all(|&v| v == 0.0));
    }
}
