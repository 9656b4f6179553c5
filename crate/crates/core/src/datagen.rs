//! Synthetic signal-plus-noise matrices `A = S D U + N / ζ`.
//!
//! `S` (`n x d`) and `N` (`n x m`) have i.i.d. standard normal entries, `D` is
//! diagonal with `D_ii = 1 - (i - 1) / d`, and `U` (`d x m`) has orthonormal
//! rows spanning a random `d`-dimensional subspace obtained by
//! orthonormalizing Gaussian rows. Every entry is a counter-based draw keyed by
//! its position, so any row can be produced independently of the others.

use crate::error::{invalid, Result};
use crate::linalg::{axpy, dot, norm_sq, Matrix};
use crate::rng::standard_normal;

const BASIS_STREAM: u64 = 0x4241_5349_5300_0000;
const SIGNAL_STREAM: u64 = 0x5349_474e_414c_0000;
const NOISE_STREAM: u64 = 0x4e4f_4953_4500_0000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub zeta: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > self.n.min(self.m) {
            return Err(invalid(format!(
                "signal dimension d = {} must lie in [1, min(n, m) = {}]",
                self.d,
                self.n.min(self.m)
            )));
        }
        if !(self.zeta.is_finite() && self.zeta > 0.0) {
            return Err(invalid(format!("zeta must be positive, got {}", self.zeta)));
        }
        Ok(())
    }
}

/// `D_ii = 1 - (i - 1) / d` for `i = 1..=d`.
pub fn signal_diagonal(d: usize) -> Vec<f64> {
    (0..d).map(|i| 1.0 - i as f64 / d as f64).collect()
}

/// Row-at-a-time generator; holds only `U` and `D`.
#[derive(Clone, Debug)]
pub struct Generator {
    spec: GenSpec,
    diag: Vec<f64>,
    basis: Matrix,
}

impl Generator {
    pub fn new(spec: GenSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            diag: signal_diagonal(spec.d),
            basis: random_basis(spec.d, spec.m, spec.seed)?,
            spec,
        })
    }

    pub fn spec(&self) -> &GenSpec {
        &self.spec
    }

    /// The orthonormal signal row space `U`.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Row `i` of `S D U`.
    pub fn signal_row(&self, i: usize) -> Vec<f64> {
        let GenSpec { m, d, seed, .. } = self.spec;
        let mut row = vec![0.0; m];
        for k in 0..d {
            let coeff = standard_normal(seed, SIGNAL_STREAM, (i * d + k) as u64) * self.diag[k];
            axpy(coeff, self.basis.row(k), &mut row);
        }
        row
    }

    /// Row `i` of `N`.
    pub fn noise_row(&self, i: usize) -> Vec<f64> {
        let GenSpec { m, seed, .. } = self.spec;
        (0..m)
            .map(|j| standard_normal(seed, NOISE_STREAM, (i * m + j) as u64))
            .collect()
    }

    /// Row `i` of `A`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        let mut row = self.signal_row(i);
        let inv_zeta = 1.0 / self.spec.zeta;
        axpy(inv_zeta, &self.noise_row(i), &mut row);
        row
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.spec.n).map(move |i| self.row(i))
    }

    pub fn matrix(&self) -> Matrix {
        let GenSpec { n, m, .. } = self.spec;
        let mut data = Vec::with_capacity(n * m);
        for row in self.rows() {
            data.extend(row);
        }
        Matrix::from_vec(n, m, data).expect("generated entries are finite")
    }
}

pub fn generate(spec: GenSpec) -> Result<Matrix> {
    Ok(Generator::new(spec)?.matrix())
}

/// Modified Gram-Schmidt (two passes) on `d` Gaussian rows of length `m`.
fn random_basis(d: usize, m: usize, seed: u64) -> Result<Matrix> {
    let mut basis = Matrix::zeros(d, m);
    for k in 0..d {
        let mut w: Vec<f64> = (0..m)
            .map(|j| standard_normal(seed, BASIS_STREAM, (k * m + j) as u64))
            .collect();
        for _ in 0..2 {
            for prev in 0..k {
                let proj = dot(basis.row(prev), &w);
                axpy(-proj, basis.row(prev), &mut w);
            }
        }
        let norm = norm_sq(&w).sqrt();
        if norm < 1e-8 {
            return Err(invalid(
                "degenerate Gaussian draw while building the signal basis",
            ));
        }
        basis
            .row_mut(k)
            .iter_mut()
            .zip(&w)
            .for_each(|(b, x)| *b = x / norm);
    }
    Ok(basis)
}
