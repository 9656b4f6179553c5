//! Streaming matrix sketching.
//!
//! The centerpiece is [`FdSketch`], a Frequent-Directions sketcher that keeps an
//! `ell x m` matrix `B` for a stream of rows of `A` such that
//! `0 <= ||Ax||^2 - ||Bx||^2 <= ||A||_F^2 / ell` for every unit vector `x`.
//! Sharing the same streaming interface are the randomized competitors
//! (row sampling, feature hashing, sign random projection), a brute-force
//! optimal sketch and a do-nothing baseline, plus the frequent-items counter
//! that Frequent-Directions generalizes.
//!
//! The [`harness`] module holds the matrix file formats, accuracy measurement
//! and the synthetic benchmark grid used by the `fdsketch` binary.

pub mod baselines;
pub mod datagen;
mod error;
pub mod fd;
pub mod freq_items;
pub mod harness;
pub mod linalg;
pub mod rng;

pub use baselines::{Method, Sketcher};
pub use error::{Error, Result};
pub use fd::{FdSketch, ShrinkMode};
pub use freq_items::MgCounter;
pub use linalg::Matrix;
