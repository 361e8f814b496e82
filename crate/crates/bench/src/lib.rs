//! Shared inputs for the benchmarks.

use reflexa_core::random;
use reflexa_core::{Field, Matrix};

pub const SEED: u64 = 11;

/// A square matrix with small random entries.
pub fn square(field: Field, n: usize) -> Matrix {
    random::matrix(&mut random::rng(SEED), field, n, n)
}
