//! Random instances for unit tests only.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| C64::new(StandardNormal.sample(r), StandardNormal.sample(r))).collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

pub fn random_hermitian(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(r, n, n);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Trace-one PSD matrix of rank at most `rank`.
pub fn random_psd(r: &mut ChaCha8Rng, n: usize, rank: usize) -> ComplexMatrix {
    let g = random_matrix(r, n, rank);
    let m = &g * &g.dagger();
    let t: f64 = (0..n).map(|i| m[(i, i)].re).sum();
    m.scale_real(1.0 / t)
}
