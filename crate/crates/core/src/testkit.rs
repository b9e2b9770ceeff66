//! Seeded random generators for property checks, oracles and benches.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{cx, CMat};

pub type TestRng = ChaCha8Rng;

/// Default seed for every sampled check.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    cx(normal(rng), normal(rng))
}

pub fn random_cmat<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let a = random_cmat(rng, n, n);
    (&a + a.adjoint()).scale(0.5)
}

pub fn random_real_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

/// A random complex symmetric (`sign = 1`) or antisymmetric (`sign = -1`) matrix.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, sign: i8) -> CMat {
    let a = random_cmat(rng, n, n);
    let t = a.transpose();
    if sign >= 0 {
        (&a + t).scale(0.5)
    } else {
        (&a - t).scale(0.5)
    }
}
