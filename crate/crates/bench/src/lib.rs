//! Shared inputs for the criterion benches.

use ncg_core::sm::{self, SMModel, YukawaSet};
use ncg_core::testkit;
use ncg_core::TorusSpec;

/// A three-generation model with random Yukawas and an antisymmetric Y_R.
pub fn sm_model(seed: u64) -> SMModel {
    let mut rng = testkit::rng(seed);
    sm::build_sm(YukawaSet::random(&mut rng, 3, -1), -1, 1).expect("random Yukawas build a valid model")
}

/// Riemannian and Lorentzian tori of the given dimension, spacing 1/N.
pub fn tori(d: usize, n: usize) -> [TorusSpec; 2] {
    let a = 1.0 / n as f64;
    [TorusSpec::new(0, d, n, a).expect("valid torus"), TorusSpec::new(1, d - 1, n, a).expect("valid torus")]
}
