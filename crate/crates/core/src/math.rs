//! Scalar helpers shared by the spectral code. Logarithms are base 2.

use alloc::vec::Vec;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;

/// Eigenvalues below this are treated as exact zeros before entropy evaluation.
pub const EIGEN_CLAMP: f64 = 1e-12;

pub fn log2(x: f64) -> f64 {
    x.log2()
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
pub fn neg_xlogx(x: f64) -> f64 {
    if x <= EIGEN_CLAMP {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Von Neumann entropy of a probability spectrum.
pub fn shannon_entropy(spectrum: &[f64]) -> f64 {
    spectrum.iter().map(|&l| neg_xlogx(l)).sum::<f64>().max(0.0)
}

/// Clamp round-off negatives and sort descending.
pub(crate) fn clean_spectrum(mut values: Vec<f64>) -> Vec<f64> {
    for v in values.iter_mut() {
        if *v < EIGEN_CLAMP {
            *v = 0.0;
        }
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    values
}
