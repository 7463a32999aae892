//! Witness measures `E_𝒞 = max(0, −min over the family of ⟨ψ|W|ψ⟩)`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use serde::Serialize;

use super::MeasureValue;
use crate::density::{hermitian_deviation, operator_norm};
use crate::error::{Error, Result};
use crate::gate::{apply_matrix, MAX_TOUCHED};
use crate::rng::substream;
use crate::state::StateVector;
use crate::C64;

/// Hermitian tolerance for witness operators.
pub const WITNESS_HERMITIAN_TOL: f64 = 1e-10;
/// Most qubits a witness may act on nontrivially.
pub const WITNESS_SUPPORT_CAP: usize = 8;

/// A Hermitian operator acting on `support` (identity elsewhere).
///
/// `‖W ⊗ I‖∞ = ‖W‖∞`, so the cached norm is that of the local matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    support: Vec<usize>,
    #[serde(skip)]
    matrix: DMatrix<C64>,
    norm: f64,
}

impl Witness {
    /// `matrix` is `2^k × 2^k` for `k = support.len()`, the first support qubit most significant.
    pub fn new(support: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        let k = support.len();
        if k == 0 || k > WITNESS_SUPPORT_CAP {
            return Err(Error::InvalidInput(alloc::format!(
                "witness support must have 1..={WITNESS_SUPPORT_CAP} qubits, got {k}"
            )));
        }
        for (a, q) in support.iter().enumerate() {
            if support[..a].contains(q) {
                return Err(Error::InvalidInput(alloc::format!("witness support repeats qubit {q}")));
            }
        }
        let dim = 1usize << k;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: dim,
            });
        }
        let dev = hermitian_deviation(&matrix);
        if dev > WITNESS_HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let norm = operator_norm(&matrix);
        Ok(Self { support, matrix, norm })
    }

    /// `½I − |Φ⁺⟩⟨Φ⁺|` on qubits `(a, b)`, with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn bell(a: usize, b: usize) -> Result<Self> {
        let mut m = DMatrix::from_diagonal_element(4, 4, C64::new(0.5, 0.0));
        for &r in &[0usize, 3] {
            for &c in &[0usize, 3] {
                m[(r, c)] -= C64::new(0.5, 0.0);
            }
        }
        Self::new(alloc::vec![a, b], m)
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Cached `‖W‖∞`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `⟨ψ|W|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let n = psi.num_qubits();
        for &q in &self.support {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
        }
        let flat: Vec<C64> = {
            let d = self.matrix.nrows();
            (0..d * d).map(|i| self.matrix[(i / d, i % d)]).collect()
        };
        let mut image = psi.amplitudes().to_vec();
        if self.support.len() <= MAX_TOUCHED {
            apply_matrix(&mut image, n, &self.support, &[], &flat);
        } else {
            image = apply_wide(psi, &self.support, &self.matrix);
        }
        let v: C64 = psi.amplitudes().iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
        Ok(v.re)
    }

    /// Minimum of `⟨α|W|α⟩` over `samples` random product states on the support.
    ///
    /// A witness must be nonnegative on every product state; this is a spot check only.
    pub fn product_spot_check(&self, samples: usize, seed: u64) -> Result<f64> {
        use rand::Rng as _;
        let k = self.support.len();
        let local: Vec<usize> = (0..k).collect();
        let local_w = Witness {
            support: local,
            matrix: self.matrix.clone(),
            norm: self.norm,
        };
        let mut worst = f64::INFINITY;
        for s in 0..samples {
            let mut rng = substream(seed, s as u64);
            let sites: Vec<[C64; 2]> = (0..k)
                .map(|_| {
                    let u: f64 = rng.random();
                    let v: f64 = rng.random();
                    let theta = (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos();
                    [
                        C64::new((theta / 2.0).cos(), 0.0),
                        C64::from_polar((theta / 2.0).sin(), 2.0 * core::f64::consts::PI * v),
                    ]
                })
                .collect();
            worst = worst.min(local_w.expectation(&StateVector::product(&sites)?)?);
        }
        Ok(worst)
    }
}

/// Applies a dense operator on more than three qubits by gathering each support block.
fn apply_wide(psi: &StateVector, support: &[usize], m: &DMatrix<C64>) -> Vec<C64> {
    let n = psi.num_qubits();
    let masks: Vec<usize> = support.iter().map(|&q| 1usize << (n - 1 - q)).collect();
    let all: usize = masks.iter().sum();
    let d = 1usize << support.len();
    let amps = psi.amplitudes();
    let mut out = alloc::vec![C64::new(0.0, 0.0); amps.len()];
    let offset = |base: usize, local: usize| {
        let mut idx = base;
        for (b, &mask) in masks.iter().enumerate() {
            if local & (1 << (support.len() - 1 - b)) != 0 {
                idx |= mask;
            }
        }
        idx
    };
    for base in (0..amps.len()).filter(|i| i & all == 0) {
        let block: Vec<C64> = (0..d).map(|l| amps[offset(base, l)]).collect();
        for r in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for (c, a) in block.iter().enumerate() {
                acc += m[(r, c)] * a;
            }
            out[offset(base, r)] = acc;
        }
    }
    out
}

/// `max(0, −max_W ⟨ψ|W|ψ⟩)` over a finite family.
pub fn witness_measure(psi: &StateVector, family: &[Witness]) -> Result<MeasureValue> {
    if family.is_empty() {
        return Err(Error::InvalidInput("witness family must be nonempty".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for w in family {
        best = best.max(w.expectation(psi)?);
    }
    Ok(MeasureValue::exact("witness", (-best).max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bell_witness_examples() {
        let w = Witness::bell(0, 1).unwrap();
        assert_abs_diff_eq!(w.norm(), 0.5, epsilon = 1e-12);
        let zero = StateVector::zero(2).unwrap();
        assert_abs_diff_eq!(w.expectation(&zero).unwrap(), 0.0, epsilon = 1e-14);
        assert_eq!(witness_measure(&zero, core::slice::from_ref(&w)).unwrap().value, 0.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(alloc::vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0)
        ])
        .unwrap();
        assert_abs_diff_eq!(witness_measure(&bell, core::slice::from_ref(&w)).unwrap().value, 0.5, epsilon = 1e-12);
        assert!(w.product_spot_check(200, 4).unwrap() >= -1e-9);
    }

    #[test]
    fn rejects_non_hermitian_and_empty_family() {
        let mut m = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(Witness::new(alloc::vec![0], m), Err(Error::NotHermitian(_))));
        assert!(witness_measure(&StateVector::zero(1).unwrap(), &[]).is_err());
    }

    #[test]
    fn wide_support_matches_embedded_small_support() {
        // W on (0,1) embedded as W ⊗ I on (0,1,2,3) must give the same expectation.
        let w = Witness::bell(0, 1).unwrap();
        let mut big = DMatrix::from_element(16, 16, C64::new(0.0, 0.0));
        for r in 0..16 {
            for c in 0..16 {
                if r & 3 == c & 3 {
                    big[(r, c)] = w.matrix()[(r >> 2, c >> 2)];
                }
            }
        }
        let wide = Witness::new(alloc::vec![0, 1, 2, 3], big).unwrap();
        let psi = StateVector::normalized((0..32).map(|i| C64::new((i as f64).sin(), (i as f64).cos())).collect()).unwrap();
        assert_abs_diff_eq!(wide.expectation(&psi).unwrap(), w.expectation(&psi).unwrap(), epsilon = 1e-12);
    }
}
