use alloc::vec::Vec;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;

use super::MeasureValue;
use crate::error::{Error, Result};
use crate::math::{log2, shannon_entropy, EIGEN_CLAMP};
use crate::state::{Bipartition, Partition, StateVector};

/// Relative threshold for counting Schmidt coefficients.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `E^{A,B}`: von Neumann entropy of the Schmidt spectrum.
pub fn entanglement_entropy(psi: &StateVector, split: &Bipartition) -> Result<MeasureValue> {
    let spectrum = psi.schmidt_spectrum(split)?;
    Ok(MeasureValue::exact("entropy", shannon_entropy(&spectrum)))
}

/// Rényi entropy of a spectrum; `alpha = 1` gives the von Neumann entropy.
pub fn renyi_entropy(spectrum: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(alloc::format!(
            "Renyi order must be positive and finite, got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(shannon_entropy(spectrum));
    }
    let sum: f64 = spectrum
        .iter()
        .filter(|&&l| l > EIGEN_CLAMP)
        .map(|&l| l.powf(alpha))
        .sum();
    Ok((log2(sum) / (1.0 - alpha)).max(0.0))
}

/// `E_α^{A,B}` for the reduced state on `A`.
pub fn renyi_entanglement(psi: &StateVector, split: &Bipartition, alpha: f64) -> Result<MeasureValue> {
    let spectrum = psi.schmidt_spectrum(split)?;
    let value = renyi_entropy(&spectrum, alpha)?;
    Ok(MeasureValue::exact(alloc::format!("renyi:{alpha}"), value))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SchmidtRank {
    pub rank: usize,
    /// `log₂ rank`.
    pub chi: f64,
}

impl SchmidtRank {
    pub fn to_measure(self) -> MeasureValue {
        MeasureValue::exact("schmidt_rank", self.chi)
    }
}

/// Counts Schmidt coefficients larger than `tol` times the largest one.
pub fn schmidt_rank(psi: &StateVector, split: &Bipartition, tol: f64) -> Result<SchmidtRank> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "rank tolerance must lie in (0, 1), got {tol}"
        )));
    }
    split.check_register(psi.num_qubits())?;
    let coeffs: Vec<f64> = psi.schmidt_coefficients(split.part_a())?;
    let largest = coeffs.first().copied().unwrap_or(0.0);
    let rank = coeffs.iter().filter(|&&s| s > tol * largest).count().max(1);
    Ok(SchmidtRank {
        rank,
        chi: log2(rank as f64),
    })
}

/// Pure-state squashed entanglement: sum of the parts' von Neumann entropies.
pub fn squashed_entanglement_pure(psi: &StateVector, parts: &Partition) -> Result<MeasureValue> {
    if parts.num_qubits() != psi.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: parts.num_qubits(),
            right: psi.num_qubits(),
        });
    }
    let mut total = 0.0;
    for part in parts.parts() {
        total += shannon_entropy(&psi.subsystem_spectrum(part)?);
    }
    Ok(MeasureValue::exact("squashed", total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn bell() -> StateVector {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn entropy_examples() {
        let split = Bipartition::new(2, [0]).unwrap();
        let prod = StateVector::basis(2, "01").unwrap();
        assert_abs_diff_eq!(entanglement_entropy(&prod, &split).unwrap().value, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entanglement_entropy(&bell(), &split).unwrap().value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn renyi_examples() {
        for alpha in [0.3, 0.5, 1.0, 2.0, 7.0] {
            let uniform = vec![1.0 / 8.0; 8];
            assert_abs_diff_eq!(renyi_entropy(&uniform, alpha).unwrap(), 3.0, epsilon = 1e-12);
        }
        // Tr ρ² = 1/2 for the Bell spectrum.
        assert_abs_diff_eq!(renyi_entropy(&[0.5, 0.5], 2.0).unwrap(), 1.0, epsilon = 1e-12);
        assert!(renyi_entropy(&[1.0], 0.0).is_err());
        assert!(renyi_entropy(&[1.0], -1.0).is_err());
        assert!(renyi_entropy(&[1.0], f64::INFINITY).is_err());
    }

    #[test]
    fn schmidt_rank_examples() {
        let split = Bipartition::new(2, [0]).unwrap();
        let r = schmidt_rank(&StateVector::basis(2, "11").unwrap(), &split, DEFAULT_RANK_TOL).unwrap();
        assert_eq!((r.rank, r.chi), (1, 0.0));
        let r = schmidt_rank(&bell(), &split, DEFAULT_RANK_TOL).unwrap();
        assert_eq!((r.rank, r.chi), (2, 1.0));
        assert!(schmidt_rank(&bell(), &split, 0.0).is_err());

        // A tiny but resolvable coefficient still counts.
        let amps = vec![
            C64::new((1.0f64 - 1e-14).sqrt(), 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1e-7, 0.0),
        ];
        let s = StateVector::from_amplitudes(amps).unwrap();
        assert_eq!(schmidt_rank(&s, &split, DEFAULT_RANK_TOL).unwrap().rank, 2);
    }

    #[test]
    fn squashed_examples() {
        let parts = Partition::singletons(2);
        assert_abs_diff_eq!(
            squashed_entanglement_pure(&StateVector::basis(2, "10").unwrap(), &parts).unwrap().value,
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(squashed_entanglement_pure(&bell(), &parts).unwrap().value, 2.0, epsilon = 1e-12);
        let whole = Partition::new(2, vec![vec![0, 1]]).unwrap();
        assert_abs_diff_eq!(squashed_entanglement_pure(&bell(), &whole).unwrap().value, 0.0, epsilon = 1e-12);
    }
}
