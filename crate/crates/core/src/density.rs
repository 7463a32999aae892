//! Density operators and the norm/distance toolkit for small registers.

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{clean_spectrum, shannon_entropy, EIGEN_CLAMP};
use crate::state::{Bipartition, StateVector};
use crate::C64;

/// Largest register a `DensityOperator` may describe.
pub const DENSITY_CAP: usize = 12;

/// Tolerance for the Hermitian, positivity and trace invariants.
pub const DENSITY_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace operator on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n: usize,
    matrix: DMatrix<C64>,
}

fn check_cap(what: &'static str, n: usize) -> Result<()> {
    if n > DENSITY_CAP {
        return Err(Error::CapExceeded {
            what,
            requested: n,
            cap: DENSITY_CAP,
        });
    }
    Ok(())
}

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    ev
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Sum of singular values.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.sum()
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(alloc::format!(
                "density matrix must be square with power-of-two dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_cap("density operator", n)?;
        let dev = hermitian_deviation(&matrix);
        if !(dev <= DENSITY_TOL) {
            return Err(Error::NotHermitian(dev));
        }
        let trace: f64 = (0..dim).map(|i| matrix[(i, i)].re).sum();
        if !((trace - 1.0).abs() <= DENSITY_TOL) {
            return Err(Error::InvalidInput(alloc::format!("trace is {trace}, expected 1")));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -DENSITY_TOL {
            return Err(Error::InvalidInput(alloc::format!(
                "density matrix has negative eigenvalue {min}"
            )));
        }
        Ok(Self { n, matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_cap("density operator", psi.num_qubits())?;
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Ok(Self {
            n: psi.num_qubits(),
            matrix: &v * v.adjoint(),
        })
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("qubit count must be positive".into()));
        }
        check_cap("density operator", n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            matrix: DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        })
    }

    /// `weight·self + (1 − weight)·other`.
    pub fn mix(&self, weight: f64, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidInput(alloc::format!(
                "mixing weight {weight} outside [0, 1]"
            )));
        }
        Ok(Self {
            n: self.n,
            matrix: &self.matrix * C64::new(weight, 0.0) + &other.matrix * C64::new(1.0 - weight, 0.0),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Eigenvalues, descending, with round-off below the clamp set to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        clean_spectrum(hermitian_eigenvalues(&self.matrix))
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        shannon_entropy(&self.spectrum())
    }

    /// `½‖ρ − σ‖₁` from the eigenvalues of the Hermitian difference.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        self.same_size(other)?;
        let diff = &self.matrix - &other.matrix;
        let t: f64 = hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>() / 2.0;
        Ok(t.clamp(0.0, 1.0))
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: psi.num_qubits(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    /// Quantum relative entropy `S(self ‖ sigma) = Tr ρ log ρ − Tr ρ log σ` by eigendecomposition.
    ///
    /// Returns `+∞` when the support of `self` is not contained in the support of `sigma`.
    pub fn relative_entropy(&self, sigma: &Self) -> Result<f64> {
        self.same_size(sigma)?;
        let neg_entropy = -self.von_neumann_entropy();
        let eig = sigma.matrix.clone().symmetric_eigen();
        let mut cross = 0.0;
        for (j, &mu) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(j);
            let weight = (v.adjoint() * &self.matrix * v)[(0, 0)].re;
            if mu <= EIGEN_CLAMP {
                if weight > EIGEN_CLAMP {
                    return Ok(f64::INFINITY);
                }
                continue;
            }
            cross += weight * mu.log2();
        }
        Ok((neg_entropy - cross).max(0.0))
    }
}

/// Reduced state `Tr_B |ψ⟩⟨ψ|` on side `A`.
pub fn reduced_density(psi: &StateVector, split: &Bipartition) -> Result<DensityOperator> {
    split.check_register(psi.num_qubits())?;
    check_cap("reduced density operator", split.size_a())?;
    let m = psi.amplitude_matrix(split.part_a())?;
    Ok(DensityOperator {
        n: split.size_a(),
        matrix: &m * m.adjoint(),
    })
}

pub fn trace_distance_mixed(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    rho.trace_distance(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn ghz3() -> StateVector {
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[7] = amps[0];
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[allow(clippy::needless_range_loop)]
    #[test]
    fn reduced_states() {
        let prod = StateVector::basis(2, "10").unwrap();
        let rho = reduced_density(&prod, &Bipartition::new(2, [0]).unwrap()).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.0, epsilon = 1e-15);

        // Brute-force partial trace of GHZ3 over qubits 1 and 2.
        let g = ghz3();
        let mut brute = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for a2 in 0..2 {
                for b in 0..4 {
                    brute[a][a2] += g.amplitudes()[a * 4 + b] * g.amplitudes()[a2 * 4 + b].conj();
                }
            }
        }
        let rho = reduced_density(&g, &Bipartition::new(3, [0]).unwrap()).unwrap();
        for a in 0..2 {
            for a2 in 0..2 {
                assert_abs_diff_eq!((rho.matrix()[(a, a2)] - brute[a][a2]).norm(), 0.0, epsilon = 1e-14);
            }
        }
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn mixed_trace_distance_examples() {
        let z = DensityOperator::from_pure(&StateVector::basis(2, "00").unwrap()).unwrap();
        let o = DensityOperator::from_pure(&StateVector::basis(2, "11").unwrap()).unwrap();
        assert_abs_diff_eq!(trace_distance_mixed(&z, &z).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance_mixed(&z, &o).unwrap(), 1.0, epsilon = 1e-12);

        // Pseudo-pure around |0⟩ⁿ: eigenvalues of the difference are ε(1 − 2⁻ⁿ) once
        // and −ε2⁻ⁿ (2ⁿ − 1 times), so T = ε(1 − 2⁻ⁿ).
        let n = 3;
        let eps = 0.2;
        let zero = DensityOperator::from_pure(&StateVector::zero(n).unwrap()).unwrap();
        let sigma = zero.mix(1.0 - eps, &DensityOperator::maximally_mixed(n).unwrap()).unwrap();
        let t = trace_distance_mixed(&zero, &sigma).unwrap();
        assert_abs_diff_eq!(t, eps * (1.0 - 0.125), epsilon = 1e-12);
        assert!(t <= eps);
    }

    #[test]
    fn operator_norm_examples() {
        assert_abs_diff_eq!(operator_norm(&DMatrix::<C64>::identity(4, 4)), 1.0, epsilon = 1e-14);
        let y = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        );
        assert_abs_diff_eq!(operator_norm(&y), 1.0, epsilon = 1e-14);
        let d = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(3.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-5.0, 0.0)],
        );
        assert_abs_diff_eq!(operator_norm(&d), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_norm(&d), 8.0, epsilon = 1e-14);
    }

    #[test]
    fn density_validation() {
        let bad = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.5, 0.0), C64::new(0.1, 0.0), C64::new(0.2, 0.0), C64::new(0.5, 0.0)],
        );
        assert!(matches!(DensityOperator::new(bad), Err(Error::NotHermitian(_))));
        let neg = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.5, 0.0)],
        );
        assert!(DensityOperator::new(neg).is_err());
        assert!(matches!(
            DensityOperator::maximally_mixed(13),
            Err(Error::CapExceeded { cap: 12, .. })
        ));
    }

    #[test]
    fn relative_entropy_cases() {
        let z = DensityOperator::from_pure(&StateVector::zero(1).unwrap()).unwrap();
        let o = DensityOperator::from_pure(&StateVector::basis(1, "1").unwrap()).unwrap();
        assert_eq!(z.relative_entropy(&o).unwrap(), f64::INFINITY);
        let m = DensityOperator::maximally_mixed(1).unwrap();
        // S(|0⟩⟨0| ‖ I/2) = 1.
        assert_abs_diff_eq!(z.relative_entropy(&m).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.relative_entropy(&m).unwrap(), 0.0, epsilon = 1e-12);
    }
}
