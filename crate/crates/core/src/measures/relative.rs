//! Relative entropy of entanglement, bounded through one explicit separable reference.
//!
//! `σ = (1−ε)|0⟩⟨0|ⁿ + ε I/2ⁿ` is separable, lies within `2ε` of any `ψ` with
//! `T(ψ, |0⟩ⁿ) ≤ ε`, and has smallest eigenvalue `ε/2ⁿ`. Continuity of the relative entropy
//! then bounds `S(ρ‖σ) ≥ E_re` by `2nT − 2T log 2T − T log λ` at `T = 2ε`, `λ = ε/2ⁿ`.

use alloc::string::ToString;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use serde::Serialize;

use super::{Certificate, MeasureValue, ValueKind};
use crate::density::{DensityOperator, DENSITY_CAP};
use crate::dilution::MEMBERSHIP_TOL;
use crate::error::{Error, Result};
use crate::math::log2;
use crate::state::StateVector;
use crate::C64;

/// `2nT − 2T log₂ 2T − T log₂ λ` at `T = 2ε`, `λ = ε/2ⁿ`.
pub fn relative_entropy_bound_value(n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::OutOfRegime(alloc::format!(
            "relative-entropy bound needs eps > 0, got {eps}"
        )));
    }
    let t = 2.0 * eps;
    let two_t = 2.0 * t;
    if two_t > 1.0 || -two_t * log2(two_t) > 1.0 / core::f64::consts::E {
        return Err(Error::OutOfRegime(alloc::format!(
            "relative-entropy bound requires -2T log 2T <= 1/e at T = 2eps = {t}"
        )));
    }
    let lambda = eps / (n as f64).exp2();
    Ok(2.0 * n as f64 * t - two_t * log2(two_t) - t * log2(lambda))
}

/// `(1−ε)|0⟩⟨0|ⁿ + ε I/2ⁿ`.
pub fn separable_reference(n: usize, eps: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidInput(alloc::format!("eps must lie in [0, 1], got {eps}")));
    }
    if n > DENSITY_CAP {
        return Err(Error::CapExceeded {
            what: "separable reference",
            requested: n,
            cap: DENSITY_CAP,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::from_diagonal_element(dim, dim, C64::new(eps / dim as f64, 0.0));
    m[(0, 0)] += C64::new(1.0 - eps, 0.0);
    DensityOperator::new(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeEntropyReport {
    pub bound: MeasureValue,
    /// `S(ρ‖σ)` for the same `σ`, when the register fits the density cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
}

/// Upper bounds on `E_re(ψ)` for `ψ` within trace distance `eps` of `|0⟩ⁿ`.
pub fn relative_entropy_ub(psi: &StateVector, eps: f64) -> Result<RelativeEntropyReport> {
    let n = psi.num_qubits();
    let dist = psi.distance_to_zero();
    if dist > eps + MEMBERSHIP_TOL {
        return Err(Error::OutOfRegime(alloc::format!(
            "state is at trace distance {dist} from |0>^n, outside the eps = {eps} ball"
        )));
    }
    let value = relative_entropy_bound_value(n, eps)?;
    let bound = MeasureValue::new("relative_entropy", value, ValueKind::UpperBound).with_certificate(
        Certificate::Sigma {
            description: "(1-eps)|0><0|^n + eps I/2^n".to_string(),
            min_eigenvalue: eps / (n as f64).exp2(),
            trace_distance_bound: 2.0 * eps,
        },
    );
    let exact = if n <= DENSITY_CAP {
        let rho = DensityOperator::from_pure(psi)?;
        Some(rho.relative_entropy(&separable_reference(n, eps)?)?)
    } else {
        None
    };
    Ok(RelativeEntropyReport { bound, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bound_arithmetic() {
        // 0.16 − 0.02·log₂0.02 − 0.01·log₂(0.005/256)
        let expected = 0.16 - 0.02 * 0.02f64.log2() - 0.01 * (0.005f64 / 256.0).log2();
        let v = relative_entropy_bound_value(8, 0.005).unwrap();
        assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(v, 0.429316, epsilon = 1e-6);
        // 2T = 0.2 gives −2T log 2T ≈ 0.464 > 1/e; 2T = 1.2 leaves the domain.
        assert!(matches!(relative_entropy_bound_value(4, 0.05), Err(Error::OutOfRegime(_))));
        assert!(matches!(relative_entropy_bound_value(4, 0.3), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn zero_state_matches_closed_form() {
        for (n, eps) in [(1, 0.01), (3, 0.02), (5, 0.005)] {
            let r = relative_entropy_ub(&StateVector::zero(n).unwrap(), eps).unwrap();
            let closed = -((1.0 - eps) + eps / (1u32 << n) as f64).log2();
            assert_abs_diff_eq!(r.exact.unwrap(), closed, epsilon = 1e-9);
            assert!(r.exact.unwrap() <= r.bound.value);
        }
    }

    #[test]
    fn rejects_states_outside_ball() {
        let psi = StateVector::basis(2, "01").unwrap();
        assert!(matches!(relative_entropy_ub(&psi, 0.01), Err(Error::OutOfRegime(_))));
    }
}
