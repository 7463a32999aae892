//! ε-measures: the least entanglement of any state within trace distance ε.
//!
//! Only explicit candidates are evaluated, so the result is an upper bound on the infimum.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use super::geometric::{maximize_product_overlap, GeometricOptions};
use super::{entanglement_entropy, schmidt_rank, Certificate, MeasureValue, ValueKind, DEFAULT_RANK_TOL};
use crate::dilution::MEMBERSHIP_TOL;
use crate::error::{Error, Result};
use crate::state::{Bipartition, StateVector};

/// Base measure of an ε-measure, with its fixed bipartition.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "base", content = "bipartition", rename_all = "snake_case")]
pub enum EpsilonBase {
    /// `χ = log₂` Schmidt rank.
    SchmidtRank(Bipartition),
    Entropy(Bipartition),
}

impl EpsilonBase {
    fn name(&self) -> &'static str {
        match self {
            Self::SchmidtRank(_) => "schmidt_rank",
            Self::Entropy(_) => "entropy",
        }
    }

    fn evaluate(&self, psi: &StateVector) -> Result<f64> {
        match self {
            Self::SchmidtRank(split) => Ok(schmidt_rank(psi, split, DEFAULT_RANK_TOL)?.chi),
            Self::Entropy(split) => Ok(entanglement_entropy(psi, split)?.value),
        }
    }
}

/// Minimum of `base` over the candidates `ψ`, `|0⟩ⁿ` and the best product state found by the
/// geometric-measure search, keeping only those within `eps_ball` of `ψ`.
pub fn epsilon_measure_ub(
    psi: &StateVector,
    eps_ball: f64,
    base: &EpsilonBase,
    geometric: &GeometricOptions,
) -> Result<MeasureValue> {
    if !(eps_ball >= 0.0 && eps_ball.is_finite()) {
        return Err(Error::InvalidInput(alloc::format!(
            "eps ball radius must be finite and nonnegative, got {eps_ball}"
        )));
    }
    let n = psi.num_qubits();
    let mut candidates: Vec<(String, f64, StateVector)> = Vec::new();
    candidates.push(("psi".to_string(), 0.0, psi.clone()));
    let zero = StateVector::zero(n)?;
    let d_zero = psi.distance_to_zero();
    let zero_inside = d_zero <= eps_ball + MEMBERSHIP_TOL;
    if zero_inside {
        candidates.push(("|0>^n".to_string(), d_zero, zero));
    } else {
        // Product states have zero value for either base, so the search only matters when
        // |0⟩ⁿ is out of reach.
        let best = maximize_product_overlap(psi, geometric)?;
        let prod = best.state()?;
        let d = prod.trace_distance(psi)?;
        if d <= eps_ball + MEMBERSHIP_TOL {
            candidates.push(("geometric product certificate".to_string(), d, prod));
        }
    }

    let mut best: Option<(f64, String, f64)> = None;
    for (label, dist, state) in candidates {
        let v = base.evaluate(&state)?;
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, label, dist));
        }
    }
    let (value, label, distance) = best.expect("psi is always a candidate");
    Ok(
        MeasureValue::new(alloc::format!("epsilon:{}", base.name()), value, ValueKind::UpperBound)
            .with_certificate(Certificate::Candidate { label, distance }),
    )
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
    fn near_zero_state_has_zero_rank_measure() {
        let e = 0.01f64;
        let t = e.sqrt() * 0.9;
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new((1.0 - t * t).sqrt(), 0.0);
        amps[7] = C64::new(0.0, t);
        let psi = StateVector::from_amplitudes(amps).unwrap();
        let split = Bipartition::new(3, [0]).unwrap();
        let m = epsilon_measure_ub(&psi, e.sqrt(), &EpsilonBase::SchmidtRank(split), &GeometricOptions::default()).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(matches!(m.certificate, Some(Certificate::Candidate { ref label, .. }) if label == "|0>^n"));
    }

    #[test]
    fn point_ball_and_bell() {
        let split = Bipartition::new(2, [0]).unwrap();
        let opts = GeometricOptions::default();
        let m = epsilon_measure_ub(&bell(), 0.0, &EpsilonBase::Entropy(split.clone()), &opts).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-12);
        let m = epsilon_measure_ub(&bell(), 0.1, &EpsilonBase::SchmidtRank(split.clone()), &opts).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-12);
        // A ball wide enough to reach the best product state (distance 1/√2).
        let m = epsilon_measure_ub(&bell(), 0.75, &EpsilonBase::SchmidtRank(split), &opts).unwrap();
        assert_eq!(m.value, 0.0);
    }
}
