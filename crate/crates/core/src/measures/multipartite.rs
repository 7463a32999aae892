//! Multipartite concurrence and n-tangle.
//!
//! The concurrence uses `P₁⊗…⊗P_n = 2⁻ⁿ Σ_{S⊆[n]} SWAP_S` on two copies, which turns the
//! doubled-space expectation into `2⁻ⁿ Σ_S Tr ρ_S²`. The literal doubled-space evaluation is
//! kept alongside for small registers so the two routes can be checked against each other.

use alloc::vec::Vec;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;

use super::MeasureValue;
use crate::error::{Error, Result};
use crate::gate::{apply_matrix, GateKind};
use crate::state::StateVector;
use crate::C64;

/// Largest register for the subset-purity route.
pub const CONCURRENCE_CAP: usize = 12;
/// Largest register for the literal doubled-space route (2n qubits are materialized).
pub const DOUBLED_SPACE_CAP: usize = 5;

fn subset_qubits(n: usize, mask: usize) -> Vec<usize> {
    (0..n).filter(|q| mask & (1 << q) != 0).collect()
}

/// `⟨ψ|⊗² P₁⊗…⊗P_n |ψ⟩⊗²` via subset purities.
pub fn symmetric_projector_expectation(psi: &StateVector) -> Result<f64> {
    let n = psi.num_qubits();
    if n > CONCURRENCE_CAP {
        return Err(Error::CapExceeded {
            what: "concurrence",
            requested: n,
            cap: CONCURRENCE_CAP,
        });
    }
    let full = (1usize << n) - 1;
    // Tr ρ_S² = Tr ρ_{S̄}² for a pure state: visit each complementary pair once.
    let mut total = 0.0;
    for mask in 0..=full {
        let comp = full & !mask;
        if mask < comp {
            total += 2.0 * psi.subsystem_purity(&subset_qubits(n, mask))?;
        }
    }
    Ok(total / (1u64 << n) as f64)
}

/// The same expectation evaluated literally on `ψ ⊗ ψ` (copy one on qubits `0..n`, copy two on
/// `n..2n`, `P_i` acting on qubits `i` and `n + i`).
pub fn symmetric_projector_expectation_doubled(psi: &StateVector) -> Result<f64> {
    let n = psi.num_qubits();
    if n > DOUBLED_SPACE_CAP {
        return Err(Error::CapExceeded {
            what: "doubled-space concurrence",
            requested: n,
            cap: DOUBLED_SPACE_CAP,
        });
    }
    let doubled = psi.kron(psi)?;
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let h = C64::new(0.5, 0.0);
    let sym = [
        o, z, z, z, //
        z, h, h, z, //
        z, h, h, z, //
        z, z, z, o,
    ];
    let mut image = doubled.amplitudes().to_vec();
    for i in 0..n {
        apply_matrix(&mut image, 2 * n, &[i, n + i], &[], &sym);
    }
    let value: C64 = doubled
        .amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(value.re)
}

/// `1 − f` below this is rounding noise; the square root would inflate it to ~1e-8.
const PRODUCT_TOL: f64 = 1e-14;

fn concurrence_from(f: f64) -> f64 {
    let gap = 1.0 - f;
    if gap < PRODUCT_TOL {
        return 0.0;
    }
    2.0 * gap.sqrt()
}

/// `C = 2√(1 − ⟨P₁⊗…⊗P_n⟩)` via subset purities.
pub fn concurrence(psi: &StateVector) -> Result<MeasureValue> {
    let f = symmetric_projector_expectation(psi)?;
    Ok(MeasureValue::exact("concurrence", concurrence_from(f)))
}

/// Concurrence through the literal doubled-space formula.
pub fn concurrence_doubled_space(psi: &StateVector) -> Result<f64> {
    Ok(concurrence_from(symmetric_projector_expectation_doubled(psi)?))
}

/// `g(ψ) = ⟨ψ|Y⊗ⁿ|ψ*⟩`, defined for every `n`.
pub fn conjugated_y_form(psi: &StateVector) -> C64 {
    let n = psi.num_qubits();
    let y = GateKind::Y.matrix();
    let mut image = psi.conj().into_amplitudes();
    for q in 0..n {
        apply_matrix(&mut image, n, &[q], &[], &y);
    }
    psi.amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// `N = |⟨ψ|Y⊗ⁿ|ψ*⟩|²` for even `n`.
pub fn n_tangle(psi: &StateVector) -> Result<MeasureValue> {
    let n = psi.num_qubits();
    if !n.is_multiple_of(2) {
        return Err(Error::Domain(alloc::format!(
            "n-tangle is defined for an even number of qubits, got {n}"
        )));
    }
    Ok(MeasureValue::exact("n_tangle", conjugated_y_form(psi).norm_sqr()))
}
