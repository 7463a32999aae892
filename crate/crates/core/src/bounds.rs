//! Continuity inequalities near `|0⟩ⁿ` and checkers that compare them with computed values.
//!
//! Every evaluator refuses inputs outside the regime in which its inequality is proved.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use serde::Serialize;

use crate::density::{operator_norm, DensityOperator};
use crate::dilution::MEMBERSHIP_TOL;
use crate::error::{Error, Result};
use crate::gate::{apply_matrix, GateKind};
use crate::math::log2;
use crate::measures::{
    conjugated_y_form, symmetric_projector_expectation, Witness, DOUBLED_SPACE_CAP,
};
use crate::state::StateVector;
use crate::C64;

/// A check passes when `rhs − lhs ≥ −PASS_SLACK`.
pub const PASS_SLACK: f64 = 1e-9;

/// Largest trace distance for which the Fannes form applies, `1/(2e)`.
pub const FANNES_LIMIT: f64 = 1.0 / (2.0 * core::f64::consts::E);

/// Largest total register (`n·k` qubits) for an explicit polynomial-form operator.
pub const EXPLICIT_FORM_CAP: usize = 2 * DOUBLED_SPACE_CAP;

/// Norm agreement required when a caller supplies `‖A‖∞` alongside an explicit operator.
pub const NORM_CROSSCHECK_TOL: f64 = 1e-9;

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub context: String,
}

impl BoundCheck {
    pub fn new(lhs: f64, rhs: f64, context: impl Into<String>) -> Self {
        let slack = rhs - lhs;
        Self {
            lhs,
            rhs,
            slack,
            pass: slack >= -PASS_SLACK,
            context: context.into(),
        }
    }
}

fn regime(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OutOfRegime(msg()))
    }
}

/// `2T log₂ d − 2T log₂ 2T` for `0 ≤ T ≤ 1/(2e)`.
pub fn fannes_bound(t: f64, d: usize) -> Result<f64> {
    regime((0.0..=FANNES_LIMIT).contains(&t), || {
        alloc::format!("Fannes bound needs 0 <= T <= 1/(2e), got T = {t}")
    })?;
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * t * log2(d as f64) - 2.0 * t * log2(2.0 * t))
}

/// `2ε|A| − 2ε log₂ 2ε`: the Fannes form at `d = 2^|A|`.
pub fn entropy_bound(eps: f64, size_a: usize) -> Result<f64> {
    regime((0.0..=FANNES_LIMIT).contains(&eps), || {
        alloc::format!("entropy bound needs 0 <= eps <= 1/(2e), got eps = {eps}")
    })?;
    if eps == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * eps * size_a as f64 - 2.0 * eps * log2(2.0 * eps))
}

/// Sum of per-part entropy bounds.
pub fn squashed_bound(eps: f64, part_sizes: &[usize]) -> Result<f64> {
    part_sizes.iter().map(|&s| entropy_bound(eps, s)).sum()
}

/// `−log₂ √(1−ε²)`: `|0⟩ⁿ` is itself a product state with overlap `√(1−ε²)`.
pub fn geometric_bound(eps: f64) -> Result<f64> {
    regime((0.0..1.0).contains(&eps), || {
        alloc::format!("geometric bound needs 0 <= eps < 1, got {eps}")
    })?;
    // `+ 0.0` turns the `-0.0` at `eps = 0` into `0.0`.
    Ok(-0.5 * log2(1.0 - eps * eps) + 0.0)
}

/// `2√(8ε)` from the `k = 2`, `‖A‖∞ = 1` polynomial bound and `f(|0⟩ⁿ) = 1`.
pub fn concurrence_bound(eps: f64) -> Result<f64> {
    regime((0.0..=1.0).contains(&eps), || alloc::format!("eps must lie in [0, 1], got {eps}"))?;
    Ok(2.0 * (8.0 * eps).sqrt())
}

/// `(8ε)²` from the `k = 1` conjugated bound and `g(|0⟩ⁿ) = 0`.
pub fn n_tangle_bound(eps: f64) -> Result<f64> {
    regime((0.0..=1.0).contains(&eps), || alloc::format!("eps must lie in [0, 1], got {eps}"))?;
    Ok(64.0 * eps * eps)
}

/// `2ε‖W‖∞`.
pub fn witness_bound(eps: f64, norm: f64) -> Result<f64> {
    regime((0.0..=1.0).contains(&eps), || alloc::format!("eps must lie in [0, 1], got {eps}"))?;
    Ok(2.0 * eps * norm)
}

/// `|S(ρ) − S(σ)| ≤ fannes_bound(T(ρ, σ), d)`.
pub fn fannes_check(rho: &DensityOperator, sigma: &DensityOperator) -> Result<BoundCheck> {
    let t = rho.trace_distance(sigma)?;
    let d = 1usize << rho.num_qubits();
    let rhs = fannes_bound(t, d)?;
    let lhs = (rho.von_neumann_entropy() - sigma.von_neumann_entropy()).abs();
    Ok(BoundCheck::new(lhs, rhs, alloc::format!("fannes d={d} T={t:.6e}")))
}

/// `T_k = √(1 − |⟨ψ|φ⟩|^{2k})`, the trace distance between `k`-fold tensor powers, checked
/// against `2kT`.
pub fn tensor_trace_distance(psi: &StateVector, phi: &StateVector, k: u32) -> Result<(f64, BoundCheck)> {
    if k == 0 {
        return Err(Error::InvalidInput("tensor power must be at least 1".into()));
    }
    let f = psi.overlap(phi)?.norm_sqr().min(1.0);
    let t = (1.0 - f).max(0.0).sqrt();
    let tk = (1.0 - f.powi(k as i32)).max(0.0).sqrt();
    let check = BoundCheck::new(tk, 2.0 * k as f64 * t, alloc::format!("tensor k={k}"));
    Ok((tk, check))
}

/// The operator of a homogeneous polynomial form.
#[derive(Debug, Clone, PartialEq)]
pub enum FormOperator {
    /// A dense operator on `n·k` qubits, copy `c` occupying qubits `c·n .. (c+1)·n`.
    Explicit { qubits_per_copy: usize, matrix: DMatrix<C64> },
    /// `P₁ ⊗ … ⊗ P_n` on two copies, `P_i` the symmetric projector on the `i`-th qubit pair.
    SymmetricProjectorProduct,
    /// `Y⊗ⁿ` on one copy.
    YTensorPower,
}

/// `f(ψ) = ⟨ψ|⊗ᵏ A |ψ⟩⊗ᵏ` or, when `conjugated`, `g(ψ) = ⟨ψ|⊗ᵏ A |ψ*⟩⊗ᵏ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialForm {
    k: u32,
    op: FormOperator,
    conjugated: bool,
    norm: f64,
}

impl PolynomialForm {
    /// Explicit operator; `‖A‖∞` is computed and cached.
    pub fn explicit(k: u32, qubits_per_copy: usize, matrix: DMatrix<C64>, conjugated: bool) -> Result<Self> {
        if k == 0 || qubits_per_copy == 0 {
            return Err(Error::InvalidInput("form needs k >= 1 and at least one qubit".into()));
        }
        let total = qubits_per_copy * k as usize;
        if total > EXPLICIT_FORM_CAP {
            return Err(Error::CapExceeded {
                what: "explicit polynomial form",
                requested: total,
                cap: EXPLICIT_FORM_CAP,
            });
        }
        let dim = 1usize << total;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: dim,
            });
        }
        let norm = operator_norm(&matrix);
        Ok(Self {
            k,
            op: FormOperator::Explicit {
                qubits_per_copy,
                matrix,
            },
            conjugated,
            norm,
        })
    }

    /// Explicit operator with a claimed norm, which must agree with the computed one.
    pub fn explicit_with_norm(
        k: u32,
        qubits_per_copy: usize,
        matrix: DMatrix<C64>,
        conjugated: bool,
        claimed_norm: f64,
    ) -> Result<Self> {
        let form = Self::explicit(k, qubits_per_copy, matrix, conjugated)?;
        if (form.norm - claimed_norm).abs() > NORM_CROSSCHECK_TOL {
            return Err(Error::Precondition(alloc::format!(
                "claimed operator norm {claimed_norm} differs from computed {}",
                form.norm
            )));
        }
        Ok(form)
    }

    /// The concurrence's inner form: `k = 2`, `‖A‖∞ = 1`.
    pub fn symmetric_projector_product() -> Self {
        Self {
            k: 2,
            op: FormOperator::SymmetricProjectorProduct,
            conjugated: false,
            norm: 1.0,
        }
    }

    /// The n-tangle's inner form: `k = 1`, conjugated, `‖A‖∞ = 1`.
    pub fn y_tensor_power() -> Self {
        Self {
            k: 1,
            op: FormOperator::YTensorPower,
            conjugated: true,
            norm: 1.0,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn conjugated(&self) -> bool {
        self.conjugated
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn operator(&self) -> &FormOperator {
        &self.op
    }

    /// Multiplier `c` in `|Δ| ≤ c·k·T·‖A‖∞`: 4 for f-forms, 8 for g-forms.
    pub fn constant(&self) -> f64 {
        if self.conjugated {
            8.0
        } else {
            4.0
        }
    }

    pub fn evaluate(&self, psi: &StateVector) -> Result<C64> {
        match &self.op {
            FormOperator::SymmetricProjectorProduct => {
                Ok(C64::new(symmetric_projector_expectation(psi)?, 0.0))
            }
            FormOperator::YTensorPower => Ok(conjugated_y_form(psi)),
            FormOperator::Explicit {
                qubits_per_copy,
                matrix,
            } => {
                if psi.num_qubits() != *qubits_per_copy {
                    return Err(Error::DimensionMismatch {
                        left: psi.num_qubits(),
                        right: *qubits_per_copy,
                    });
                }
                evaluate_dense(matrix, psi, self.k, self.conjugated)
            }
        }
    }

    /// Dense matrix of a symbolic operator on `n` qubits per copy (for self-tests).
    pub fn explicit_matrix(&self, n: usize) -> Result<DMatrix<C64>> {
        let total = n * self.k as usize;
        if n == 0 || total > EXPLICIT_FORM_CAP {
            return Err(Error::CapExceeded {
                what: "explicit polynomial form",
                requested: total,
                cap: EXPLICIT_FORM_CAP,
            });
        }
        let dim = 1usize << total;
        let (targets_of, local): (Vec<Vec<usize>>, Vec<C64>) = match &self.op {
            FormOperator::Explicit { matrix, .. } => return Ok(matrix.clone()),
            FormOperator::SymmetricProjectorProduct => {
                let (z, o, h) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.5, 0.0));
                let sym = alloc::vec![o, z, z, z, z, h, h, z, z, h, h, z, z, z, z, o];
                ((0..n).map(|i| alloc::vec![i, n + i]).collect(), sym)
            }
            FormOperator::YTensorPower => ((0..n).map(|i| alloc::vec![i]).collect(), GateKind::Y.matrix()),
        };
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for col in 0..dim {
            let mut v = alloc::vec![C64::new(0.0, 0.0); dim];
            v[col] = C64::new(1.0, 0.0);
            for t in &targets_of {
                apply_matrix(&mut v, total, t, &[], &local);
            }
            for (row, z) in v.into_iter().enumerate() {
                m[(row, col)] = z;
            }
        }
        Ok(m)
    }

    /// Compares the symbolic evaluation with the dense operator on `states` and checks that the
    /// hard-coded norm matches the dense one.
    pub fn self_test(&self, states: &[StateVector]) -> Result<()> {
        let Some(first) = states.first() else {
            return Ok(());
        };
        let n = first.num_qubits();
        let dense = self.explicit_matrix(n)?;
        let norm = operator_norm(&dense);
        if (norm - self.norm).abs() > NORM_CROSSCHECK_TOL {
            return Err(Error::Precondition(alloc::format!(
                "form norm {} disagrees with dense norm {norm}",
                self.norm
            )));
        }
        for psi in states {
            let a = self.evaluate(psi)?;
            let b = evaluate_dense(&dense, psi, self.k, self.conjugated)?;
            if (a - b).norm() > 1e-10 {
                return Err(Error::Precondition(alloc::format!(
                    "symbolic form value {a} disagrees with dense value {b}"
                )));
            }
        }
        Ok(())
    }
}

fn tensor_power(psi: &StateVector, k: u32) -> Result<Vec<C64>> {
    let mut acc = psi.clone();
    for _ in 1..k {
        acc = acc.kron(psi)?;
    }
    Ok(acc.into_amplitudes())
}

fn evaluate_dense(matrix: &DMatrix<C64>, psi: &StateVector, k: u32, conjugated: bool) -> Result<C64> {
    let bra = tensor_power(psi, k)?;
    let ket = if conjugated {
        tensor_power(&psi.conj(), k)?
    } else {
        bra.clone()
    };
    let ket = nalgebra::DVector::from_vec(ket);
    let image = matrix * ket;
    Ok(bra.iter().zip(image.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// `|F(ψ) − F(φ)| ≤ c·k·T(ψ, φ)·‖A‖∞` with `c = 4` (f-forms) or `8` (g-forms).
pub fn poly_continuity_check(form: &PolynomialForm, psi: &StateVector, phi: &StateVector) -> Result<BoundCheck> {
    let t = psi.trace_distance(phi)?;
    let lhs = (form.evaluate(psi)? - form.evaluate(phi)?).norm();
    let rhs = form.constant() * form.k() as f64 * t * form.norm();
    let kind = if form.conjugated() { "g" } else { "f" };
    Ok(BoundCheck::new(lhs, rhs, alloc::format!("poly {kind}-form k={}", form.k())))
}

/// `−⟨ψ|W|ψ⟩ ≤ 2ε‖W‖∞` for `ψ` within `eps` of `|0⟩ⁿ`.
///
/// Violated preconditions are errors, never passing checks.
pub fn witness_norm_check(w: &Witness, psi: &StateVector, eps: f64) -> Result<BoundCheck> {
    let dist = psi.distance_to_zero();
    if dist > eps + MEMBERSHIP_TOL {
        return Err(Error::Precondition(alloc::format!(
            "state is at distance {dist} from |0>^n, outside eps = {eps}"
        )));
    }
    let at_zero = w.expectation(&StateVector::zero(psi.num_qubits())?)?;
    if at_zero < -PASS_SLACK {
        return Err(Error::Precondition(alloc::format!(
            "witness is negative on |0>^n: {at_zero}"
        )));
    }
    let lhs = -w.expectation(psi)?;
    Ok(BoundCheck::new(lhs, witness_bound(eps, w.norm())?, "witness"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fannes_and_entropy_values() {
        assert_eq!(fannes_bound(0.0, 8).unwrap(), 0.0);
        let v = fannes_bound(0.01, 32).unwrap();
        assert_abs_diff_eq!(v, 0.1 - 0.02 * 0.02f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 0.2129, epsilon = 1e-4);
        assert_abs_diff_eq!(entropy_bound(0.01, 5).unwrap(), v, epsilon = 1e-12);
        assert!(matches!(fannes_bound(0.2, 2), Err(Error::OutOfRegime(_))));
        assert!(matches!(entropy_bound(-0.1, 2), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn closed_form_bounds() {
        assert_abs_diff_eq!(concurrence_bound(0.01).unwrap(), 2.0 * 0.08f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(geometric_bound(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(n_tangle_bound(0.01).unwrap(), 0.0064, epsilon = 1e-15);
        assert_abs_diff_eq!(squashed_bound(0.01, &[1, 2]).unwrap(), entropy_bound(0.01, 1).unwrap() + entropy_bound(0.01, 2).unwrap());
        let c = BoundCheck::new(1.0, 1.0 - 0.5e-9, "x");
        assert!(c.pass);
        assert!(!BoundCheck::new(1.0, 1.0 - 2e-9, "x").pass);
    }

    #[test]
    fn tensor_distance_trivia() {
        let psi = StateVector::normalized((0..4).map(|i| C64::new(i as f64, 1.0)).collect()).unwrap();
        let phi = StateVector::zero(2).unwrap();
        let (t1, _) = tensor_trace_distance(&psi, &phi, 1).unwrap();
        assert_abs_diff_eq!(t1, psi.trace_distance(&phi).unwrap(), epsilon = 1e-15);
        for k in [2, 5, 20] {
            let (tk, check) = tensor_trace_distance(&psi, &psi, k).unwrap();
            assert!(tk < 1e-7 && check.pass);
        }
    }

    #[test]
    fn symbolic_forms_match_dense() {
        let states: Vec<StateVector> = (0..3)
            .map(|s| {
                StateVector::normalized((0..8).map(|i| C64::new(((i * 7 + s) % 5) as f64 - 2.0, (i + s) as f64 * 0.3)).collect())
                    .unwrap()
            })
            .collect();
        PolynomialForm::symmetric_projector_product().self_test(&states).unwrap();
        PolynomialForm::y_tensor_power().self_test(&states).unwrap();
    }

    #[test]
    fn explicit_norm_crosscheck() {
        let m = PolynomialForm::y_tensor_power().explicit_matrix(2).unwrap();
        assert!(PolynomialForm::explicit_with_norm(1, 2, m.clone(), true, 1.0).is_ok());
        assert!(matches!(
            PolynomialForm::explicit_with_norm(1, 2, m, true, 2.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn witness_check_preconditions() {
        let w = Witness::bell(0, 1).unwrap();
        let zero = StateVector::zero(2).unwrap();
        let c = witness_norm_check(&w, &zero, 0.0).unwrap();
        assert!(c.pass && c.rhs == 0.0);
        let far = StateVector::basis(2, "11").unwrap();
        assert!(matches!(witness_norm_check(&w, &far, 0.1), Err(Error::Precondition(_))));
    }
}
