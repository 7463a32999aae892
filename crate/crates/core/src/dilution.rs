//! The dilution transform: an ancilla prepared in `√(1−ε)|0⟩ + √ε|1⟩` controls every gate of
//! the base circuit, so the register never leaves the trace-distance ball of radius `√ε`
//! around `|0⟩ⁿ`.

use alloc::vec::Vec;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{GateInstance, GateKind, MAX_TOUCHED};
use crate::state::StateVector;
use crate::Caps;

/// Slack added to radius comparisons.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The amplitude-squared weight `ε` of the ancilla's `|1⟩` branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonParams {
    epsilon: f64,
    epsilon_bar: f64,
    delta: Option<f64>,
}

impl EpsilonParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidInput(alloc::format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            epsilon_bar: epsilon.sqrt(),
            delta: None,
        })
    }

    /// Attaches the target entanglement scale `δ` (informational).
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Trace-distance radius `√ε`.
    pub fn epsilon_bar(&self) -> f64 {
        self.epsilon_bar
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Ancilla rotation angle `θ = 2·arcsin(√ε)`.
    pub fn theta(&self) -> f64 {
        2.0 * self.epsilon_bar.asin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilutedCircuit {
    base: Circuit,
    epsilon: EpsilonParams,
    transformed: Circuit,
}

impl DilutedCircuit {
    pub fn base(&self) -> &Circuit {
        &self.base
    }

    pub fn epsilon(&self) -> &EpsilonParams {
        &self.epsilon
    }

    pub fn transformed(&self) -> &Circuit {
        &self.transformed
    }

    /// Index of the ancilla (the highest qubit).
    pub fn ancilla(&self) -> usize {
        self.base.num_qubits()
    }
}

/// Builds the `(m+1)`-qubit circuit: `RY(θ)` on the ancilla, then every base gate with the
/// ancilla appended to its controls. Purely structural.
pub fn dilute(c: &Circuit, eps: EpsilonParams) -> Result<DilutedCircuit> {
    let m = c.num_qubits();
    let mut transformed = Circuit::new(m + 1)?;
    if let Some(name) = c.name() {
        transformed = transformed.with_name(alloc::format!("{name} (diluted, eps={})", eps.epsilon()));
    }
    transformed.push(GateInstance::single(GateKind::Ry(eps.theta()), m)?)?;
    for g in c.gates() {
        let touched = g.touched().count();
        if touched >= MAX_TOUCHED {
            return Err(Error::Arity(touched + 1));
        }
        transformed.push(g.with_control(m)?)?;
    }
    Ok(DilutedCircuit {
        base: c.clone(),
        epsilon: eps,
        transformed,
    })
}

/// States after the ancilla rotation and after each subsequent gate (`1 + |base|` entries).
pub fn step_states(d: &DilutedCircuit, caps: &Caps) -> Result<Vec<StateVector>> {
    let t = d.transformed();
    caps.check_statevector("diluted circuit", t.num_qubits())?;
    let mut steps = t.run_steps()?;
    steps.remove(0);
    Ok(steps)
}

/// One row of an `S_ε` membership report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepMembership {
    pub step: usize,
    pub distance: f64,
    pub pass: bool,
}

/// Distance of every step (initial state included) to `|0⟩ⁿ`, and whether it is within `radius`.
pub fn verify_s_epsilon(c: &Circuit, radius: f64, caps: &Caps) -> Result<Vec<StepMembership>> {
    caps.check_statevector("circuit", c.num_qubits())?;
    Ok(c.run_steps()?
        .iter()
        .enumerate()
        .map(|(step, s)| {
            let distance = s.distance_to_zero();
            StepMembership {
                step,
                distance,
                pass: distance <= radius + MEMBERSHIP_TOL,
            }
        })
        .collect())
}
