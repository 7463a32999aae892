//! Circuit representation and its line-oriented text format.
//!
//! ```text
//! qubits 3          # header, required first
//! h 0
//! cnot 0 1          # control 0, target 1
//! ctrl 2 ry 0.5 1   # RY(0.5) on qubit 1, controlled on qubit 2
//! unitary 0 [ 1 0 0 0 0 0 1 0 ]
//! ```

mod parse;
mod serialize;

pub use parse::{parse_circuit, parse_circuit_bytes, ParseDiagnostic, Severity};
pub use serialize::serialize_circuit;

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gate::{GateInstance, GateKind};
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<GateInstance>,
    name: Option<String>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("circuit needs at least one qubit".into()));
        }
        Ok(Self {
            n,
            gates: Vec::new(),
            name: None,
        })
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = GateInstance>) -> Result<Self> {
        let mut c = Self::new(n)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn push(&mut self, gate: GateInstance) -> Result<()> {
        if let Some(q) = gate.touched().find(|&q| q >= self.n) {
            return Err(Error::IndexOutOfRange { index: q, n: self.n });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Qubit count and gate list equal; the label is ignored.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.n == other.n && self.gates == other.gates
    }

    /// Runs the circuit on `|0⟩ⁿ` and returns the initial state followed by the state after
    /// every gate.
    pub fn run_steps(&self) -> Result<Vec<StateVector>> {
        let mut state = StateVector::zero(self.n)?;
        let mut out = Vec::with_capacity(self.gates.len() + 1);
        out.push(state.clone());
        for g in &self.gates {
            state.apply(g)?;
            out.push(state.clone());
        }
        Ok(out)
    }

    /// Final state `𝒞|0⟩ⁿ`.
    pub fn run(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.n)?;
        for g in &self.gates {
            state.apply(g)?;
        }
        Ok(state)
    }
}

/// True iff every gate is an uncontrolled H, T or CNOT (the canonical BQP-complete gate set).
/// Vacuously true for an empty circuit.
pub fn validate_universal_set(c: &Circuit) -> bool {
    c.gates().iter().all(|g| {
        g.controls().is_empty() && matches!(g.kind(), GateKind::H | GateKind::T | GateKind::Cnot)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_set_examples() {
        let c = Circuit::from_gates(
            2,
            [
                GateInstance::single(GateKind::H, 0).unwrap(),
                GateInstance::single(GateKind::T, 1).unwrap(),
                GateInstance::cnot(0, 1).unwrap(),
            ],
        )
        .unwrap();
        assert!(validate_universal_set(&c));
        let c = Circuit::from_gates(1, [GateInstance::single(GateKind::Ry(0.2), 0).unwrap()]).unwrap();
        assert!(!validate_universal_set(&c));
        assert!(validate_universal_set(&Circuit::new(3).unwrap()));
        let c = Circuit::from_gates(
            2,
            [GateInstance::new(GateKind::H, alloc::vec![0], alloc::vec![1]).unwrap()],
        )
        .unwrap();
        assert!(!validate_universal_set(&c));
    }

    #[test]
    fn push_checks_range() {
        let mut c = Circuit::new(2).unwrap();
        assert_eq!(
            c.push(GateInstance::cnot(0, 2).unwrap()),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
        assert!(Circuit::new(0).is_err());
    }
}
