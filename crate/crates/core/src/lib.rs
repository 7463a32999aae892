//! Core algorithms for running quantum circuits close to the all-zero product state.
//!
//! Any circuit can be *diluted*: an ancilla rotated to `√(1−ε)|0⟩ + √ε|1⟩` controls every gate,
//! so each intermediate register state stays within trace distance `√ε` of `|0⟩ⁿ` while the
//! output probability of the original circuit is recovered as `q = εp`. The crate provides
//! the dense statevector machinery to run such circuits, a catalog of entanglement measures,
//! the continuity bounds that keep those measures small near `|0⟩ⁿ`, and the end-to-end
//! experiments built on top of them.
//!
//! The crate is `no_std` (it needs `alloc`). File IO, reports and the command line live in the
//! companion `littlent` crate.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod circuit;
pub mod density;
pub mod dilution;
mod error;
pub mod experiments;
pub mod gate;
pub mod math;
pub mod measures;
pub mod rng;
pub mod state;

pub use circuit::{parse_circuit, serialize_circuit, validate_universal_set, Circuit, ParseDiagnostic};
pub use density::{operator_norm, reduced_density, trace_distance_mixed, DensityOperator};
pub use error::{Error, Result};
pub use gate::{GateInstance, GateKind, Unitary};
pub use state::{Bipartition, Partition, StateVector};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Default statevector cap in qubits.
pub const DEFAULT_STATEVECTOR_CAP: usize = 24;

/// Resource limits for whole-register simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub statevector_qubits: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            statevector_qubits: DEFAULT_STATEVECTOR_CAP,
        }
    }
}

impl Caps {
    pub fn check_statevector(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.statevector_qubits {
            return Err(Error::CapExceeded {
                what,
                requested: n,
                cap: self.statevector_qubits,
            });
        }
        Ok(())
    }
}
