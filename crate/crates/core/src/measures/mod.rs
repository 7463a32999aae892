//! Entanglement measures on pure states, each reported as an exact value or a certified bound.

mod entropy;
mod epsilon;
mod geometric;
mod localizable;
mod multipartite;
mod relative;
mod witness;

pub use entropy::{
    entanglement_entropy, renyi_entanglement, renyi_entropy, schmidt_rank, squashed_entanglement_pure,
    SchmidtRank, DEFAULT_RANK_TOL,
};
pub use epsilon::{epsilon_measure_ub, EpsilonBase};
pub use geometric::{geometric_measure, maximize_product_overlap, GeometricOptions, ProductOverlap};
pub use localizable::{
    localizable_entanglement, localizable_upper_bound, protocol_average, LocalizableBounds,
    LocalizableOptions, MeasurementBasis, LOCALIZABLE_CAP,
};
pub use multipartite::{
    concurrence, concurrence_doubled_space, conjugated_y_form, n_tangle, symmetric_projector_expectation,
    symmetric_projector_expectation_doubled, CONCURRENCE_CAP, DOUBLED_SPACE_CAP,
};
pub use relative::{
    relative_entropy_bound_value, relative_entropy_ub, separable_reference, RelativeEntropyReport,
};
pub use witness::{witness_measure, Witness, WITNESS_HERMITIAN_TOL, WITNESS_SUPPORT_CAP};

use alloc::string::String;
use alloc::vec::Vec;
use serde::Serialize;

use crate::C64;

/// Value is negative only through round-off below this.
pub const VALUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Exact,
    UpperBound,
    LowerBound,
}

/// Evidence attached to a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// A complete product state and its overlap magnitude with the measured state.
    ProductState {
        sites: Vec<[C64; 2]>,
        overlap: f64,
        converged: bool,
    },
    /// The candidate state realizing an ε-measure upper bound.
    Candidate { label: String, distance: f64 },
    /// The separable reference state used in a relative-entropy bound.
    Sigma {
        description: String,
        min_eigenvalue: f64,
        trace_distance_bound: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureValue {
    pub name: String,
    pub value: f64,
    pub kind: ValueKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MeasureValue {
    pub fn exact(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, value, ValueKind::Exact)
    }

    pub fn new(name: impl Into<String>, value: f64, kind: ValueKind) -> Self {
        Self {
            name: name.into(),
            value,
            kind,
            certificate: None,
            note: None,
        }
    }

    pub fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}
