//! Entanglement measures and their continuity bounds evaluated after every gate.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use serde::Serialize;

use crate::bounds::{
    concurrence_bound, entropy_bound, geometric_bound, n_tangle_bound, squashed_bound, BoundCheck,
};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::measures::{
    concurrence, entanglement_entropy, geometric_measure, n_tangle, renyi_entanglement, schmidt_rank,
    squashed_entanglement_pure, GeometricOptions, MeasureValue, DEFAULT_RANK_TOL,
};
use crate::state::{Bipartition, Partition, StateVector};
use crate::Caps;

/// A measure that can be traced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceMeasure {
    Entropy,
    Renyi(f64),
    Schmidt,
    Geometric,
    Concurrence,
    NTangle,
    Squashed,
}

impl TraceMeasure {
    pub fn name(&self) -> String {
        match self {
            Self::Entropy => "entropy".into(),
            Self::Renyi(a) => alloc::format!("renyi:{a}"),
            Self::Schmidt => "schmidt".into(),
            Self::Geometric => "geometric".into(),
            Self::Concurrence => "concurrence".into(),
            Self::NTangle => "n_tangle".into(),
            Self::Squashed => "squashed".into(),
        }
    }

    /// Whether the measure is evaluated once per bipartition.
    pub fn per_bipartition(&self) -> bool {
        matches!(self, Self::Entropy | Self::Renyi(_) | Self::Schmidt)
    }
}

impl FromStr for TraceMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "entropy" => Self::Entropy,
            "schmidt" | "schmidt_rank" => Self::Schmidt,
            "geometric" => Self::Geometric,
            "concurrence" => Self::Concurrence,
            "n_tangle" => Self::NTangle,
            "squashed" => Self::Squashed,
            _ => {
                let alpha = s
                    .strip_prefix("renyi:")
                    .and_then(|a| a.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidInput(alloc::format!("unknown measure '{s}'")))?;
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidInput(alloc::format!("Renyi order must be positive, got {alpha}")));
                }
                Self::Renyi(alpha)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct TraceContext {
    /// Empty means every contiguous cut.
    pub bipartitions: Vec<Bipartition>,
    pub measures: Vec<TraceMeasure>,
    /// Trace-distance radius used in the bounds; `None` uses each step's own distance.
    pub radius: Option<f64>,
    /// Partition for the squashed measure; `None` means single qubits.
    pub partition: Option<Partition>,
    pub geometric: GeometricOptions,
    pub caps: Caps,
}

impl Default for TraceContext {
    fn default() -> Self {
        Self {
            bipartitions: Vec::new(),
            measures: alloc::vec![TraceMeasure::Entropy],
            radius: None,
            partition: None,
            geometric: GeometricOptions::default(),
            caps: Caps::default(),
        }
    }
}

/// One measure evaluation at one step. Failures are recorded, not raised.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureEntry {
    pub measure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<MeasureValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundCheck>,
    /// Why no bound was attached, when none is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTrace {
    /// 0 is the initial state; step `t` follows gate `t`.
    pub step: usize,
    pub distance: f64,
    pub entries: Vec<MeasureEntry>,
}

impl StepTrace {
    /// True when every attached bound check passes.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().filter_map(|e| e.bound.as_ref()).all(|b| b.pass)
    }
}

fn entry(
    measure: &TraceMeasure,
    split: Option<&Bipartition>,
    value: Result<MeasureValue>,
    bound: Option<Result<f64>>,
) -> MeasureEntry {
    let mut e = MeasureEntry {
        measure: measure.name(),
        bipartition: split.map(Bipartition::label),
        value: None,
        error: None,
        bound: None,
        bound_note: None,
    };
    match value {
        Ok(v) => {
            match bound {
                Some(Ok(rhs)) => {
                    let ctx = match split {
                        Some(s) => alloc::format!("{} [{}]", e.measure, s.label()),
                        None => e.measure.clone(),
                    };
                    e.bound = Some(BoundCheck::new(v.value, rhs, ctx));
                }
                Some(Err(err)) => e.bound_note = Some(err.to_string()),
                None => e.bound_note = Some("no continuity bound for this measure".into()),
            }
            e.value = Some(v);
        }
        Err(err) => e.error = Some(err.to_string()),
    }
    e
}

/// Evaluates every requested measure and bound on one state.
pub fn trace_step(step: usize, psi: &StateVector, ctx: &TraceContext) -> StepTrace {
    let n = psi.num_qubits();
    let distance = psi.distance_to_zero().clamp(0.0, 1.0);
    let t = ctx.radius.unwrap_or(distance);
    let cuts = if ctx.bipartitions.is_empty() {
        Bipartition::all_contiguous(n)
    } else {
        ctx.bipartitions.clone()
    };
    let mut entries = Vec::new();
    for m in &ctx.measures {
        if m.per_bipartition() {
            for split in &cuts {
                let (value, bound) = match m {
                    TraceMeasure::Entropy => (entanglement_entropy(psi, split), Some(entropy_bound(t, split.size_a()))),
                    TraceMeasure::Renyi(a) => (
                        renyi_entanglement(psi, split, *a),
                        // E_α ≤ E for α ≥ 1; below 1 no bound near |0⟩ⁿ exists.
                        (*a >= 1.0).then(|| entropy_bound(t, split.size_a())),
                    ),
                    _ => (schmidt_rank(psi, split, DEFAULT_RANK_TOL).map(|r| r.to_measure()), None),
                };
                entries.push(entry(m, Some(split), value, bound));
            }
            continue;
        }
        let (value, bound) = match m {
            TraceMeasure::Geometric => (geometric_measure(psi, &ctx.geometric), Some(geometric_bound(t))),
            TraceMeasure::Concurrence => (concurrence(psi), Some(concurrence_bound(t))),
            TraceMeasure::NTangle => (n_tangle(psi), Some(n_tangle_bound(t))),
            _ => {
                let parts = ctx.partition.clone().unwrap_or_else(|| Partition::singletons(n));
                let sizes: Vec<usize> = parts.parts().iter().map(Vec::len).collect();
                (squashed_entanglement_pure(psi, &parts), Some(squashed_bound(t, &sizes)))
            }
        };
        entries.push(entry(m, None, value, bound));
    }
    StepTrace { step, distance, entries }
}

/// Traces `c` from `|0⟩ⁿ` through every gate.
pub fn entanglement_trace(c: &Circuit, ctx: &TraceContext) -> Result<Vec<StepTrace>> {
    let n = c.num_qubits();
    ctx.caps.check_statevector("trace", n)?;
    for split in &ctx.bipartitions {
        if split.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: split.num_qubits(),
                right: n,
            });
        }
    }
    if let Some(p) = &ctx.partition {
        if p.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: p.num_qubits(),
                right: n,
            });
        }
    }
    Ok(c.run_steps()?
        .iter()
        .enumerate()
        .map(|(t, psi)| trace_step(t, psi, ctx))
        .collect())
}

/// Number of recorded steps times the largest entropy seen at any step and cut.
///
/// Informational only: the quantity is suggested, not defined, as a cost measure.
pub fn integrated_entanglement(traces: &[StepTrace]) -> Option<f64> {
    let max = traces
        .iter()
        .flat_map(|s| &s.entries)
        .filter(|e| e.measure == "entropy")
        .filter_map(|e| e.value.as_ref().map(|v| v.value))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))?;
    Some(traces.len() as f64 * max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::dilution::{dilute, EpsilonParams};
    use approx::assert_abs_diff_eq;

    #[test]
    fn parse_measures() {
        assert_eq!("entropy".parse::<TraceMeasure>().unwrap(), TraceMeasure::Entropy);
        assert_eq!("renyi:0.5".parse::<TraceMeasure>().unwrap(), TraceMeasure::Renyi(0.5));
        assert!("renyi:-1".parse::<TraceMeasure>().is_err());
        assert!("bogus".parse::<TraceMeasure>().is_err());
    }

    #[test]
    fn empty_circuit_single_zero_step() {
        let c = Circuit::new(3).unwrap();
        let ctx = TraceContext {
            measures: alloc::vec![TraceMeasure::Entropy, TraceMeasure::Concurrence, TraceMeasure::Squashed],
            ..Default::default()
        };
        let tr = entanglement_trace(&c, &ctx).unwrap();
        assert_eq!(tr.len(), 1);
        for e in &tr[0].entries {
            assert!(e.value.as_ref().unwrap().value.abs() < 1e-9);
        }
        assert!(tr[0].all_pass());
    }

    #[test]
    fn bell_circuit_reaches_one() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\n").unwrap();
        let tr = entanglement_trace(&c, &TraceContext::default()).unwrap();
        let last = tr.last().unwrap();
        assert_abs_diff_eq!(last.entries[0].value.as_ref().unwrap().value, 1.0, epsilon = 1e-12);
        // Distance 1/√2 is outside the Fannes regime: the bound is skipped with a note.
        assert!(last.entries[0].bound.is_none() && last.entries[0].bound_note.is_some());
    }

    #[test]
    fn diluted_trace_passes_and_odd_tangle_is_in_band() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\nt 1\nh 1\n").unwrap();
        let eps = EpsilonParams::new(0.01).unwrap();
        let d = dilute(&c, eps).unwrap();
        let ctx = TraceContext {
            measures: alloc::vec![TraceMeasure::Entropy, TraceMeasure::NTangle],
            radius: Some(eps.epsilon_bar()),
            ..Default::default()
        };
        let tr = entanglement_trace(d.transformed(), &ctx).unwrap();
        assert_eq!(tr.len(), 6);
        for s in &tr {
            assert!(s.all_pass());
            let nt = s.entries.iter().find(|e| e.measure == "n_tangle").unwrap();
            assert!(nt.error.is_some());
        }
        assert!(integrated_entanglement(&tr).unwrap() >= 0.0);
    }
}
