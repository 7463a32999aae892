//! JSON and CSV report writers.

use std::io::Write;
use std::path::Path;

use littlent_core::experiments::{DecisionReport, StepTrace};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::verify::VerifyReport;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level JSON object: schema version and command, then the body's fields.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn to_json<T: Serialize>(command: &str, body: &T) -> CliResult<String> {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        command,
        body,
    };
    serde_json::to_string_pretty(&env)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Input(format!("cannot serialize report: {e}")))
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<String>,
    pub num_qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Distance used in the bounds; absent when each step uses its own distance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub steps: Vec<StepTrace>,
    pub all_pass: bool,
    pub integrated_entanglement: Option<f64>,
    pub integrated_entanglement_note: &'static str,
}

pub const INTEGRATED_NOTE: &str =
    "informational: number of steps times the largest entropy seen; not a defined cost measure";

#[derive(Serialize)]
struct TraceRow<'a> {
    step: usize,
    bipartition: &'a str,
    measure: &'a str,
    value: Option<f64>,
    kind: &'a str,
    bound: Option<f64>,
    pass: Option<bool>,
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Input(format!("cannot write CSV: {e}"))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Input(format!("cannot write CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(format!("CSV is not UTF-8: {e}")))
}

/// One row per step × measure (× bipartition). Failed evaluations have kind `error`.
pub fn trace_csv(steps: &[StepTrace]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in steps {
        for e in &s.entries {
            let kind = match (&e.value, &e.error) {
                (Some(v), _) => match v.kind {
                    littlent_core::measures::ValueKind::Exact => "exact",
                    littlent_core::measures::ValueKind::UpperBound => "upper_bound",
                    littlent_core::measures::ValueKind::LowerBound => "lower_bound",
                },
                _ => "error",
            };
            w.serialize(TraceRow {
                step: s.step,
                bipartition: e.bipartition.as_deref().unwrap_or(""),
                measure: &e.measure,
                value: e.value.as_ref().map(|v| v.value),
                kind,
                bound: e.bound.as_ref().map(|b| b.rhs),
                pass: e.bound.as_ref().map(|b| b.pass),
            })
            .map_err(csv_err)?;
        }
    }
    finish_csv(w)
}

pub fn decision_csv(r: &DecisionReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(r).map_err(csv_err)?;
    finish_csv(w)
}

#[derive(Serialize)]
struct SuiteRow<'a> {
    suite: &'a str,
    instances: u64,
    checks: u64,
    passed: u64,
    failed: u64,
    errors: usize,
    worst_slack: Option<f64>,
}

pub fn verify_csv(r: &VerifyReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in &r.suites {
        w.serialize(SuiteRow {
            suite: &s.name,
            instances: s.instances,
            checks: s.checks,
            passed: s.passed,
            failed: s.failed,
            errors: s.errors.len(),
            worst_slack: s.worst_slack,
        })
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

/// Writes to `path`, or to stdout when `None`.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use littlent_core::experiments::{entanglement_trace, TraceContext, TraceMeasure};
    use littlent_core::parse_circuit;

    #[test]
    fn envelope_is_versioned_and_flat() {
        #[derive(Serialize)]
        struct Body {
            x: u32,
        }
        let v: serde_json::Value = serde_json::from_str(&to_json("demo", &Body { x: 3 }).unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "demo");
        assert_eq!(v["x"], 3);
    }

    #[test]
    fn trace_csv_has_error_rows() {
        let c = parse_circuit("qubits 3\nh 0\ncnot 0 1\n").unwrap();
        let ctx = TraceContext {
            measures: vec![TraceMeasure::Entropy, TraceMeasure::NTangle],
            ..Default::default()
        };
        let csv = trace_csv(&entanglement_trace(&c, &ctx).unwrap()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "step,bipartition,measure,value,kind,bound,pass");
        assert!(csv.lines().any(|l| l.contains("n_tangle") && l.contains(",error,")));
    }
}
