//! End-to-end experiments: the promise-problem decision on diluted circuits, the Rényi
//! counterexample, random states near `|0⟩ⁿ`, pseudo-pure states and per-step tracing.

mod counterexample;
mod decision;
mod sampling;
mod trace;

pub use counterexample::{counterexample_report, counterexample_state, CounterexampleReport, CounterexampleSpec};
pub use decision::{
    count_ones_block, decide, decision_experiment, meta_trial, meta_trials, report_from_count, required_runs, run_blocks,
    Decision,
    DecisionReport, MetaTrialSummary, SamplingMode, BLOCK_RUNS, INCONCLUSIVE_MARGIN,
};
pub use sampling::{
    haar_state, pseudo_pure, pseudo_pure_convex_bound, random_density, random_density_pair, random_product_state,
    random_universal_circuit,
    sample_s_epsilon, sample_s_epsilon_indexed,
};
pub use trace::{
    entanglement_trace, integrated_entanglement, trace_step, MeasureEntry, StepTrace, TraceContext, TraceMeasure,
};
