//! Data-parallel drivers. Each work item draws from its own index-derived substream and results
//! are collected in index order, so output does not depend on the worker count.

use littlent_core::circuit::{validate_universal_set, Circuit};
use littlent_core::dilution::{dilute, EpsilonParams};
use littlent_core::experiments::{
    count_ones_block, decision_experiment, meta_trial, report_from_count, run_blocks, trace_step, Decision,
    DecisionReport, MetaTrialSummary, SamplingMode, StepTrace, TraceContext,
};
use littlent_core::{Caps, Error};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Runs `f` on a pool of `threads` workers, or on the global pool when `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Input(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Same result as the sequential core routine; the blocks of draws run in parallel.
pub fn decision_experiment_par(
    c: &Circuit,
    eps: &EpsilonParams,
    runs: u64,
    seed: u64,
    caps: &Caps,
    mode: SamplingMode,
) -> Result<DecisionReport, Error> {
    if mode == SamplingMode::Reexecute {
        return decision_experiment(c, eps, runs, seed, caps, mode);
    }
    if runs == 0 {
        return Err(Error::InvalidInput("number of runs must be positive".into()));
    }
    let d = dilute(c, *eps)?;
    caps.check_statevector("diluted circuit", d.transformed().num_qubits())?;
    let q = d.transformed().run()?.probability_one(0)?;
    let blocks: Vec<(u64, u64)> = run_blocks(runs).collect();
    let ones: u64 = blocks
        .par_iter()
        .map(|&(block, len)| count_ones_block(q, seed, block, len))
        .sum();
    Ok(report_from_count(ones, runs, seed, eps, q, mode, validate_universal_set(c)))
}

/// Parallel meta-trials; tallies equal the sequential core routine's.
pub fn meta_trials_par(
    c: &Circuit,
    eps: &EpsilonParams,
    runs: u64,
    seed: u64,
    trials: u64,
    expected: Decision,
    caps: &Caps,
) -> Result<MetaTrialSummary, Error> {
    if runs == 0 {
        return Err(Error::InvalidInput("number of runs must be positive".into()));
    }
    let d = dilute(c, *eps)?;
    caps.check_statevector("diluted circuit", d.transformed().num_qubits())?;
    let q = d.transformed().run()?.probability_one(0)?;
    let decisions: Vec<Decision> = (0..trials)
        .into_par_iter()
        .map(|t| meta_trial(q, eps, runs, seed, t))
        .collect();
    let mut s = MetaTrialSummary {
        trials,
        correct: 0,
        inconclusive: 0,
        wrong: 0,
    };
    for d in decisions {
        match d {
            Decision::Inconclusive => s.inconclusive += 1,
            d if d == expected => s.correct += 1,
            _ => s.wrong += 1,
        }
    }
    Ok(s)
}

/// Parallel over steps.
pub fn entanglement_trace_par(c: &Circuit, ctx: &TraceContext) -> Result<Vec<StepTrace>, Error> {
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
    let states = c.run_steps()?;
    Ok(states
        .par_iter()
        .enumerate()
        .map(|(t, psi)| trace_step(t, psi, ctx))
        .collect())
}
