//! Deciding `p ≥ 2/3` versus `p ≤ 1/3` from repeated runs of the diluted circuit.
//!
//! The diluted circuit outputs 1 on qubit 0 with probability `q = εp`. Repetitions are
//! simulated as Bernoulli draws from that exact probability, in blocks of [`BLOCK_RUNS`] with
//! one random substream per block, so the count does not depend on how blocks are scheduled.

use core::fmt;

#[allow(unused_imports)] // float math goes through libm when std is absent
use num_traits::Float;
use rand::Rng as _;
use serde::{Serialize, Serializer};

use crate::circuit::{validate_universal_set, Circuit};
use crate::dilution::{dilute, DilutedCircuit, EpsilonParams};
use crate::error::{Error, Result};
use crate::rng::{child_seed, substream};
use crate::Caps;

/// Draws per random substream.
pub const BLOCK_RUNS: u64 = 1 << 14;

/// `|p̂ − ½|` below this is reported as inconclusive.
pub const INCONCLUSIVE_MARGIN: f64 = 1.0 / 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    AtLeastTwoThirds,
    AtMostOneThird,
    Inconclusive,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::AtLeastTwoThirds => "p ≥ 2/3",
            Self::AtMostOneThird => "p ≤ 1/3",
            Self::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// How repetitions are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Simulate once, then draw every repetition from the exact output probability.
    #[default]
    ExactDistribution,
    /// Re-simulate the diluted circuit for every repetition (audit mode; same draws).
    Reexecute,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionReport {
    pub q_hat: f64,
    pub p_hat: f64,
    pub decision: Decision,
    pub runs: u64,
    pub seed: u64,
    pub epsilon: f64,
    /// Exact output probability of the diluted circuit.
    pub q_exact: f64,
    pub mode: SamplingMode,
    /// Whether the base circuit uses only H, T and CNOT.
    pub canonical_gate_set: bool,
}

/// `N = ⌈ln(2/δ)·18/ε²⌉`: Hoeffding at accuracy `ε/6` in `q`.
pub fn required_runs(eps: f64, fail_prob: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInput(alloc::format!("epsilon must lie in (0, 1], got {eps}")));
    }
    if !(fail_prob > 0.0 && fail_prob < 1.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "failure probability must lie in (0, 1), got {fail_prob}"
        )));
    }
    Ok(((2.0 / fail_prob).ln() * 18.0 / (eps * eps)).ceil() as u64)
}

/// Thresholds `p̂` at ½ with an inconclusive band of width `1/12` on either side.
pub fn decide(p_hat: f64) -> Decision {
    if (p_hat - 0.5).abs() < INCONCLUSIVE_MARGIN {
        Decision::Inconclusive
    } else if p_hat > 0.5 {
        Decision::AtLeastTwoThirds
    } else {
        Decision::AtMostOneThird
    }
}

/// Number of ones among the draws of `block` (`len` draws, each 1 with probability `q`).
pub fn count_ones_block(q: f64, seed: u64, block: u64, len: u64) -> u64 {
    let mut rng = substream(seed, block);
    (0..len).filter(|_| rng.random::<f64>() < q).count() as u64
}

/// `(block, len)` pairs covering `runs` draws.
pub fn run_blocks(runs: u64) -> impl Iterator<Item = (u64, u64)> {
    let blocks = runs.div_ceil(BLOCK_RUNS);
    (0..blocks).map(move |b| (b, BLOCK_RUNS.min(runs - b * BLOCK_RUNS)))
}

fn output_probability(d: &DilutedCircuit) -> Result<f64> {
    d.transformed().run()?.probability_one(0)
}

fn count_reexecuted(d: &DilutedCircuit, seed: u64, block: u64, len: u64) -> Result<u64> {
    let mut rng = substream(seed, block);
    let mut ones = 0;
    for _ in 0..len {
        let q = output_probability(d)?;
        if rng.random::<f64>() < q {
            ones += 1;
        }
    }
    Ok(ones)
}

/// Builds the report from a count of ones.
pub fn report_from_count(
    ones: u64,
    runs: u64,
    seed: u64,
    eps: &EpsilonParams,
    q_exact: f64,
    mode: SamplingMode,
    canonical_gate_set: bool,
) -> DecisionReport {
    let q_hat = ones as f64 / runs as f64;
    let p_hat = q_hat / eps.epsilon();
    DecisionReport {
        q_hat,
        p_hat,
        decision: decide(p_hat),
        runs,
        seed,
        epsilon: eps.epsilon(),
        q_exact,
        mode,
        canonical_gate_set,
    }
}

/// Dilutes `c`, estimates `q` from `runs` repetitions, and decides the promise side.
pub fn decision_experiment(
    c: &Circuit,
    eps: &EpsilonParams,
    runs: u64,
    seed: u64,
    caps: &Caps,
    mode: SamplingMode,
) -> Result<DecisionReport> {
    if runs == 0 {
        return Err(Error::InvalidInput("number of runs must be positive".into()));
    }
    let d = dilute(c, *eps)?;
    caps.check_statevector("diluted circuit", d.transformed().num_qubits())?;
    let q = output_probability(&d)?;
    let mut ones = 0;
    for (block, len) in run_blocks(runs) {
        ones += match mode {
            SamplingMode::ExactDistribution => count_ones_block(q, seed, block, len),
            SamplingMode::Reexecute => count_reexecuted(&d, seed, block, len)?,
        };
    }
    Ok(report_from_count(ones, runs, seed, eps, q, mode, validate_universal_set(c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetaTrialSummary {
    pub trials: u64,
    pub correct: u64,
    pub inconclusive: u64,
    pub wrong: u64,
}

/// One meta-trial: the decision for trial `index` of a seeded series, drawn from output
/// probability `q`.
pub fn meta_trial(q: f64, eps: &EpsilonParams, runs: u64, seed: u64, index: u64) -> Decision {
    let trial_seed = child_seed(seed, index);
    let ones: u64 = run_blocks(runs)
        .map(|(block, len)| count_ones_block(q, trial_seed, block, len))
        .sum();
    decide(ones as f64 / runs as f64 / eps.epsilon())
}

/// Repeats the decision `trials` times with independent seeds and tallies against `expected`.
pub fn meta_trials(
    c: &Circuit,
    eps: &EpsilonParams,
    runs: u64,
    seed: u64,
    trials: u64,
    expected: Decision,
    caps: &Caps,
) -> Result<MetaTrialSummary> {
    if runs == 0 {
        return Err(Error::InvalidInput("number of runs must be positive".into()));
    }
    let d = dilute(c, *eps)?;
    caps.check_statevector("diluted circuit", d.transformed().num_qubits())?;
    let q = output_probability(&d)?;
    let mut summary = MetaTrialSummary {
        trials,
        correct: 0,
        inconclusive: 0,
        wrong: 0,
    };
    for t in 0..trials {
        match meta_trial(q, eps, runs, seed, t) {
            Decision::Inconclusive => summary.inconclusive += 1,
            d if d == expected => summary.correct += 1,
            _ => summary.wrong += 1,
        }
    }
    Ok(summary)
}
