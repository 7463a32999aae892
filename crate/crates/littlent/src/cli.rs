//! Subcommands: `dilute`, `decide`, `trace`, `verify`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use littlent_core::circuit::parse_circuit_bytes;
use littlent_core::dilution::{dilute, EpsilonParams};
use littlent_core::experiments::{required_runs, SamplingMode, TraceContext, TraceMeasure};
use littlent_core::measures::GeometricOptions;
use littlent_core::{serialize_circuit, Circuit};

use crate::config::{Format, Overrides, RunConfig, CAP_ENV};
use crate::error::{exit, CliError, CliResult};
use crate::parallel::{decision_experiment_par, entanglement_trace_par, with_threads};
use crate::report::{self, TraceReport, INTEGRATED_NOTE};
use crate::verify::{run_verify, Suite, SuiteSizes, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "littlent", version, about = "Run circuits near |0...0>, measure entanglement, check continuity bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Any of them may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with default values for these flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Ancilla weight ε in (0, 1].
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Allowed failure probability of the decision procedure.
    #[arg(long, global = true)]
    pub fail_prob: Option<f64>,
    /// Number of repetitions, overriding the Hoeffding count.
    #[arg(long, global = true)]
    pub runs: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `all-contiguous` or `;`-separated side-A qubit lists, e.g. `0;0,1`.
    #[arg(long, global = true)]
    pub bipartitions: Option<String>,
    /// Comma-separated measures: entropy, renyi:<alpha>, schmidt, geometric, concurrence, n_tangle, squashed.
    #[arg(long, global = true)]
    pub measures: Option<String>,
    /// json or csv.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            epsilon: self.epsilon,
            fail_prob: self.fail_prob,
            runs: self.runs,
            seed: self.seed,
            bipartitions: self.bipartitions.clone(),
            measures: self.measures.clone(),
            format: self.format.clone(),
            out: self.out.clone(),
            threads: self.threads,
        }
    }

    pub fn resolve(&self, cap_env: Option<String>) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(p) => Overrides::from_file(p)?,
            None => Overrides::default(),
        };
        RunConfig::resolve(self.overrides().over(file), cap_env)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the diluted circuit: an RY(2 asin √ε) ancilla controlling every gate.
    Dilute {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide p ≥ 2/3 versus p ≤ 1/3 from samples of the diluted circuit.
    Decide {
        input: PathBuf,
        /// Re-simulate the circuit for every repetition instead of sampling its exact distribution.
        #[arg(long)]
        reexecute: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Entanglement measures and bounds after every gate (diluted first when --epsilon is given).
    Trace {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the bound-checking suites.
    Verify {
        /// Suites to run (repeatable or comma-separated); default all.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Add a deliberately false Fannes fixture; the run must then fail.
        #[arg(long)]
        inject_violation: bool,
        /// Half-system size of the counterexample state.
        #[arg(long)]
        m: Option<usize>,
        /// Renyi order of the counterexample.
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

pub fn load_circuit(path: &Path) -> CliResult<Circuit> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    parse_circuit_bytes(&bytes).map_err(|diagnostics| CliError::Parse {
        path: path.to_path_buf(),
        diagnostics,
    })
}

/// Runs a parsed command line. `Ok` carries the exit code (0, or 1 for a failed check).
pub fn run(cli: Cli) -> CliResult<i32> {
    run_with_env(cli, std::env::var(CAP_ENV).ok())
}

pub fn run_with_env(cli: Cli, cap_env: Option<String>) -> CliResult<i32> {
    let common = match &cli.command {
        Command::Dilute { common, .. }
        | Command::Decide { common, .. }
        | Command::Trace { common, .. }
        | Command::Verify { common, .. } => common,
    };
    let cfg = common.resolve(cap_env)?;
    with_threads(cfg.threads, || match &cli.command {
        Command::Dilute { input, .. } => cmd_dilute(input, &cfg),
        Command::Decide { input, reexecute, .. } => cmd_decide(input, *reexecute, &cfg),
        Command::Trace { input, .. } => cmd_trace(input, &cfg),
        Command::Verify {
            suite,
            inject_violation,
            m,
            alpha,
            ..
        } => cmd_verify(suite, *inject_violation, *m, *alpha, &cfg),
    })?
}

fn cmd_dilute(input: &Path, cfg: &RunConfig) -> CliResult<i32> {
    let c = load_circuit(input)?;
    let eps = EpsilonParams::new(cfg.require_epsilon()?)?;
    let d = dilute(&c, eps)?;
    let t = d.transformed();
    let text = serialize_circuit(t);
    let summary = format!(
        "diluted {}: {} gates on {} qubits, theta = {}",
        input.display(),
        t.len(),
        t.num_qubits(),
        eps.theta()
    );
    report::emit(&text, cfg.out.as_deref())?;
    if cfg.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(exit::SUCCESS)
}

fn cmd_decide(input: &Path, reexecute: bool, cfg: &RunConfig) -> CliResult<i32> {
    let c = load_circuit(input)?;
    let eps = EpsilonParams::new(cfg.require_epsilon()?)?;
    let seed = cfg.require_seed()?;
    let runs = match cfg.runs {
        Some(r) => r,
        None => required_runs(eps.epsilon(), cfg.fail_prob)?,
    };
    let mode = if reexecute {
        SamplingMode::Reexecute
    } else {
        SamplingMode::ExactDistribution
    };
    let r = decision_experiment_par(&c, &eps, runs, seed, &cfg.caps, mode)?;
    let text = match cfg.format {
        Format::Json => report::to_json("decide", &r)?,
        Format::Csv => report::decision_csv(&r)?,
    };
    report::emit(&text, cfg.out.as_deref())?;
    Ok(exit::SUCCESS)
}

fn cmd_trace(input: &Path, cfg: &RunConfig) -> CliResult<i32> {
    let base = load_circuit(input)?;
    let (circuit, radius) = match cfg.epsilon {
        Some(e) => {
            let eps = EpsilonParams::new(e)?;
            (dilute(&base, eps)?.transformed().clone(), Some(eps.epsilon_bar()))
        }
        None => (base, None),
    };
    let n = circuit.num_qubits();
    let mut geometric = GeometricOptions::default();
    if cfg.measures.contains(&TraceMeasure::Geometric) {
        geometric.seed = cfg.require_seed()?;
    }
    let ctx = TraceContext {
        bipartitions: cfg.bipartitions.resolve(n)?,
        measures: cfg.measures.clone(),
        radius,
        partition: None,
        geometric,
        caps: cfg.caps,
    };
    let steps = entanglement_trace_par(&circuit, &ctx)?;
    let all_pass = steps.iter().all(|s| s.all_pass());
    let text = match cfg.format {
        Format::Json => report::to_json(
            "trace",
            &TraceReport {
                circuit: Some(input.display().to_string()),
                num_qubits: n,
                epsilon: cfg.epsilon,
                radius,
                integrated_entanglement: littlent_core::experiments::integrated_entanglement(&steps),
                integrated_entanglement_note: INTEGRATED_NOTE,
                all_pass,
                steps,
            },
        )?,
        Format::Csv => report::trace_csv(&steps)?,
    };
    report::emit(&text, cfg.out.as_deref())?;
    Ok(if all_pass {
        exit::SUCCESS
    } else {
        exit::VERIFICATION_FAILED
    })
}

fn cmd_verify(
    suites: &[String],
    inject_violation: bool,
    m: Option<usize>,
    alpha: Option<f64>,
    cfg: &RunConfig,
) -> CliResult<i32> {
    let seed = cfg.require_seed()?;
    let suites = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| s.parse()).collect::<CliResult<Vec<Suite>>>()?
    };
    let mut sizes = SuiteSizes::default();
    if let Some(m) = m {
        sizes.counterexample_m = m;
    }
    if let Some(a) = alpha {
        sizes.counterexample_alpha = a;
    }
    let r = run_verify(&VerifyOptions {
        seed,
        suites,
        sizes,
        inject_violation,
        caps: cfg.caps,
    });
    let text = match cfg.format {
        Format::Json => report::to_json("verify", &r)?,
        Format::Csv => report::verify_csv(&r)?,
    };
    report::emit(&text, cfg.out.as_deref())?;
    if !r.all_pass {
        for s in r.suites.iter().filter(|s| !s.all_pass()) {
            eprintln!(
                "suite {}: {} failed check(s), {} error(s)",
                s.name,
                s.failed,
                s.errors.len()
            );
        }
        return Ok(exit::VERIFICATION_FAILED);
    }
    Ok(exit::SUCCESS)
}

/// Prints an error to stderr (diagnostics one per line) and returns its exit code.
pub fn report_error(e: &CliError) -> i32 {
    match e {
        CliError::Parse { path, diagnostics } => {
            for d in diagnostics {
                eprintln!("{}:{d}", path.display());
            }
        }
        other => eprintln!("error: {other}"),
    }
    e.exit_code()
}
