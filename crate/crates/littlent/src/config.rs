//! Run configuration: command-line flags over an optional TOML file over defaults.

use std::path::{Path, PathBuf};

use littlent_core::experiments::TraceMeasure;
use littlent_core::{Bipartition, Caps};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Environment variable overriding the statevector cap (in qubits).
pub const CAP_ENV: &str = "LITTLENT_CAP_QUBITS";

pub const DEFAULT_FAIL_PROB: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(CliError::Input(format!("unknown format '{s}' (expected json or csv)"))),
        }
    }
}

/// Which cuts a trace evaluates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BipartitionSelector {
    #[default]
    AllContiguous,
    /// Side-A qubit lists.
    Explicit(Vec<Vec<usize>>),
}

impl BipartitionSelector {
    /// `all-contiguous`, or `;`-separated side-A lists such as `0;0,1;1,3`.
    pub fn parse(s: &str) -> CliResult<Self> {
        let s = s.trim();
        if s == "all-contiguous" {
            return Ok(Self::AllContiguous);
        }
        let lists = s
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(|q| {
                        q.trim()
                            .parse::<usize>()
                            .map_err(|_| CliError::Input(format!("bad qubit index '{q}' in bipartition '{part}'")))
                    })
                    .collect::<CliResult<Vec<usize>>>()
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Self::Explicit(lists))
    }

    pub fn resolve(&self, n: usize) -> CliResult<Vec<Bipartition>> {
        match self {
            Self::AllContiguous => Ok(Bipartition::all_contiguous(n)),
            Self::Explicit(lists) => lists
                .iter()
                .map(|a| Bipartition::new(n, a.iter().copied()).map_err(CliError::from))
                .collect(),
        }
    }
}

pub fn parse_measures(s: &str) -> CliResult<Vec<TraceMeasure>> {
    s.split(',')
        .filter(|m| !m.trim().is_empty())
        .map(|m| m.parse::<TraceMeasure>().map_err(CliError::from))
        .collect()
}

/// Values that may come from flags or from the config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Overrides {
    pub epsilon: Option<f64>,
    pub fail_prob: Option<f64>,
    pub runs: Option<u64>,
    pub seed: Option<u64>,
    pub bipartitions: Option<String>,
    pub measures: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Overrides {
    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            epsilon: self.epsilon.or(base.epsilon),
            fail_prob: self.fail_prob.or(base.fail_prob),
            runs: self.runs.or(base.runs),
            seed: self.seed.or(base.seed),
            bipartitions: self.bipartitions.or(base.bipartitions),
            measures: self.measures.or(base.measures),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            threads: self.threads.or(base.threads),
        }
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub epsilon: Option<f64>,
    pub fail_prob: f64,
    pub runs: Option<u64>,
    pub seed: Option<u64>,
    pub bipartitions: BipartitionSelector,
    pub measures: Vec<TraceMeasure>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub caps: Caps,
}

impl RunConfig {
    pub fn resolve(o: Overrides, cap_env: Option<String>) -> CliResult<Self> {
        if let Some(e) = o.epsilon {
            if !(e > 0.0 && e <= 1.0) {
                return Err(CliError::Input(format!("--epsilon must lie in (0, 1], got {e}")));
            }
        }
        let fail_prob = o.fail_prob.unwrap_or(DEFAULT_FAIL_PROB);
        if !(fail_prob > 0.0 && fail_prob < 1.0) {
            return Err(CliError::Input(format!("--fail-prob must lie in (0, 1), got {fail_prob}")));
        }
        if o.threads == Some(0) {
            return Err(CliError::Input("--threads must be positive".into()));
        }
        let mut caps = Caps::default();
        if let Some(v) = cap_env {
            caps.statevector_qubits = v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{CAP_ENV} must be a qubit count, got '{v}'")))?;
        }
        Ok(Self {
            epsilon: o.epsilon,
            fail_prob,
            runs: o.runs,
            seed: o.seed,
            bipartitions: o
                .bipartitions
                .as_deref()
                .map(BipartitionSelector::parse)
                .transpose()?
                .unwrap_or_default(),
            measures: match o.measures.as_deref() {
                Some(m) => parse_measures(m)?,
                None => vec![TraceMeasure::Entropy],
            },
            format: o.format.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
            out: o.out,
            threads: o.threads,
            caps,
        })
    }

    pub fn require_epsilon(&self) -> CliResult<f64> {
        self.epsilon.ok_or_else(|| CliError::Input("--epsilon is required".into()))
    }

    pub fn require_seed(&self) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Input("--seed is required for commands that sample".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: Overrides = toml::from_str("epsilon = 0.5\nseed = 3\nmeasures = \"entropy,renyi:2\"\n").unwrap();
        let flags = Overrides {
            epsilon: Some(0.1),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(flags.over(file), None).unwrap();
        assert_eq!(cfg.epsilon, Some(0.1));
        assert_eq!(cfg.seed, Some(3));
        assert_eq!(cfg.measures, vec![TraceMeasure::Entropy, TraceMeasure::Renyi(2.0)]);
    }

    #[test]
    fn selectors_and_caps() {
        assert_eq!(BipartitionSelector::parse("all-contiguous").unwrap(), BipartitionSelector::AllContiguous);
        let sel = BipartitionSelector::parse("0;1,2").unwrap();
        let cuts = sel.resolve(4).unwrap();
        assert_eq!(cuts[1].part_a(), &[1, 2]);
        assert!(BipartitionSelector::parse("0;x").is_err());
        let cfg = RunConfig::resolve(Overrides::default(), Some("8".into())).unwrap();
        assert_eq!(cfg.caps.statevector_qubits, 8);
        assert!(RunConfig::resolve(Overrides::default(), Some("many".into())).is_err());
        assert!(toml::from_str::<Overrides>("bogus = 1").is_err());
    }
}
