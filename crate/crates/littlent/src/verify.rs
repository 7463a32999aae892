//! Property suites for the proved inequalities. Every failing instance is kept with enough
//! information to regenerate it.

use std::fmt;
use std::str::FromStr;

use littlent_core::bounds::{
    concurrence_bound, entropy_bound, fannes_bound, fannes_check, geometric_bound, poly_continuity_check,
    squashed_bound, tensor_trace_distance, witness_norm_check, BoundCheck, PolynomialForm, FANNES_LIMIT,
};
use littlent_core::dilution::{dilute, step_states, EpsilonParams};
use littlent_core::experiments::{
    counterexample_report, haar_state, random_density_pair, random_universal_circuit, sample_s_epsilon_indexed,
    CounterexampleReport, CounterexampleSpec,
};
use littlent_core::measures::{
    concurrence, concurrence_doubled_space, entanglement_entropy, geometric_measure, localizable_upper_bound,
    relative_entropy_ub, renyi_entanglement, squashed_entanglement_pure,
    GeometricOptions, Witness,
};
use littlent_core::rng::{child_seed, substream};
use littlent_core::{Bipartition, Caps, DensityOperator, Error, Partition, StateVector, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Dilution,
    Fannes,
    Entropy,
    Tensor,
    Poly,
    Witness,
    Obs3,
    Concurrence,
    Counterexample,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Dilution,
        Suite::Fannes,
        Suite::Entropy,
        Suite::Tensor,
        Suite::Poly,
        Suite::Witness,
        Suite::Obs3,
        Suite::Concurrence,
        Suite::Counterexample,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Dilution => "dilution",
            Suite::Fannes => "fannes",
            Suite::Entropy => "entropy",
            Suite::Tensor => "tensor",
            Suite::Poly => "poly",
            Suite::Witness => "witness",
            Suite::Obs3 => "obs3",
            Suite::Concurrence => "concurrence",
            Suite::Counterexample => "counterexample",
        }
    }

    /// Stable index used to derive the suite's seed.
    fn index(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(Suite::name).collect();
                CliError::Input(format!("unknown suite '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

/// Instance counts and parameters. The defaults are the sizes the suites are specified at.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSizes {
    pub dilution_circuits: u64,
    pub dilution_qubits: usize,
    pub dilution_depth: usize,
    pub dilution_epsilons: Vec<f64>,
    pub fannes_pairs: u64,
    /// Density pairs use `1..=fannes_max_qubits` qubits (`d ≤ 2^max`).
    pub fannes_max_qubits: usize,
    pub tensor_pairs: u64,
    pub tensor_powers: Vec<u32>,
    pub poly_pairs: u64,
    pub s_eps_samples: u64,
    pub s_eps_qubits: usize,
    pub s_eps_radius: f64,
    pub renyi_orders: Vec<f64>,
    pub relative_samples: u64,
    pub relative_qubits: usize,
    pub witness_samples: u64,
    pub concurrence_states: u64,
    pub concurrence_qubits: Vec<usize>,
    pub counterexample_m: usize,
    pub counterexample_alpha: f64,
    /// Random restarts of the product-overlap search in the geometric check.
    pub geometric_restarts: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            dilution_circuits: 20,
            dilution_qubits: 6,
            dilution_depth: 40,
            dilution_epsilons: vec![0.5, 0.1, 0.01],
            fannes_pairs: 1000,
            fannes_max_qubits: 5,
            tensor_pairs: 500,
            tensor_powers: vec![2, 5, 20],
            poly_pairs: 500,
            s_eps_samples: 100,
            s_eps_qubits: 10,
            s_eps_radius: 0.01,
            renyi_orders: vec![1.0, 1.5, 2.0],
            relative_samples: 50,
            relative_qubits: 6,
            witness_samples: 200,
            concurrence_states: 100,
            concurrence_qubits: vec![2, 3, 4],
            counterexample_m: 10,
            counterexample_alpha: 0.5,
            geometric_restarts: 4,
        }
    }
}

/// Exact identities are checked to this tolerance.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub sizes: SuiteSizes,
    /// Adds a deliberately false Fannes fixture (harness self-test).
    pub inject_violation: bool,
    pub caps: Caps,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub instance: u64,
    pub check: BoundCheck,
    pub reproduce: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceError {
    pub instance: u64,
    pub error: String,
    pub reproduce: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub instances: u64,
    pub checks: u64,
    pub passed: u64,
    pub failed: u64,
    /// Smallest `rhs − lhs` over all checks.
    pub worst_slack: Option<f64>,
    pub failures: Vec<Failure>,
    pub errors: Vec<InstanceError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.errors.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub all_pass: bool,
}

/// `|lhs| ≤ tol` with no extra slack, for exact identities.
pub fn identity_check(deviation: f64, tol: f64, context: impl Into<String>) -> BoundCheck {
    BoundCheck {
        lhs: deviation,
        rhs: tol,
        slack: tol - deviation,
        pass: deviation <= tol,
        context: context.into(),
    }
}

type Checks = Result<Vec<BoundCheck>, Error>;

struct Builder {
    name: &'static str,
    seed: u64,
    report: SuiteReport,
}

impl Builder {
    fn new(suite: Suite, root: u64) -> Self {
        let seed = child_seed(root, suite.index());
        Self {
            name: suite.name(),
            seed,
            report: SuiteReport {
                name: suite.name().into(),
                seed,
                instances: 0,
                checks: 0,
                passed: 0,
                failed: 0,
                worst_slack: None,
                failures: Vec::new(),
                errors: Vec::new(),
                details: None,
            },
        }
    }

    fn reproduce(&self, root: u64, instance: u64) -> String {
        format!("littlent verify --seed {root} --suite {} (instance {instance}, suite seed {})", self.name, self.seed)
    }

    fn push(&mut self, root: u64, instance: u64, checks: Checks) {
        self.report.instances += 1;
        match checks {
            Ok(checks) => {
                for c in checks {
                    self.report.checks += 1;
                    self.report.worst_slack = Some(self.report.worst_slack.map_or(c.slack, |w| w.min(c.slack)));
                    if c.pass {
                        self.report.passed += 1;
                    } else {
                        self.report.failed += 1;
                        let reproduce = self.reproduce(root, instance);
                        self.report.failures.push(Failure {
                            instance,
                            check: c,
                            reproduce,
                        });
                    }
                }
            }
            Err(e) => {
                let reproduce = self.reproduce(root, instance);
                self.report.errors.push(InstanceError {
                    instance,
                    error: e.to_string(),
                    reproduce,
                });
            }
        }
    }

    /// Runs `f` on every instance index in parallel and records the results in index order.
    fn run(mut self, root: u64, count: u64, f: impl Fn(u64, u64) -> Checks + Sync) -> Self {
        let seed = self.seed;
        let results: Vec<Checks> = (0..count).into_par_iter().map(|i| f(seed, i)).collect();
        for (i, r) in results.into_iter().enumerate() {
            self.push(root, i as u64, r);
        }
        self
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let suites: Vec<SuiteReport> = opts.suites.iter().map(|s| run_suite(*s, opts)).collect();
    let all_pass = suites.iter().all(SuiteReport::all_pass);
    VerifyReport {
        seed: opts.seed,
        suites,
        all_pass,
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let root = opts.seed;
    let z = &opts.sizes;
    let caps = opts.caps;
    let b = Builder::new(suite, root);
    match suite {
        Suite::Dilution => b.run(root, z.dilution_circuits, |s, i| dilution_instance(s, i, z, &caps)).finish(),
        Suite::Fannes => {
            let mut b = b.run(root, z.fannes_pairs, |s, i| {
                let n = 1 + (i as usize) % z.fannes_max_qubits;
                let (rho, sigma) = random_density_pair(n, FANNES_LIMIT, &mut substream(s, i))?;
                Ok(vec![fannes_check(&rho, &sigma)?])
            });
            if opts.inject_violation {
                b.push(root, z.fannes_pairs, injected_fannes_violation());
            }
            b.finish()
        }
        Suite::Entropy => b
            .run(root, z.s_eps_samples, |_, i| {
                let psi = s_eps_sample(root, i, z, &caps)?;
                Bipartition::all_contiguous(psi.num_qubits())
                    .iter()
                    .map(|split| {
                        let e = entanglement_entropy(&psi, split)?.value;
                        Ok(BoundCheck::new(e, entropy_bound(z.s_eps_radius, split.size_a())?, format!("entropy [{}]", split.label())))
                    })
                    .collect()
            })
            .finish(),
        Suite::Obs3 => {
            let mut b = b.run(root, z.s_eps_samples, |s, i| obs3_instance(root, s, i, z, &caps));
            // Relative entropy needs the exact eigendecomposition, so it runs on smaller registers.
            let rel: Vec<Checks> = (0..z.relative_samples)
                .into_par_iter()
                .map(|i| {
                    let psi = sample_s_epsilon_indexed(z.relative_qubits, z.s_eps_radius, child_seed(b.seed, 1), i, &caps)?;
                    let r = relative_entropy_ub(&psi, z.s_eps_radius)?;
                    let exact = r
                        .exact
                        .ok_or_else(|| Error::Precondition("exact relative entropy unavailable".into()))?;
                    Ok(vec![BoundCheck::new(exact, r.bound.value, "relative entropy (exact vs bound)")])
                })
                .collect();
            for (i, r) in rel.into_iter().enumerate() {
                b.push(root, z.s_eps_samples + i as u64, r);
            }
            b.finish()
        }
        Suite::Tensor => b
            .run(root, z.tensor_pairs, |s, i| {
                let n = 1 + (i as usize) % 4;
                let (psi, phi) = state_pair(n, s, i)?;
                z.tensor_powers
                    .iter()
                    .map(|&k| Ok(tensor_trace_distance(&psi, &phi, k)?.1))
                    .collect()
            })
            .finish(),
        Suite::Poly => {
            let f = PolynomialForm::symmetric_projector_product();
            let g = PolynomialForm::y_tensor_power();
            let mut b = b.run(root, z.poly_pairs, |s, i| {
                let n = 2 + (i as usize) % 3;
                let (psi, phi) = state_pair(n, s, i)?;
                Ok(vec![poly_continuity_check(&f, &psi, &phi)?, poly_continuity_check(&g, &psi, &phi)?])
            });
            // The symbolic forms against their dense operators.
            let self_test = (|| {
                let mut rng = substream(b.seed, u64::MAX);
                let states = (0..4).map(|_| haar_state(2, &mut rng)).collect::<Result<Vec<_>, _>>()?;
                f.self_test(&states)?;
                g.self_test(&states)?;
                Ok(Vec::new())
            })();
            b.push(root, z.poly_pairs, self_test);
            b.finish()
        }
        Suite::Witness => b
            .run(root, z.witness_samples, |s, i| {
                let n = 4;
                let eps = [0.01, 0.05, 0.1, 0.3][(i % 4) as usize];
                let psi = sample_s_epsilon_indexed(n, eps, s, i, &caps)?;
                let mut checks = Vec::new();
                for (a, c) in [(0, 1), (1, 3), (2, 0)] {
                    let w = Witness::bell(a, c)?;
                    checks.push(witness_norm_check(&w, &psi, eps)?);
                }
                if i == 0 {
                    let worst = Witness::bell(0, 1)?.product_spot_check(256, s)?;
                    checks.push(BoundCheck::new(-worst, 0.0, "witness nonnegative on product states"));
                }
                Ok(checks)
            })
            .finish(),
        Suite::Concurrence => {
            let per = z.concurrence_states;
            let qubits = z.concurrence_qubits.clone();
            b.run(root, per * qubits.len() as u64, |s, i| {
                let n = qubits[(i / per) as usize];
                let psi = haar_state(n, &mut substream(s, i))?;
                let a = concurrence_doubled_space(&psi)?;
                let b = concurrence(&psi)?.value;
                Ok(vec![identity_check((a - b).abs(), IDENTITY_TOL, format!("concurrence doubled vs purity n={n}"))])
            })
            .finish()
        }
        Suite::Counterexample => {
            let mut details = None;
            let spec = CounterexampleSpec::new(z.counterexample_m, z.counterexample_alpha);
            let checks = spec.and_then(|spec| counterexample_report(&spec, &caps)).map(|r| {
                let checks = counterexample_checks(&r);
                details = serde_json::to_value(&r).ok();
                checks
            });
            let mut b = b;
            b.push(root, 0, checks);
            let mut r = b.finish();
            r.details = details;
            r
        }
    }
}

fn dilution_instance(seed: u64, i: u64, z: &SuiteSizes, caps: &Caps) -> Checks {
    let c = random_universal_circuit(z.dilution_qubits, z.dilution_depth, &mut substream(seed, i))?;
    let base = c.run()?;
    let mut checks = Vec::new();
    for &e in &z.dilution_epsilons {
        let eps = EpsilonParams::new(e)?;
        let d = dilute(&c, eps)?;
        let steps = step_states(&d, caps)?;
        let last = steps.last().expect("at least the ancilla rotation");
        for j in 0..c.num_qubits() {
            let dev = (last.probability_one(j)? - e * base.probability_one(j)?).abs();
            checks.push(identity_check(dev, IDENTITY_TOL, format!("q = eps p, eps={e}, qubit {j}")));
        }
        for (t, s) in steps.iter().enumerate() {
            let dev = (s.distance_to_zero() - eps.epsilon_bar()).abs();
            checks.push(identity_check(dev, IDENTITY_TOL, format!("step {} distance = sqrt(eps), eps={e}", t + 1)));
        }
    }
    Ok(checks)
}

/// The sampled `S_ε` states shared by the entropy and obs3 suites.
fn s_eps_sample(root: u64, i: u64, z: &SuiteSizes, caps: &Caps) -> Result<StateVector, Error> {
    sample_s_epsilon_indexed(z.s_eps_qubits, z.s_eps_radius, child_seed(root, 1000), i, caps)
}

fn obs3_instance(root: u64, seed: u64, i: u64, z: &SuiteSizes, caps: &Caps) -> Checks {
    let eps = z.s_eps_radius;
    let psi = s_eps_sample(root, i, z, caps)?;
    let n = psi.num_qubits();
    let mut checks = Vec::new();
    for split in Bipartition::all_contiguous(n) {
        let rhs = entropy_bound(eps, split.size_a())?;
        for &a in &z.renyi_orders {
            let v = renyi_entanglement(&psi, &split, a)?.value;
            checks.push(BoundCheck::new(v, rhs, format!("renyi:{a} [{}]", split.label())));
        }
    }
    let geo = GeometricOptions {
        restarts: z.geometric_restarts,
        seed: child_seed(seed, i),
        ..Default::default()
    };
    checks.push(BoundCheck::new(geometric_measure(&psi, &geo)?.value, geometric_bound(eps)?, "geometric"));
    let parts = Partition::singletons(n);
    let sizes: Vec<usize> = parts.parts().iter().map(Vec::len).collect();
    checks.push(BoundCheck::new(
        squashed_entanglement_pure(&psi, &parts)?.value,
        squashed_bound(eps, &sizes)?,
        "squashed (single-qubit parts)",
    ));
    checks.push(BoundCheck::new(concurrence(&psi)?.value, concurrence_bound(eps)?, "concurrence"));
    for (a, b) in [(0, 1), (n / 2, n - 1)] {
        checks.push(witness_norm_check(&Witness::bell(a, b)?, &psi, eps)?);
    }
    let le_bound = entropy_bound(eps, 1)?;
    for (a, b) in [(0, n - 1), (1, 2)] {
        checks.push(BoundCheck::new(
            localizable_upper_bound(&psi, a, b)?,
            le_bound,
            format!("localizable upper bound ({a},{b})"),
        ));
    }
    Ok(checks)
}

/// Haar pairs on even instances; nearby pairs `ψ, ψ + t·χ` (normalized) on odd ones.
fn state_pair(n: usize, seed: u64, i: u64) -> Result<(StateVector, StateVector), Error> {
    let mut rng = substream(seed, i);
    let psi = haar_state(n, &mut rng)?;
    let chi = haar_state(n, &mut rng)?;
    if i.is_multiple_of(2) {
        return Ok((psi, chi));
    }
    let t = [1e-1, 1e-2, 1e-3, 1e-5][((i / 2) % 4) as usize];
    let amps: Vec<C64> = psi
        .amplitudes()
        .iter()
        .zip(chi.amplitudes())
        .map(|(a, b)| a + b * t)
        .collect();
    Ok((psi, StateVector::normalized(amps)?))
}

/// `|S(|0⟩⟨0|) − S(I/2)| = 1` checked against the bound at an understated distance.
fn injected_fannes_violation() -> Checks {
    let pure = DensityOperator::from_pure(&StateVector::zero(1)?)?;
    let mixed = DensityOperator::maximally_mixed(1)?;
    let lhs = (pure.von_neumann_entropy() - mixed.von_neumann_entropy()).abs();
    let understated_t = 0.01;
    Ok(vec![BoundCheck::new(
        lhs,
        fannes_bound(understated_t, 2)?,
        format!("injected violation fixture: fannes d=2 with T understated as {understated_t}"),
    )])
}

fn counterexample_checks(r: &CounterexampleReport) -> Vec<BoundCheck> {
    let mut checks = vec![
        identity_check((r.renyi_half - r.renyi_half_closed_form).abs(), 1e-9, "S_1/2 vs closed form"),
        identity_check((r.von_neumann - r.von_neumann_closed_form).abs(), 1e-9, "S_1 vs closed form"),
        identity_check((r.distance - r.distance_closed_form).abs(), 1e-12, "distance vs sqrt(eps)"),
    ];
    // The tenfold separation is a property of this instance, not of every (m, α).
    if r.spec.m == 10 && r.spec.alpha == 0.5 {
        checks.push(BoundCheck::new(10.0 * r.von_neumann, r.renyi_half, "10 S_1 <= S_1/2 at m=10"));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteSizes {
        SuiteSizes {
            dilution_circuits: 2,
            fannes_pairs: 10,
            tensor_pairs: 8,
            poly_pairs: 8,
            s_eps_samples: 2,
            s_eps_qubits: 6,
            relative_samples: 2,
            relative_qubits: 4,
            witness_samples: 4,
            concurrence_states: 3,
            counterexample_m: 4,
            ..Default::default()
        }
    }

    #[test]
    fn small_suites_pass_and_are_reproducible() {
        let opts = VerifyOptions {
            seed: 1,
            suites: Suite::ALL.to_vec(),
            sizes: small(),
            inject_violation: false,
            caps: Caps::default(),
        };
        let r = run_verify(&opts);
        for s in &r.suites {
            assert!(s.all_pass(), "{}: {:?} {:?}", s.name, s.failures, s.errors);
        }
        let again = run_verify(&opts);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn injected_violation_fails() {
        let opts = VerifyOptions {
            seed: 1,
            suites: vec![Suite::Fannes],
            sizes: small(),
            inject_violation: true,
            caps: Caps::default(),
        };
        let r = run_verify(&opts);
        assert!(!r.all_pass);
        assert_eq!(r.suites[0].failed, 1);
        assert!(r.suites[0].failures[0].check.context.contains("injected"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
