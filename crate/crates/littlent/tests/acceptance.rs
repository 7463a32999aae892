//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.
// `ensure!` negates its condition so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use littlent::parallel::meta_trials_par;
use littlent::verify::{run_suite, Suite, SuiteReport, SuiteSizes, VerifyOptions};
use littlent_core::circuit::parse_circuit_bytes;
use littlent_core::dilution::{dilute, EpsilonParams};
use littlent_core::experiments::{
    counterexample_report, haar_state, meta_trials, random_universal_circuit, required_runs, sample_s_epsilon_indexed,
    CounterexampleSpec, Decision,
};
use littlent_core::measures::{
    concurrence, concurrence_doubled_space, entanglement_entropy, localizable_entanglement, protocol_average,
    LocalizableOptions, MeasurementBasis,
};
use littlent_core::rng::substream;
use littlent_core::{parse_circuit, reduced_density, serialize_circuit, Bipartition, Caps, StateVector, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn corpus(kind: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(kind)
}

fn corpus_files(kind: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus(kind))
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "circ"))
        .collect();
    files.sort();
    files
}

fn suite(s: Suite, seed: u64) -> SuiteReport {
    run_suite(
        s,
        &VerifyOptions {
            seed,
            suites: vec![s],
            sizes: SuiteSizes::default(),
            inject_violation: false,
            caps: Caps::default(),
        },
    )
}

fn suite_clean(r: &SuiteReport) -> Result<(), String> {
    ensure!(
        r.all_pass(),
        "suite {}: {} failed, {} errors; first: {:?} {:?}",
        r.name,
        r.failed,
        r.errors.len(),
        r.failures.first(),
        r.errors.first()
    );
    Ok(())
}

/// Dilution identity on the full output distribution and the per-step distance.
fn criterion_1() -> Outcome {
    let m = 6;
    let mut worst_q = 0.0f64;
    let mut worst_t = 0.0f64;
    for i in 0..20 {
        let c = random_universal_circuit(m, 40, &mut substream(11, i)).map_err(|e| e.to_string())?;
        let p = c.run().map_err(|e| e.to_string())?;
        for e in [0.5, 0.1, 0.01] {
            let eps = EpsilonParams::new(e).unwrap();
            let d = dilute(&c, eps).map_err(|e| e.to_string())?;
            ensure!(d.ancilla() == m, "ancilla should be the last qubit");
            let steps = d.transformed().run_steps().map_err(|e| e.to_string())?;
            let out = steps.last().unwrap();
            // The ancilla is the least significant bit of the amplitude index.
            for x in 0..1usize << m {
                let q1 = out.amplitudes()[(x << 1) | 1].norm_sqr();
                let q0 = out.amplitudes()[x << 1].norm_sqr();
                let expect0 = if x == 0 { 1.0 - e } else { 0.0 };
                worst_q = worst_q.max((q1 - e * p.amplitudes()[x].norm_sqr()).abs());
                worst_q = worst_q.max((q0 - expect0).abs());
            }
            for s in &steps[1..] {
                worst_t = worst_t.max((s.distance_to_zero() - e.sqrt()).abs());
            }
        }
    }
    ensure!(worst_q <= 1e-10, "max |q - eps p| = {worst_q:e}");
    ensure!(worst_t <= 1e-10, "max |T - sqrt(eps)| = {worst_t:e}");
    Ok(format!("max |q-εp| = {worst_q:.1e}, max |T-√ε| = {worst_t:.1e}"))
}

fn promise_circuit(p: f64) -> littlent_core::Circuit {
    let theta = 2.0 * p.sqrt().asin();
    parse_circuit(&format!("qubits 1\nry {theta} 0\n")).unwrap()
}

fn criterion_2() -> Outcome {
    let eps = EpsilonParams::new(0.1).unwrap();
    let runs = required_runs(0.1, 1e-3).map_err(|e| e.to_string())?;
    ensure!(runs == 13682, "required runs {runs}, expected 13682");
    let caps = Caps::default();
    let mut detail = Vec::new();
    for (p, expected) in [(0.9, Decision::AtLeastTwoThirds), (0.1, Decision::AtMostOneThird)] {
        let c = promise_circuit(p);
        let s = meta_trials_par(&c, &eps, runs, 2024, 200, expected, &caps).map_err(|e| e.to_string())?;
        let seq = meta_trials(&c, &eps, runs, 2024, 200, expected, &caps).map_err(|e| e.to_string())?;
        ensure!(s == seq, "parallel and sequential meta-trials differ: {s:?} vs {seq:?}");
        ensure!(s.correct >= 198, "p = {p}: only {} of 200 correct ({s:?})", s.correct);
        detail.push(format!("p={p}: {}/200", s.correct));
    }
    Ok(format!("N = {runs}; {}", detail.join(", ")))
}

fn criterion_3() -> Outcome {
    let (n, eps) = (10, 0.01);
    let caps = Caps::default();
    let mut checks = 0;
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let psi = sample_s_epsilon_indexed(n, eps, 3, i, &caps).map_err(|e| e.to_string())?;
        ensure!(psi.distance_to_zero() <= eps + 1e-12, "sample {i} outside the ball");
        for split in Bipartition::all_contiguous(n) {
            let e = entanglement_entropy(&psi, &split).map_err(|e| e.to_string())?.value;
            // Cross-check against the spectrum of the smaller reduced density operator.
            let small = if split.size_a() > n / 2 { split.swapped() } else { split.clone() };
            let direct = reduced_density(&psi, &small).map_err(|e| e.to_string())?.von_neumann_entropy();
            ensure!((e - direct).abs() < 1e-9, "entropy routes disagree: {e} vs {direct}");
            let a = split.size_a() as f64;
            let bound = 2.0 * eps * a - 2.0 * eps * (2.0 * eps).log2();
            worst = worst.min(bound - e);
            ensure!(bound - e >= -1e-9, "sample {i} [{}]: {e} > {bound}", split.label());
            checks += 1;
        }
    }
    ensure!(checks == 900, "expected 900 checks, ran {checks}");
    Ok(format!("{checks} checks, min slack {worst:.3e}"))
}

fn criterion_4() -> Outcome {
    let r = suite(Suite::Obs3, 1);
    suite_clean(&r)?;
    ensure!(r.instances == 150, "expected 100 S_eps samples + 50 relative-entropy samples, got {}", r.instances);
    let contexts: BTreeSet<String> = r.failures.iter().map(|f| f.check.context.clone()).collect();
    ensure!(contexts.is_empty(), "violations: {contexts:?}");
    Ok(format!("{} checks over {} instances, 0 violations", r.checks, r.instances))
}

fn criterion_5() -> Outcome {
    let spec = CounterexampleSpec::new(10, 0.5).map_err(|e| e.to_string())?;
    let eps = 2f64.powi(-5);
    ensure!((spec.epsilon - eps).abs() < 1e-15, "epsilon {} should be 2^-5", spec.epsilon);
    let r = counterexample_report(&spec, &Caps::default()).map_err(|e| e.to_string())?;
    let tail = 1023.0;
    let half = 2.0 * ((1.0 - eps).sqrt() + (eps * tail).sqrt()).log2();
    let s1 = -(1.0 - eps) * (1.0 - eps).log2() - eps * (eps / tail).log2();
    ensure!((r.renyi_half - half).abs() <= 1e-9, "S_1/2 = {} vs closed form {half}", r.renyi_half);
    ensure!((r.renyi_half - 5.4617).abs() < 1e-3, "S_1/2 = {} not ≈ 5.46", r.renyi_half);
    ensure!((r.von_neumann - s1).abs() <= 1e-9, "S_1 = {} vs {s1}", r.von_neumann);
    ensure!((r.von_neumann - 0.513).abs() < 1e-3, "S_1 = {} not ≈ 0.513", r.von_neumann);
    ensure!(r.renyi_half >= 10.0 * r.von_neumann, "S_1/2 < 10 S_1");
    ensure!((r.distance - 2f64.powf(-2.5)).abs() <= 1e-12, "T = {} vs 2^-2.5", r.distance);
    Ok(format!(
        "S½ = {:.6}, S₁ = {:.6}, T = {:.6}",
        r.renyi_half, r.von_neumann, r.distance
    ))
}

/// `⟨ψψ| P_sym^{⊗n} |ψψ⟩` with the projector written out as a dense `4ⁿ × 4ⁿ` matrix.
fn kronecker_projector_expectation(psi: &StateVector) -> f64 {
    let n = psi.num_qubits();
    let amps = psi.amplitudes();
    let dim = 1usize << (2 * n);
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    // P_sym on one pair, indexed by (copy-one bit, copy-two bit).
    let local = |a1: usize, a2: usize, b1: usize, b2: usize| -> f64 {
        match ((a1, a2), (b1, b2)) {
            ((0, 0), (0, 0)) | ((1, 1), (1, 1)) => 1.0,
            ((0, 1) | (1, 0), (0, 1) | (1, 0)) => 0.5,
            _ => 0.0,
        }
    };
    let mut matrix = vec![0.0f64; dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let (a1, a2, b1, b2) = (a >> n, a & ((1 << n) - 1), b >> n, b & ((1 << n) - 1));
            matrix[a * dim + b] = (0..n).map(|q| local(bit(a1, q), bit(a2, q), bit(b1, q), bit(b2, q))).product();
        }
    }
    let doubled: Vec<C64> = (0..dim).map(|a| amps[a >> n] * amps[a & ((1 << n) - 1)]).collect();
    let mut total = C64::new(0.0, 0.0);
    for a in 0..dim {
        for b in 0..dim {
            let m = matrix[a * dim + b];
            if m != 0.0 {
                total += doubled[a].conj() * doubled[b] * m;
            }
        }
    }
    total.re
}

/// `Tr ρ_S²` by summing the partial trace element by element.
fn literal_purity(psi: &StateVector, subset: &[usize]) -> f64 {
    let n = psi.num_qubits();
    let amps = psi.amplitudes();
    let rest: Vec<usize> = (0..n).filter(|q| !subset.contains(q)).collect();
    let compose = |s: usize, r: usize| {
        let mut idx = 0;
        for (k, &q) in subset.iter().enumerate() {
            idx |= ((s >> (subset.len() - 1 - k)) & 1) << (n - 1 - q);
        }
        for (k, &q) in rest.iter().enumerate() {
            idx |= ((r >> (rest.len() - 1 - k)) & 1) << (n - 1 - q);
        }
        idx
    };
    let ds = 1usize << subset.len();
    let dr = 1usize << rest.len();
    let mut rho = vec![C64::new(0.0, 0.0); ds * ds];
    for i in 0..ds {
        for j in 0..ds {
            rho[i * ds + j] = (0..dr).map(|r| amps[compose(i, r)] * amps[compose(j, r)].conj()).sum();
        }
    }
    (0..ds)
        .flat_map(|i| (0..ds).map(move |j| (i, j)))
        .map(|(i, j)| (rho[i * ds + j] * rho[j * ds + i]).re)
        .sum()
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2usize, 3, 4] {
        for i in 0..100 {
            let psi = haar_state(n, &mut substream(6, (n as u64) << 32 | i)).map_err(|e| e.to_string())?;
            let doubled = concurrence_doubled_space(&psi).map_err(|e| e.to_string())?;
            let purity = concurrence(&psi).map_err(|e| e.to_string())?.value;
            let brute = 2.0 * (1.0 - kronecker_projector_expectation(&psi)).max(0.0).sqrt();
            let subsets_sum: f64 = (0..1usize << n)
                .map(|mask| literal_purity(&psi, &(0..n).filter(|q| mask & (1 << q) != 0).collect::<Vec<_>>()))
                .sum();
            let literal = 2.0 * (1.0 - subsets_sum / (1u64 << n) as f64).max(0.0).sqrt();
            for (name, v) in [("subset-purity", purity), ("brute force", brute), ("literal partial trace", literal)] {
                let dev = (v - doubled).abs();
                worst = worst.max(dev);
                ensure!(dev <= 1e-10, "n={n} state {i}: doubled {doubled} vs {name} {v}");
            }
        }
    }
    Ok(format!("300 states, max disagreement {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for s in [Suite::Fannes, Suite::Tensor, Suite::Poly] {
        let r = suite(s, 1);
        suite_clean(&r)?;
        parts.push(format!("{} {}/{}", r.name, r.passed, r.checks));
    }
    Ok(parts.join(", "))
}

fn criterion_8() -> Outcome {
    let ghz = StateVector::normalized({
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[0] = C64::new(1.0, 0.0);
        v[7] = C64::new(1.0, 0.0);
        v
    })
    .map_err(|e| e.to_string())?;
    let x_protocol = protocol_average(&ghz, 0, 2, &[MeasurementBasis::X]).map_err(|e| e.to_string())?;
    ensure!((x_protocol - 1.0).abs() < 1e-12, "X-basis protocol gives {x_protocol}");
    let b = localizable_entanglement(&ghz, 0, 2, &LocalizableOptions::default()).map_err(|e| e.to_string())?;
    ensure!(b.lower >= 0.99, "lower bound {}", b.lower);
    ensure!((b.upper - 1.0).abs() <= 1e-9, "upper bound {}", b.upper);
    Ok(format!("lower {:.12}, upper {:.12}", b.lower, b.upper))
}

fn expected_lines(bytes: &[u8]) -> Result<Vec<usize>, String> {
    let first = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
    let first = String::from_utf8_lossy(first);
    let list = first
        .trim()
        .strip_prefix("# expect-error-lines:")
        .ok_or_else(|| "missing expect-error-lines header".to_string())?;
    list.split(',')
        .map(|s| s.trim().parse().map_err(|e| format!("bad line number: {e}")))
        .collect()
}

fn criterion_9() -> Outcome {
    let valid = corpus_files("valid");
    ensure!(valid.len() == 50, "valid corpus has {} circuits, expected 50", valid.len());
    let mut mnemonics = BTreeSet::new();
    let (mut crlf, mut lf, mut ctrl, mut comments) = (0, 0, 0, 0);
    for path in &valid {
        let bytes = std::fs::read(path).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        if text.contains("\r\n") {
            crlf += 1;
        } else {
            lf += 1;
        }
        comments += text.contains('#') as usize;
        let c = parse_circuit_bytes(&bytes).map_err(|d| format!("{}: {:?}", path.display(), d))?;
        for g in c.gates() {
            mnemonics.insert(g.kind().mnemonic());
            ctrl += (!g.controls().is_empty()) as usize;
        }
        let s = serialize_circuit(&c);
        let again = parse_circuit(&s).map_err(|d| format!("{}: reparse failed {:?}", path.display(), d))?;
        ensure!(again.same_structure(&c), "{}: round trip changed the circuit", path.display());
        ensure!(serialize_circuit(&again) == s, "{}: serialization is not a fixed point", path.display());
        // Line endings do not matter.
        let flipped = if text.contains("\r\n") {
            text.replace("\r\n", "\n")
        } else {
            text.replace('\n', "\r\n")
        };
        let c2 = parse_circuit(&flipped).map_err(|d| format!("{}: {:?}", path.display(), d))?;
        ensure!(c2.same_structure(&c), "{}: line ending changed the circuit", path.display());
    }
    let all = ["x", "y", "z", "h", "s", "t", "cnot", "ry", "unitary"];
    for m in all {
        ensure!(mnemonics.contains(m), "corpus lacks mnemonic {m}");
    }
    ensure!(crlf > 0 && lf > 0 && ctrl > 0 && comments > 0, "corpus lacks a required feature");

    let malformed = corpus_files("malformed");
    ensure!(!malformed.is_empty(), "no malformed corpus");
    let bin = env!("CARGO_BIN_EXE_littlent");
    for path in &malformed {
        let bytes = std::fs::read(path).unwrap();
        let expected = expected_lines(&bytes)?;
        let diags = match parse_circuit_bytes(&bytes) {
            Ok(_) => return Err(format!("{}: parsed without error", path.display())),
            Err(d) => d,
        };
        let lines: Vec<usize> = diags.iter().map(|d| d.line).collect::<BTreeSet<_>>().into_iter().collect();
        ensure!(lines == expected, "{}: diagnostics on lines {lines:?}, expected {expected:?}", path.display());
        let out = Command::new(bin)
            .args(["dilute", "--epsilon", "0.5"])
            .arg(path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(2), "{}: exit {:?}, expected 2", path.display(), out.status.code());
        let stderr = String::from_utf8_lossy(&out.stderr);
        for l in &expected {
            ensure!(stderr.contains(&format!("line {l}:")), "{}: stderr lacks line {l}: {stderr}", path.display());
        }
    }
    Ok(format!(
        "{} circuits round-trip ({lf} LF, {crlf} CRLF, {ctrl} controlled gates); {} malformed files exit 2",
        valid.len(),
        malformed.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("dilution identity q = εp and step distance √ε", criterion_1),
        ("promise decision at ε = 0.1, 200 meta-trials", criterion_2),
        ("entropy bound on 100 sampled S_ε states, n = 10", criterion_3),
        ("measure bounds suite on sampled S_ε states", criterion_4),
        ("sub-one Rényi counterexample at m = 10, α = 1/2", criterion_5),
        ("concurrence triple oracle, n ∈ {2, 3, 4}", criterion_6),
        ("Fannes, tensor-power and polynomial-form suites", criterion_7),
        ("GHZ₃ localizable entanglement", criterion_8),
        ("parser round trip and malformed corpus", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} — {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} — {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
