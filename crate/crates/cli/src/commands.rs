use std::io::Write;
use std::process::ExitCode;

use iqpsim::ising::{joint_probability_with_cap, partition_function_bruteforce_with_cap, probability_table_with_cap};
use iqpsim::oracle::{simulate_statevector_with_cap, xbasis_marginal, xbasis_probability};
use iqpsim::planar::lattice::{grid, triangulated_grid};
use iqpsim::planar::{PlanarEmbedding, PlanarIqp};
use iqpsim::selftest::{self, Kernels};
use iqpsim::sparse::{classify, sparse_probability, sparse_samples, SparseKind};
use iqpsim::{sample_rng, IqpCircuit, IsingInstance, OutcomeString, PartitionValue};
use rand::Rng;
use serde_json::{json, Value};

use crate::file::{parse_angle, CircuitFile};
use crate::format;
use crate::{Cli, Command, Fault, Lattice, Opts};

/// Agreement required by `--verify`.
const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Run(#[from] iqpsim::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Run(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        self.to_string()
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Loaded {
    circuit: IqpCircuit,
    embedding: Option<PlanarEmbedding>,
}

fn load(path: &std::path::Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file = CircuitFile::from_json(&text).map_err(CliError::Input)?;
    let circuit = file.circuit().map_err(CliError::Input)?;
    let embedding = file.embedding(&circuit).map_err(CliError::Input)?;
    Ok(Loaded { circuit, embedding })
}

fn outcome(text: &str, len: usize) -> Result<OutcomeString> {
    let s: OutcomeString = text.parse().map_err(|e: iqpsim::Error| CliError::Input(e.to_string()))?;
    s.check_len(len).map_err(|e| CliError::Input(format!("outcome {text:?}: {e}")))?;
    Ok(s)
}

fn emit(opts: &Opts, plain: &[String], doc: Value) {
    let mut out = std::io::stdout().lock();
    if opts.json {
        let _ = writeln!(out, "{doc}");
    } else {
        for line in plain {
            let _ = writeln!(out, "{line}");
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Engine {
    Sparse,
    Planar,
    BruteForce,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Sparse => "sparse",
            Engine::Planar => "planar",
            Engine::BruteForce => "brute-force",
        }
    }

    fn pick(l: &Loaded) -> Engine {
        if classify(&l.circuit).is_sparse() {
            Engine::Sparse
        } else if l.embedding.is_some() {
            Engine::Planar
        } else {
            Engine::BruteForce
        }
    }
}

struct Check {
    reference: f64,
    ok: bool,
}

/// Oracle comparison for `--verify`; `None` when `n` is above the cap.
fn verify(opts: &Opts, n: usize, value: f64, reference: impl FnOnce() -> Result<f64>) -> Result<Option<Check>> {
    if !opts.verify {
        return Ok(None);
    }
    if n > opts.cap {
        eprintln!("iqpsim: --verify skipped, {n} qubits exceed the cap of {}", opts.cap);
        return Ok(None);
    }
    let reference = reference()?;
    Ok(Some(Check {
        reference,
        ok: (value - reference).abs() <= VERIFY_TOL,
    }))
}

fn verdict(check: &Option<Check>) -> ExitCode {
    match check {
        Some(c) if !c.ok => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn check_lines(check: &Option<Check>, what: &str) -> Vec<String> {
    check
        .iter()
        .map(|c| {
            let tag = if c.ok { "agree" } else { "MISMATCH" };
            format!("{what} {} {tag}", format::real(c.reference))
        })
        .collect()
}

fn check_json(check: &Option<Check>) -> Value {
    match check {
        Some(c) => json!({"reference": c.reference, "agree": c.ok}),
        None => Value::Null,
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Classify { file } => cmd_classify(opts, &load(file)?),
        Command::Prob { file, outcome: s } => {
            let l = load(file)?;
            let s = outcome(s, l.circuit.num_qubits())?;
            cmd_prob(opts, &l, &s)
        }
        Command::Marginal { file, qubits, outcome: s } => {
            let l = load(file)?;
            let measured = parse_qubits(qubits, l.circuit.num_qubits())?;
            let s = outcome(s, measured.len())?;
            cmd_marginal(opts, &l, &measured, &s)
        }
        Command::Partition { file, fields } => {
            let l = load(file)?;
            let s = outcome(fields, l.circuit.num_qubits())?;
            cmd_partition(opts, &l, &s)
        }
        Command::Sample { file, count, seed } => cmd_sample(opts, &load(file)?, *count, *seed),
        Command::Gen { lattice, size, theta } => cmd_gen(*lattice, size, theta),
        Command::Selftest { inject_fault } => cmd_selftest(opts, *inject_fault),
    }
}

fn parse_qubits(text: &str, n: usize) -> Result<Vec<usize>> {
    let bad = |why: String| CliError::Input(format!("qubit list {text:?}: {why}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let q: usize = part.parse().map_err(|_| bad(format!("{part:?} is not a qubit number")))?;
        if q == 0 || q > n {
            return Err(bad(format!("qubit {q} is outside 1..={n}")));
        }
        if out.contains(&(q - 1)) {
            return Err(bad(format!("qubit {q} is listed twice")));
        }
        out.push(q - 1);
    }
    Ok(out)
}

fn cmd_classify(opts: &Opts, l: &Loaded) -> Result<ExitCode> {
    let class = classify(&l.circuit);
    let mut labels = Vec::new();
    match class.kind {
        SparseKind::Ifrb => labels.push("IFRB"),
        SparseKind::Ib => labels.push("IB"),
        SparseKind::General => {}
    }
    if l.embedding.is_some() {
        labels.push("planar-two-body");
    }
    if labels.is_empty() {
        labels.push("general");
    }
    let padding: Vec<usize> = class.padding.iter().map(|q| q + 1).collect();
    let plain: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    emit(opts, &plain, json!({"classes": labels, "padding": padding}));
    Ok(ExitCode::SUCCESS)
}

fn cmd_prob(opts: &Opts, l: &Loaded, s: &OutcomeString) -> Result<ExitCode> {
    let engine = Engine::pick(l);
    let c = &l.circuit;
    let p = match engine {
        Engine::Sparse => sparse_probability(c, s)?,
        Engine::Planar => PlanarIqp::new(c.clone(), l.embedding.clone().expect("planar"))?.probability(s)?,
        Engine::BruteForce => joint_probability_with_cap(c, s, opts.cap)?,
    };
    let check = verify(opts, c.num_qubits(), p, || {
        Ok(xbasis_probability(&simulate_statevector_with_cap(c, opts.cap)?, s)?)
    })?;
    let mut plain = vec![format::real(p)];
    plain.extend(check_lines(&check, "oracle"));
    emit(
        opts,
        &plain,
        json!({"outcome": s.to_string(), "probability": p, "engine": engine.name(), "verify": check_json(&check)}),
    );
    Ok(verdict(&check))
}

fn cmd_marginal(opts: &Opts, l: &Loaded, measured: &[usize], s: &OutcomeString) -> Result<ExitCode> {
    let c = &l.circuit;
    let oracle = || -> Result<f64> {
        Ok(xbasis_marginal(&simulate_statevector_with_cap(c, opts.cap)?, measured, s.bits())?)
    };
    let (p, engine) = match &l.embedding {
        Some(e) => (PlanarIqp::new(c.clone(), e.clone())?.marginal(measured, s.bits())?, "planar"),
        None => (oracle()?, "oracle"),
    };
    let check = if engine == "oracle" {
        None
    } else {
        verify(opts, c.num_qubits(), p, oracle)?
    };
    let mut plain = vec![format::real(p)];
    plain.extend(check_lines(&check, "oracle"));
    let qubits: Vec<usize> = measured.iter().map(|q| q + 1).collect();
    emit(
        opts,
        &plain,
        json!({"qubits": qubits, "outcome": s.to_string(), "probability": p, "engine": engine, "verify": check_json(&check)}),
    );
    Ok(verdict(&check))
}

fn complex_json(z: &PartitionValue) -> Value {
    let v = z.value();
    json!({"re": v.re, "im": v.im, "mantissa": [z.mantissa().re, z.mantissa().im], "exp2": z.exp2()})
}

fn cmd_partition(opts: &Opts, l: &Loaded, s: &OutcomeString) -> Result<ExitCode> {
    let c = &l.circuit;
    let brute = || partition_function_bruteforce_with_cap(&IsingInstance::from_circuit(c, s)?, opts.cap);
    let (z, engine) = match &l.embedding {
        Some(e) => (PlanarIqp::new(c.clone(), e.clone())?.partition_function(s)?, "planar"),
        None => (brute()?, "brute-force"),
    };
    let mut plain = vec![format::partition(&z)];
    let mut check = Value::Null;
    let mut code = ExitCode::SUCCESS;
    if opts.verify && engine == "planar" {
        if c.num_qubits() > opts.cap {
            eprintln!("iqpsim: --verify skipped, {} qubits exceed the cap of {}", c.num_qubits(), opts.cap);
        } else {
            let want = brute()?.value();
            let got = z.value();
            let rel = (got - want).norm() / want.norm().max(1.0);
            let ok = rel <= VERIFY_TOL;
            let tag = if ok { "agree" } else { "MISMATCH" };
            plain.push(format!("brute-force {} {tag}", format::complex(want)));
            check = json!({"reference": {"re": want.re, "im": want.im}, "agree": ok});
            if !ok {
                code = ExitCode::from(1);
            }
        }
    }
    emit(
        opts,
        &plain,
        json!({"fields": s.to_string(), "z": complex_json(&z), "engine": engine, "verify": check}),
    );
    Ok(code)
}

fn cmd_sample(opts: &Opts, l: &Loaded, count: usize, seed: u64) -> Result<ExitCode> {
    let engine = Engine::pick(l);
    let c = &l.circuit;
    let samples = match engine {
        Engine::Sparse => sparse_samples(c, count, seed)?,
        Engine::Planar => PlanarIqp::new(c.clone(), l.embedding.clone().expect("planar"))?.samples(count, seed)?,
        Engine::BruteForce => {
            let table = probability_table_with_cap(c, opts.cap)?;
            let mut cdf = Vec::with_capacity(table.probs().len());
            let mut acc = 0.0;
            for &p in table.probs() {
                acc += p;
                cdf.push(acc);
            }
            (0..count as u64)
                .map(|k| {
                    let u = sample_rng(seed, k).gen::<f64>() * acc;
                    let i = cdf.partition_point(|&x| x <= u).min(cdf.len() - 1);
                    OutcomeString::from_index(i as u64, c.num_qubits())
                })
                .collect()
        }
    };
    let lines: Vec<String> = samples.iter().map(|s| s.to_string()).collect();
    emit(opts, &lines, json!({"engine": engine.name(), "seed": seed, "samples": lines}));
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(lattice: Lattice, size: &str, theta: &str) -> Result<ExitCode> {
    let bad = || CliError::Input(format!("lattice size {size:?}: expected RxC, e.g. 3x3"));
    let (r, c) = size.split_once(['x', 'X']).ok_or_else(bad)?;
    let rows: usize = r.trim().parse().map_err(|_| bad())?;
    let cols: usize = c.trim().parse().map_err(|_| bad())?;
    if rows == 0 || cols == 0 {
        return Err(bad());
    }
    let t = parse_angle(theta).map_err(CliError::Input)?;
    let (circuit, emb) = match lattice {
        Lattice::Grid => grid(rows, cols, t)?,
        Lattice::Tri => triangulated_grid(rows, cols, |_| t)?,
    };
    let file = CircuitFile::from_circuit(&circuit, Some(&emb));
    println!("{}", file.to_json());
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(opts: &Opts, fault: Option<Fault>) -> Result<ExitCode> {
    let kernels = match fault {
        None => Kernels::default(),
        Some(Fault::PfaffianSign) => Kernels::flipped_pfaffian_sign(),
    };
    let report = selftest::run_with(&kernels);
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let summary = if failed.is_empty() {
        "PASS".to_string()
    } else {
        format!("FAIL {}", failed.join(" "))
    };
    let mut plain: Vec<String> = report.checks.iter().map(|c| c.to_string()).collect();
    plain.push(summary.clone());
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    emit(opts, &plain, json!({"passed": report.passed(), "summary": summary, "checks": checks}));
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
