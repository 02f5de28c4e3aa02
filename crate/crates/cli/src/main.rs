//! `originlab`: the toolkit's operations as subcommands.
//!
//! Payloads (JSON, CSV, plain values) go to stdout or the requested output
//! files; the reproducibility header and diagnostics go to stderr so that
//! payloads stay machine-readable. Exit codes: 0 success, 2 configuration
//! error, 3 unbounded program (`lp-check` only), >= 64 internal failure.

mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use originlab::error::Error;
use originlab::experiment::{
    run_experiment_with, ExperimentConfig, ExperimentKind, RunOptions, CONFIG_SCHEMA_VERSION,
};
use originlab::hull::classify_origin;
use originlab::lp::{is_bounded, sandwich_check, BoundednessVerdict, LPInstance};
use originlab::rational::format_rational;
use originlab::sampling::{CostChoice, DistributionSpec};
use originlab::studies::{
    asymmetry_experiment, boundary_decay, sparse_threshold_experiment, sweep, StudyOptions,
};
use originlab::wendel::{p_exact, p_float};
use originlab::{enumerate_exact, Q, QMatrix};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "originlab",
    version,
    about = "Exact origin-containment and LP-boundedness experiments",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the containment probability p(n,d).
    Pnd(PndArgs),
    /// Classify the origin against the hull of points read from a file.
    Classify(ClassifyArgs),
    /// Decide boundedness of max <c,x> s.t. Ax <= 1 for a matrix file.
    LpCheck(LpCheckArgs),
    /// Run a seeded Monte Carlo experiment and print its result JSON.
    Simulate(SimulateArgs),
    /// Enumerate a finite-atom law exhaustively: exact class probabilities.
    Enumerate(EnumerateArgs),
    /// Sweep n across the phase transition at fixed d.
    Sweep(SweepArgs),
    /// Measure boundary-class decay at n = 2d over a list of dimensions.
    Decay(DecayArgs),
    /// Chart containment against Bernoulli-Gaussian sparsity.
    Sparse(SparseArgs),
    /// Run a hull experiment under an asymmetric mean-zero law.
    Asym(AsymArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Pnd(args) => cmd_pnd(args),
        Command::Classify(args) => cmd_classify(args),
        Command::LpCheck(args) => cmd_lp_check(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Decay(args) => cmd_decay(args),
        Command::Sparse(args) => cmd_sparse(args),
        Command::Asym(args) => cmd_asym(args),
    }
}

// ---------------------------------------------------------------------------
// Failure plumbing

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    // Every catalogued core error describes bad input or an oversized
    // request; internal faults panic instead (exit >= 64 via abort).
    fn from(e: Error) -> Self {
        Failure::config(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing

/// Reproducibility header, on stderr: version, canonical parameter hash,
/// master seed (or n/a for deterministic commands).
fn print_header(config_hash: &str, master_seed: Option<u64>) {
    eprintln!("# originlab {}", env!("CARGO_PKG_VERSION"));
    eprintln!("# config_hash: {config_hash}");
    match master_seed {
        Some(seed) => eprintln!("# master_seed: {seed}"),
        None => eprintln!("# master_seed: n/a"),
    }
}

/// SHA-256 over minified JSON with sorted keys; matches the hashing the
/// experiment engine applies to its configs.
fn hash_value(value: &Value) -> String {
    let canonical = serde_json::to_string(value).expect("canonical JSON");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Seeds omitted on the command line come from OS entropy (RandomState is
/// randomly keyed per process) mixed with the clock, and are printed in the
/// header so the run stays reproducible after the fact.
fn generate_seed() -> u64 {
    use std::hash::{BuildHasher, Hasher};
    let mut h = std::collections::hash_map::RandomState::new().build_hasher();
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    h.write_u128(nanos);
    h.finish()
}

fn emit(payload: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{payload}\n")).map_err(|e| Failure {
            code: 74,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure {
        code: 74,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn qvec_json(v: &[Q]) -> Value {
    Value::Array(
        v.iter()
            .map(|q| Value::String(format_rational(q)))
            .collect(),
    )
}

fn matrix_json(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| qvec_json(m.row(i))).collect())
}

fn unit_cost(d: usize) -> Vec<Q> {
    use originlab::Scalar as _;
    let mut e1 = vec![Q::from_i64(0); d];
    if d > 0 {
        e1[0] = Q::from_i64(1);
    }
    e1
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistFlag {
    Rademacher,
    Gaussian,
    Bg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindFlag {
    Hull,
    Lp,
}

impl From<KindFlag> for ExperimentKind {
    fn from(value: KindFlag) -> Self {
        match value {
            KindFlag::Hull => ExperimentKind::Hull,
            KindFlag::Lp => ExperimentKind::Lp,
        }
    }
}

/// Entry-law selection shared by the randomized subcommands.
#[derive(Args, Clone)]
struct DistArgs {
    /// Entry distribution.
    #[arg(long, value_enum)]
    dist: Option<DistFlag>,
    /// Activation probability for --dist bg, as a rational like 1/10.
    #[arg(long)]
    p: Option<String>,
    /// Mantissa bits for Gaussian-type draws.
    #[arg(long, default_value_t = 53)]
    precision_bits: u32,
    /// Rescale Bernoulli-Gaussian entries by 1/sqrt(p).
    #[arg(long)]
    normalized: bool,
    /// Symmetric atom list `value:weight,...` as an alternative to --dist.
    #[arg(long, conflicts_with = "dist", allow_hyphen_values = true)]
    atoms: Option<String>,
}

impl DistArgs {
    fn build(&self, dyadic_bits: Option<u32>) -> Result<DistributionSpec, Failure> {
        if let Some(atoms) = &self.atoms {
            if self.p.is_some() {
                return Err(Failure::config("--p only applies to --dist bg"));
            }
            return Ok(DistributionSpec::discrete_symmetric(input::atom_pairs(
                atoms,
                dyadic_bits,
            )?));
        }
        match self.dist {
            Some(DistFlag::Rademacher) => {
                if self.p.is_some() {
                    return Err(Failure::config("--p only applies to --dist bg"));
                }
                Ok(DistributionSpec::rademacher())
            }
            Some(DistFlag::Gaussian) => {
                if self.p.is_some() {
                    return Err(Failure::config("--p only applies to --dist bg"));
                }
                Ok(DistributionSpec::gaussian(self.precision_bits))
            }
            Some(DistFlag::Bg) => {
                let p = self
                    .p
                    .as_ref()
                    .ok_or_else(|| Failure::config("--dist bg requires --p"))?;
                Ok(DistributionSpec::bernoulli_gaussian(
                    input::scalar(p, dyadic_bits)?,
                    self.precision_bits,
                    self.normalized,
                ))
            }
            None => Err(Failure::config(
                "choose an entry law with --dist or --atoms",
            )),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct ThreadArgs {
    /// Worker threads for trial execution (default: rayon's choice).
    #[arg(long, env = "ORIGINLAB_THREADS")]
    threads: Option<usize>,
}

impl ThreadArgs {
    fn resolve(&self) -> Result<Option<usize>, Failure> {
        match self.threads {
            Some(0) => Err(Failure::config("--threads must be at least 1")),
            t => Ok(t),
        }
    }
}

// ---------------------------------------------------------------------------
// pnd

#[derive(Args)]
struct PndArgs {
    /// Number of sample points.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Ambient dimension.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    /// Print the exact rational p/q instead of a double.
    #[arg(long)]
    exact: bool,
}

fn cmd_pnd(args: PndArgs) -> Result<ExitCode, Failure> {
    let params = json!({
        "command": "pnd", "n": args.n, "d": args.d, "exact": args.exact,
    });
    print_header(&hash_value(&params), None);
    if args.exact {
        println!("{}", format_rational(&p_exact(args.n, args.d)));
    } else {
        println!("{}", p_float(args.n, args.d));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// classify

#[derive(Args)]
struct ClassifyArgs {
    /// JSON file: array of equal-length rows; entries are rational strings
    /// or integers (floats only with --dyadic-bits).
    #[arg(long)]
    points: PathBuf,
    /// Admit non-integer numeric entries by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    /// Write the JSON verdict here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode, Failure> {
    let points = input::matrix_file(&args.points, args.dyadic_bits)?;
    let params = json!({
        "command": "classify", "points": matrix_json(&points),
    });
    print_header(&hash_value(&params), None);
    let verdict = classify_origin(&points)?;
    // Certificates as variant-named JSON: the class reads as written in the
    // library types, while counts elsewhere keep their lowercase keys.
    let class = match verdict.class {
        originlab::OriginClass::Outside => "Outside",
        originlab::OriginClass::Boundary => "Boundary",
        originlab::OriginClass::Interior => "Interior",
    };
    let payload = json!({
        "class": class,
        "witness": verdict.witness.as_deref().map(qvec_json),
        "separator": verdict.separator.as_deref().map(qvec_json),
    });
    emit(
        &serde_json::to_string_pretty(&payload).expect("verdict serializes"),
        args.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// lp-check

#[derive(Args)]
struct LpCheckArgs {
    /// JSON file with the rows of the constraint matrix A.
    #[arg(long)]
    matrix: PathBuf,
    /// Cost vector as comma-separated rationals; defaults to e_1.
    #[arg(long, allow_hyphen_values = true)]
    cost: Option<String>,
    /// Admit non-integer numeric entries by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    /// Also run the interior/bounded/containment cross-check.
    #[arg(long)]
    debug_sandwich: bool,
    /// Write the JSON verdict here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_lp_check(args: LpCheckArgs) -> Result<ExitCode, Failure> {
    let a = input::matrix_file(&args.matrix, args.dyadic_bits)?;
    let cost = match &args.cost {
        Some(text) => input::vector(text, args.dyadic_bits)?,
        None => unit_cost(a.cols()),
    };
    let params = json!({
        "command": "lp-check", "matrix": matrix_json(&a), "cost": qvec_json(&cost),
    });
    print_header(&hash_value(&params), None);
    let instance = LPInstance::new(a, cost)?;
    let verdict = is_bounded(&instance)?;
    let mut payload = match &verdict {
        BoundednessVerdict::Bounded(weights) => json!({
            "verdict": "bounded", "cone_weights": qvec_json(weights),
        }),
        BoundednessVerdict::Unbounded(ray) => json!({
            "verdict": "unbounded", "recession_ray": qvec_json(ray),
        }),
    };
    if args.debug_sandwich {
        let report = sandwich_check(&instance)?;
        payload["sandwich_pass"] = json!(report.pass);
    }
    emit(
        &serde_json::to_string_pretty(&payload).expect("verdict serializes"),
        args.out.as_deref(),
    )?;
    Ok(if verdict.is_bounded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Args)]
struct SimulateArgs {
    /// Experiment config JSON: an ExperimentConfig object, or a previous
    /// result file whose `config` field is reused.
    #[arg(long, conflicts_with_all = [
        "kind", "dist", "p", "atoms", "normalized", "n", "d", "trials",
        "seed", "cost", "confidence",
    ])]
    config: Option<PathBuf>,
    /// Which decision to tally.
    #[arg(long, value_enum, default_value_t = KindFlag::Hull)]
    kind: KindFlag,
    #[command(flatten)]
    dist_args: DistArgs,
    /// Number of sample points per trial.
    #[arg(long)]
    n: Option<usize>,
    /// Ambient dimension.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed; generated from OS entropy and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed LP cost vector, comma-separated rationals (defaults to e_1).
    #[arg(long, allow_hyphen_values = true)]
    cost: Option<String>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Admit decimal inputs by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Re-derive certificates and assert the LP sandwich on every trial.
    #[arg(long)]
    debug_sandwich: bool,
    /// Result JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial audit CSV path (columns trial,class).
    #[arg(long)]
    audit: Option<PathBuf>,
}

fn load_config(path: &Path) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{} is not JSON: {e}", path.display())))?;
    // A result file embeds the config it ran under; accept it directly so
    // output can be re-fed as input.
    let config_value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(config_value)
        .map_err(|e| Failure::config(format!("invalid experiment config: {e}")))
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Failure> {
    let cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => {
            let n = args
                .n
                .ok_or_else(|| Failure::config("--n is required without --config"))?;
            let d = args
                .d
                .ok_or_else(|| Failure::config("--d is required without --config"))?;
            let kind = ExperimentKind::from(args.kind);
            let cost = match (kind, &args.cost) {
                (ExperimentKind::Lp, Some(text)) => Some(CostChoice::Fixed(input::vector(
                    text,
                    args.dyadic_bits,
                )?)),
                (ExperimentKind::Lp, None) => None,
                (ExperimentKind::Hull, Some(_)) => {
                    return Err(Failure::config("--cost applies to --kind lp only"));
                }
                (ExperimentKind::Hull, None) => None,
            };
            ExperimentConfig {
                schema_version: CONFIG_SCHEMA_VERSION,
                kind,
                spec: args.dist_args.build(args.dyadic_bits)?,
                n,
                d,
                trials: args.trials,
                master_seed: args.seed.unwrap_or_else(generate_seed),
                cost,
                confidence: args.confidence,
            }
        }
    };
    cfg.validate()?;
    print_header(&cfg.config_hash(), Some(cfg.master_seed));
    let opts = RunOptions {
        threads: args.threads.resolve()?,
        collect_audit: args.audit.is_some(),
        debug_sandwich: args.debug_sandwich,
    };
    let output = run_experiment_with(&cfg, &opts)?;
    emit(&output.result.canonical_json(), args.out.as_deref())?;
    if let Some(path) = &args.audit {
        let labels = output.audit.expect("audit labels were requested");
        let mut csv = String::from("trial,class\n");
        for (trial, label) in labels.iter().enumerate() {
            writeln!(csv, "{trial},{label}").expect("string write");
        }
        write_file(path, &csv)?;
    }
    eprintln!("# runtime_ms: {}", output.result.runtime_ms);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// enumerate

#[derive(Args)]
struct EnumerateArgs {
    /// Experiment config JSON supplying kind/spec/n/d/cost.
    #[arg(long, conflicts_with_all = [
        "kind", "dist", "p", "atoms", "normalized", "n", "d", "cost",
    ])]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = KindFlag::Hull)]
    kind: KindFlag,
    #[command(flatten)]
    dist_args: DistArgs,
    /// Number of sample points.
    #[arg(long)]
    n: Option<usize>,
    /// Ambient dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Fixed LP cost vector, comma-separated rationals (defaults to e_1).
    #[arg(long, allow_hyphen_values = true)]
    cost: Option<String>,
    /// Admit decimal inputs by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    /// Write the JSON probabilities here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<ExitCode, Failure> {
    let (spec, n, d, kind, cost) = match &args.config {
        Some(path) => {
            let cfg = load_config(path)?;
            let cost = match cfg.kind {
                ExperimentKind::Hull => None,
                ExperimentKind::Lp => match cfg.resolved_cost() {
                    CostChoice::Fixed(c) => Some(c),
                    CostChoice::Sampled(_) => {
                        return Err(Failure::config(
                            "sampled cost vectors cannot be enumerated; fix the cost",
                        ));
                    }
                },
            };
            (cfg.spec, cfg.n, cfg.d, cfg.kind, cost)
        }
        None => {
            let n = args
                .n
                .ok_or_else(|| Failure::config("--n is required without --config"))?;
            let d = args
                .d
                .ok_or_else(|| Failure::config("--d is required without --config"))?;
            let kind = ExperimentKind::from(args.kind);
            let cost = match (kind, &args.cost) {
                (ExperimentKind::Lp, Some(text)) => {
                    Some(input::vector(text, args.dyadic_bits)?)
                }
                (ExperimentKind::Lp, None) => Some(unit_cost(d)),
                (ExperimentKind::Hull, Some(_)) => {
                    return Err(Failure::config("--cost applies to --kind lp only"));
                }
                (ExperimentKind::Hull, None) => None,
            };
            (args.dist_args.build(args.dyadic_bits)?, n, d, kind, cost)
        }
    };
    let params = json!({
        "command": "enumerate",
        "kind": serde_json::to_value(kind).expect("kind serializes"),
        "spec": serde_json::to_value(&spec).expect("spec serializes"),
        "n": n, "d": d,
        "cost": cost.as_deref().map(qvec_json),
    });
    print_header(&hash_value(&params), None);
    let result = enumerate_exact(&spec, n, d, kind, cost.as_deref())?;
    let mut payload = serde_json::Map::new();
    for (name, prob) in result.classes() {
        payload.insert(name.to_string(), Value::String(format_rational(&prob)));
    }
    if let Some(contains) = result.contains() {
        payload.insert(
            "contains".to_string(),
            Value::String(format_rational(&contains)),
        );
    }
    emit(
        &serde_json::to_string_pretty(&Value::Object(payload)).expect("payload serializes"),
        args.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Args)]
struct SweepArgs {
    /// Ambient dimension.
    #[arg(long)]
    d: usize,
    /// First n of the sweep (inclusive).
    #[arg(long)]
    n_lo: usize,
    /// Last n of the sweep (inclusive).
    #[arg(long)]
    n_hi: usize,
    #[command(flatten)]
    dist_args: DistArgs,
    /// Trials per sweep point.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed; generated from OS entropy and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Admit decimal inputs by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Report JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-point table as CSV (n,freq,lo,hi,theory).
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn study_options(confidence: f64, threads: &ThreadArgs) -> Result<StudyOptions, Failure> {
    Ok(StudyOptions {
        confidence,
        threads: threads.resolve()?,
    })
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let spec = args.dist_args.build(args.dyadic_bits)?;
    let seed = args.seed.unwrap_or_else(generate_seed);
    let params = json!({
        "command": "sweep", "d": args.d, "n_lo": args.n_lo, "n_hi": args.n_hi,
        "spec": serde_json::to_value(&spec).expect("spec serializes"),
        "trials": args.trials, "master_seed": seed, "confidence": args.confidence,
    });
    print_header(&hash_value(&params), Some(seed));
    let report = sweep(
        args.d,
        args.n_lo..=args.n_hi,
        &spec,
        args.trials,
        seed,
        &study_options(args.confidence, &args.threads)?,
    )?;
    emit(
        &serde_json::to_string_pretty(&report).expect("report serializes"),
        args.out.as_deref(),
    )?;
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// decay

#[derive(Args)]
struct DecayArgs {
    /// Dimensions to measure, comma-separated (n = 2d at each).
    #[arg(long)]
    d_list: String,
    #[command(flatten)]
    dist_args: DistArgs,
    /// Trials per dimension.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Master seed; generated from OS entropy and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Admit decimal inputs by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Report JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-point table as CSV (d,freq,lo,hi,theory).
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_decay(args: DecayArgs) -> Result<ExitCode, Failure> {
    let d_list = input::dimension_list(&args.d_list)?;
    let spec = args.dist_args.build(args.dyadic_bits)?;
    let seed = args.seed.unwrap_or_else(generate_seed);
    let params = json!({
        "command": "decay", "d_list": d_list,
        "spec": serde_json::to_value(&spec).expect("spec serializes"),
        "trials": args.trials, "master_seed": seed, "confidence": args.confidence,
    });
    print_header(&hash_value(&params), Some(seed));
    let report = boundary_decay(
        &d_list,
        &spec,
        args.trials,
        seed,
        &study_options(args.confidence, &args.threads)?,
    )?;
    emit(
        &serde_json::to_string_pretty(&report).expect("report serializes"),
        args.out.as_deref(),
    )?;
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sparse

#[derive(Args)]
struct SparseArgs {
    /// Ambient dimension.
    #[arg(long)]
    d: usize,
    /// Number of sample points per trial.
    #[arg(long)]
    n: usize,
    /// Sparsity grid: comma-separated rationals in (0,1], e.g. 1/20,1/10,1.
    #[arg(long)]
    p_grid: String,
    /// Trials per grid point.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed; generated from OS entropy and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Admit decimal grid entries by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Report JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-point table as CSV (p,freq,lo,hi,theory).
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn cmd_sparse(args: SparseArgs) -> Result<ExitCode, Failure> {
    let p_grid = input::vector(&args.p_grid, args.dyadic_bits)?;
    let seed = args.seed.unwrap_or_else(generate_seed);
    let params = json!({
        "command": "sparse", "d": args.d, "n": args.n,
        "p_grid": qvec_json(&p_grid),
        "trials": args.trials, "master_seed": seed, "confidence": args.confidence,
    });
    print_header(&hash_value(&params), Some(seed));
    let report = sparse_threshold_experiment(
        args.d,
        args.n,
        &p_grid,
        args.trials,
        seed,
        &study_options(args.confidence, &args.threads)?,
    )?;
    emit(
        &serde_json::to_string_pretty(&report).expect("report serializes"),
        args.out.as_deref(),
    )?;
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// asym

#[derive(Args)]
struct AsymArgs {
    /// Ambient dimension.
    #[arg(long)]
    d: usize,
    /// Number of sample points per trial.
    #[arg(long)]
    n: usize,
    /// Asymmetric mean-zero atoms `value:weight,...`, e.g. 2:1/3,-1:2/3.
    #[arg(long, allow_hyphen_values = true)]
    atoms: Option<String>,
    /// Symmetric baseline law instead of --atoms.
    #[arg(long, value_enum, conflicts_with = "atoms")]
    dist: Option<DistFlag>,
    /// Activation probability for --dist bg.
    #[arg(long)]
    p: Option<String>,
    /// Mantissa bits for Gaussian-type draws.
    #[arg(long, default_value_t = 53)]
    precision_bits: u32,
    /// Rescale Bernoulli-Gaussian entries by 1/sqrt(p).
    #[arg(long)]
    normalized: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed; generated from OS entropy and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Admit decimal inputs by rounding to this many bits.
    #[arg(long)]
    dyadic_bits: Option<u32>,
    #[command(flatten)]
    threads: ThreadArgs,
    /// Report JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_asym(args: AsymArgs) -> Result<ExitCode, Failure> {
    let spec = match &args.atoms {
        Some(text) => DistributionSpec::DiscreteGeneral {
            atoms: input::atom_pairs(text, args.dyadic_bits)?,
            declared_mean_zero: true,
            allow_asymmetric: true,
            subgaussian_bound: None,
        },
        None => {
            let dist_args = DistArgs {
                dist: args.dist,
                p: args.p.clone(),
                precision_bits: args.precision_bits,
                normalized: args.normalized,
                atoms: None,
            };
            dist_args.build(args.dyadic_bits)?
        }
    };
    let seed = args.seed.unwrap_or_else(generate_seed);
    let params = json!({
        "command": "asym", "d": args.d, "n": args.n,
        "spec": serde_json::to_value(&spec).expect("spec serializes"),
        "trials": args.trials, "master_seed": seed, "confidence": args.confidence,
    });
    print_header(&hash_value(&params), Some(seed));
    let report = asymmetry_experiment(
        args.d,
        args.n,
        &spec,
        args.trials,
        seed,
        &study_options(args.confidence, &args.threads)?,
    )?;
    emit(
        &serde_json::to_string_pretty(&report).expect("report serializes"),
        args.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}
