//! Seeded, reproducible Monte Carlo experiments over the exact deciders.
//!
//! One trial owns one counter-derived RNG stream and one exact
//! classification, so a result is a pure function of its config. Trials are
//! embarrassingly parallel and tallies are integer counts merged
//! commutatively, which makes the result byte-identical no matter how many
//! worker threads execute it. Classification goes through the float-guided
//! oracle, and through the overflow-checked `i128` carrier whenever a
//! Hadamard-style bound proves every intermediate of the decision path fits;
//! both layers return exactly the verdicts of the arbitrary-precision path.

use crate::error::Error;
use crate::fastpath::fast_origin_class;
use crate::hull::OriginClass;
use crate::linalg::Matrix;
use crate::lp::{is_bounded_fast, sandwich_check, LPInstance};
use crate::rational::format_rational;
use crate::sampling::{
    sample_cost_vector, sample_matrix, validate_spec, CostChoice, DistributionSpec, StreamKey,
    GAUSSIAN_METHOD,
};
use crate::scalar::{Rat128, Scalar};
use crate::stats::wilson_interval;
use crate::wendel::{p_exact, p_exact_f64};
use crate::{QMatrix, QVector, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::time::Instant;

/// Version stamp of the config JSON schema. Configs carrying any other value
/// are rejected rather than silently reinterpreted.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Cost vectors get their own stream family so adding or removing a sampled
/// cost never perturbs the matrix draws of the same trial. The salt is the
/// ASCII bytes `costvec1`.
const COST_STREAM_SALT: u64 = 0x636F_7374_7665_6331;

fn default_schema_version() -> u32 {
    CONFIG_SCHEMA_VERSION
}

fn default_confidence() -> f64 {
    0.99
}

/// Which decision an experiment tallies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Classify the origin against the convex hull of the sampled rows.
    Hull,
    /// Decide boundedness of `max <c,x> s.t. Ax <= 1` for the sampled `A`.
    Lp,
}

/// Full description of one experiment. Two configs with equal JSON encodings
/// produce byte-identical results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub spec: DistributionSpec,
    /// Sample size (rows).
    pub n: usize,
    /// Ambient dimension (columns).
    pub d: usize,
    pub trials: u64,
    pub master_seed: u64,
    /// LP cost source; `None` means the first standard basis vector.
    /// Hull-kind configs ignore it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostChoice>,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

impl ExperimentConfig {
    /// The cost source with the `e_1` default applied.
    pub fn resolved_cost(&self) -> CostChoice {
        self.cost.clone().unwrap_or_else(|| {
            let mut e1 = vec![Q::zero(); self.d];
            e1[0] = Q::one();
            CostChoice::Fixed(e1)
        })
    }

    /// Rejects configs that cannot describe a runnable experiment.
    pub fn validate(&self) -> Result<(), Error> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::ConfigError(format!(
                "unsupported schema_version {} (expected {})",
                self.schema_version, CONFIG_SCHEMA_VERSION
            )));
        }
        if self.trials == 0 {
            return Err(Error::ConfigError("trials must be at least 1".into()));
        }
        if self.n == 0 || self.d == 0 {
            return Err(Error::ConfigError("n and d must be at least 1".into()));
        }
        if self.n.checked_mul(self.d).is_none() {
            return Err(Error::ConfigError("n * d overflows".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::ConfigError(
                "confidence must lie strictly between 0 and 1".into(),
            ));
        }
        validate_spec(&self.spec)?;
        if self.kind == ExperimentKind::Lp {
            match self.resolved_cost() {
                CostChoice::Fixed(c) => {
                    if c.len() != self.d {
                        return Err(Error::DimensionMismatch {
                            context: format!(
                                "fixed cost vector has {} entries, expected {}",
                                c.len(),
                                self.d
                            ),
                        });
                    }
                    if c.iter().all(Zero::is_zero) {
                        return Err(Error::ZeroCostVector);
                    }
                }
                CostChoice::Sampled(spec) => validate_spec(&spec)?,
            }
        }
        Ok(())
    }

    /// SHA-256 of the minified canonical JSON encoding (sorted keys).
    pub fn config_hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("canonical config prints");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Per-class trial tallies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassCounts {
    Hull {
        outside: u64,
        boundary: u64,
        interior: u64,
    },
    Lp {
        bounded: u64,
        unbounded: u64,
    },
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        match self {
            ClassCounts::Hull {
                outside,
                boundary,
                interior,
            } => outside + boundary + interior,
            ClassCounts::Lp { bounded, unbounded } => bounded + unbounded,
        }
    }
}

/// A class frequency with its Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyInterval {
    pub count: u64,
    pub frequency: f64,
    pub lo: f64,
    pub hi: f64,
}

/// The exact reference probability the run is compared against:
/// `p(n,d)` for hull experiments and `p(n+1,d)` for LP experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryProbability {
    /// Human-readable name, e.g. `p(26,10)`.
    pub quantity: String,
    /// Exact value as a `p/q` string.
    pub exact: String,
    /// Nearest double, for plotting.
    pub value: f64,
}

/// Outcome of a full experiment. Everything except `runtime_ms` is a pure
/// function of the config; [`ExperimentResult::canonical_json`] drops the
/// runtime so the serialized form is reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub counts: ClassCounts,
    /// Keyed by class name; hull results also carry the derived `contains`
    /// frequency (boundary + interior).
    pub intervals: BTreeMap<String, FrequencyInterval>,
    pub theory: TheoryProbability,
    /// Name of the Gaussian sampling method when any draws are Gaussian.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_method: Option<String>,
    #[serde(default)]
    pub runtime_ms: u64,
}

impl ExperimentResult {
    /// Pretty JSON with sorted keys and without the `runtime_ms` field:
    /// identical configs yield identical bytes regardless of wall clock or
    /// worker count.
    pub fn canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("result serializes");
        if let serde_json::Value::Object(map) = &mut value {
            map.remove("runtime_ms");
        }
        serde_json::to_string_pretty(&value).expect("canonical result prints")
    }
}

/// Execution knobs that deliberately live outside the config: they must not
/// change the result, so they must not change the config hash either.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
    /// Record the per-trial class labels (for audit CSV output).
    pub collect_audit: bool,
    /// LP runs only: re-derive full certificates per trial and assert the
    /// interior/bounded/containment consistency report. Slow; result bytes
    /// are unchanged.
    pub debug_sandwich: bool,
}

/// An experiment result plus optional per-trial audit labels (trial order).
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub result: ExperimentResult,
    pub audit: Option<Vec<&'static str>>,
}

/// Runs an experiment with default options.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, Error> {
    Ok(run_experiment_with(cfg, &RunOptions::default())?.result)
}

/// Runs a hull-kind experiment; rejects other kinds.
pub fn run_hull_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, Error> {
    if cfg.kind != ExperimentKind::Hull {
        return Err(Error::ConfigError(
            "run_hull_experiment requires kind = hull".into(),
        ));
    }
    run_experiment(cfg)
}

/// Runs an LP-kind experiment; rejects other kinds.
pub fn run_lp_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, Error> {
    if cfg.kind != ExperimentKind::Lp {
        return Err(Error::ConfigError(
            "run_lp_experiment requires kind = lp".into(),
        ));
    }
    run_experiment(cfg)
}

/// Runs an experiment with explicit execution options.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<RunOutput, Error> {
    cfg.validate()?;
    let started = Instant::now();
    let carrier = carrier_for(cfg);
    let (counts, audit) = match cfg.kind {
        ExperimentKind::Hull => execute_hull(cfg, opts, carrier)?,
        ExperimentKind::Lp => execute_lp(cfg, opts, carrier)?,
    };
    assert_eq!(counts.total(), cfg.trials, "internal: lost trials in merge");
    let result = ExperimentResult {
        config: cfg.clone(),
        config_hash: cfg.config_hash(),
        intervals: intervals_for(&counts, cfg.trials, cfg.confidence),
        counts,
        theory: theory_for(cfg),
        gaussian_method: gaussian_method_for(cfg),
        runtime_ms: started.elapsed().as_millis() as u64,
    };
    Ok(RunOutput { result, audit })
}

// ---------------------------------------------------------------------------
// Trial execution

/// Scalar carrier for the exact deciders. `Small` is the overflow-checked
/// `i128` fraction type; it is selected only when `carrier_for` proves the
/// whole decision path fits, and any conversion miss falls back to `Big`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Carrier {
    Big,
    Small,
}

/// Decides once per config whether trials may run on the `i128` carrier.
///
/// Only finite-atom laws qualify. The test is a Hadamard bound: with integer
/// entries of magnitude at most `A` (atoms and cost entries put over a common
/// denominator, plus the literal 1 used by containment systems) every minor
/// arising inside the fraction-free kernels on an `r`-row system is at most
/// `r^(r/2) A^r` in magnitude, and the kernels multiply at most two minors
/// plus a carry. Requiring `2*(r/2*log2(r) + r*log2(A)) + 6 <= 126` therefore
/// keeps every intermediate inside `i128`. The checked arithmetic of the
/// small carrier still backstops the estimate: an overflow would panic, not
/// corrupt.
fn carrier_for(cfg: &ExperimentConfig) -> Carrier {
    let mut values: Vec<Q> = match cfg.spec.effective_atoms() {
        Some(atoms) => atoms.into_iter().map(|(v, _)| v).collect(),
        None => return Carrier::Big,
    };
    if cfg.kind == ExperimentKind::Lp {
        match cfg.resolved_cost() {
            CostChoice::Fixed(c) => values.extend(c),
            CostChoice::Sampled(spec) => match spec.effective_atoms() {
                Some(atoms) => values.extend(atoms.into_iter().map(|(v, _)| v)),
                None => return Carrier::Big,
            },
        }
    }
    if fits_small_carrier(&values, cfg.d) {
        Carrier::Small
    } else {
        Carrier::Big
    }
}

/// True when every entry the deciders can see (the given coordinate values
/// plus the literal 1 of containment systems), put over a common
/// denominator, passes the Hadamard test described on [`carrier_for`].
pub(crate) fn fits_small_carrier(values: &[Q], d: usize) -> bool {
    let mut common_den = BigInt::one();
    for v in values {
        common_den = common_den.lcm(v.denom());
    }
    let mut amax = BigInt::one();
    for v in values {
        let scaled = (v.numer() * (&common_den / v.denom())).abs();
        if scaled > amax {
            amax = scaled;
        }
    }
    let Some(a) = amax.to_f64() else {
        return false;
    };
    if !a.is_finite() || a < 1.0 {
        return false;
    }
    let r = (d + 3) as f64;
    let det_bits = 0.5 * r * r.log2() + r * a.log2();
    2.0 * det_bits + 6.0 <= 126.0
}

fn narrow_matrix(m: &QMatrix) -> Option<Matrix<Rat128>> {
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for q in m.row(i) {
            data.push(Rat128::from_big(q)?);
        }
    }
    Matrix::new(m.rows(), m.cols(), data).ok()
}

fn narrow_vec(v: &[Q]) -> Option<Vec<Rat128>> {
    v.iter().map(Rat128::from_big).collect()
}

fn classify_hull_trial(points: &QMatrix, carrier: Carrier) -> Result<OriginClass, Error> {
    if carrier == Carrier::Small {
        if let Some(small) = narrow_matrix(points) {
            return fast_origin_class(&small);
        }
    }
    fast_origin_class(points)
}

fn decide_lp_trial(a: QMatrix, c: QVector, carrier: Carrier) -> Result<bool, Error> {
    if carrier == Carrier::Small {
        if let (Some(sa), Some(sc)) = (narrow_matrix(&a), narrow_vec(&c)) {
            let instance = LPInstance::new(sa, sc)?;
            return is_bounded_fast(&instance);
        }
    }
    let instance = LPInstance::new(a, c)?;
    is_bounded_fast(&instance)
}

fn hull_slot(class: OriginClass) -> usize {
    match class {
        OriginClass::Outside => 0,
        OriginClass::Boundary => 1,
        OriginClass::Interior => 2,
    }
}

fn hull_label(class: OriginClass) -> &'static str {
    match class {
        OriginClass::Outside => "outside",
        OriginClass::Boundary => "boundary",
        OriginClass::Interior => "interior",
    }
}

fn with_pool<R: Send>(threads: Option<usize>, run: impl FnOnce() -> R + Send) -> R {
    match threads {
        None => run(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("worker pool construction")
            .install(run),
    }
}

fn merge<const K: usize>(mut a: [u64; K], b: [u64; K]) -> [u64; K] {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Tallies `trials` outcomes of `slot` into `K` buckets, in parallel. With
/// audit enabled the labels come back in trial order.
fn tally_trials<const K: usize>(
    trials: u64,
    opts: &RunOptions,
    slot: impl Fn(u64) -> Result<(usize, &'static str), Error> + Sync,
) -> Result<([u64; K], Option<Vec<&'static str>>), Error> {
    if opts.collect_audit {
        let labeled = with_pool(opts.threads, || {
            (0..trials)
                .into_par_iter()
                .map(&slot)
                .collect::<Result<Vec<(usize, &'static str)>, Error>>()
        })?;
        let mut counts = [0u64; K];
        let mut labels = Vec::with_capacity(labeled.len());
        for (idx, label) in labeled {
            counts[idx] += 1;
            labels.push(label);
        }
        Ok((counts, Some(labels)))
    } else {
        let counts = with_pool(opts.threads, || {
            (0..trials)
                .into_par_iter()
                .try_fold(
                    || [0u64; K],
                    |mut acc, t| {
                        acc[slot(t)?.0] += 1;
                        Ok(acc)
                    },
                )
                .try_reduce(|| [0u64; K], |a, b| Ok(merge(a, b)))
        })?;
        Ok((counts, None))
    }
}

fn execute_hull(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
    carrier: Carrier,
) -> Result<(ClassCounts, Option<Vec<&'static str>>), Error> {
    let (counts, audit) = tally_trials::<3>(cfg.trials, opts, |t| {
        let points = sample_matrix(&cfg.spec, cfg.n, cfg.d, StreamKey::new(cfg.master_seed, t))?;
        let class = classify_hull_trial(&points, carrier)?;
        Ok((hull_slot(class), hull_label(class)))
    })?;
    Ok((
        ClassCounts::Hull {
            outside: counts[0],
            boundary: counts[1],
            interior: counts[2],
        },
        audit,
    ))
}

fn execute_lp(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
    carrier: Carrier,
) -> Result<(ClassCounts, Option<Vec<&'static str>>), Error> {
    let cost_choice = cfg.resolved_cost();
    let (counts, audit) = tally_trials::<2>(cfg.trials, opts, |t| {
        let a = sample_matrix(&cfg.spec, cfg.n, cfg.d, StreamKey::new(cfg.master_seed, t))?;
        let c = sample_cost_vector(
            &cost_choice,
            cfg.d,
            StreamKey::new(cfg.master_seed ^ COST_STREAM_SALT, t),
        )?;
        let bounded = if opts.debug_sandwich {
            let instance = LPInstance::new(a, c)?;
            let report = sandwich_check(&instance)?;
            assert!(
                report.pass,
                "internal: interior/bounded/containment sandwich violated"
            );
            report.boundedness.is_bounded()
        } else {
            decide_lp_trial(a, c, carrier)?
        };
        Ok(if bounded {
            (0, "bounded")
        } else {
            (1, "unbounded")
        })
    })?;
    Ok((
        ClassCounts::Lp {
            bounded: counts[0],
            unbounded: counts[1],
        },
        audit,
    ))
}

// ---------------------------------------------------------------------------
// Reporting

fn intervals_for(
    counts: &ClassCounts,
    trials: u64,
    confidence: f64,
) -> BTreeMap<String, FrequencyInterval> {
    let mut out = BTreeMap::new();
    let mut put = |name: &str, count: u64| {
        let (lo, hi) = wilson_interval(count, trials, confidence);
        out.insert(
            name.to_string(),
            FrequencyInterval {
                count,
                frequency: count as f64 / trials as f64,
                lo,
                hi,
            },
        );
    };
    match counts {
        ClassCounts::Hull {
            outside,
            boundary,
            interior,
        } => {
            put("outside", *outside);
            put("boundary", *boundary);
            put("interior", *interior);
            put("contains", boundary + interior);
        }
        ClassCounts::Lp { bounded, unbounded } => {
            put("bounded", *bounded);
            put("unbounded", *unbounded);
        }
    }
    out
}

fn theory_for(cfg: &ExperimentConfig) -> TheoryProbability {
    let n_eff = match cfg.kind {
        ExperimentKind::Hull => cfg.n as u64,
        ExperimentKind::Lp => cfg.n as u64 + 1,
    };
    let d = cfg.d as u64;
    TheoryProbability {
        quantity: format!("p({n_eff},{d})"),
        exact: format_rational(&p_exact(n_eff, d)),
        value: p_exact_f64(n_eff, d),
    }
}

fn spec_draws_gaussians(spec: &DistributionSpec) -> bool {
    matches!(
        spec,
        DistributionSpec::Gaussian { .. } | DistributionSpec::BernoulliGaussian { .. }
    )
}

fn gaussian_method_for(cfg: &ExperimentConfig) -> Option<String> {
    let mut uses = spec_draws_gaussians(&cfg.spec);
    if cfg.kind == ExperimentKind::Lp {
        if let CostChoice::Sampled(spec) = cfg.resolved_cost() {
            uses |= spec_draws_gaussians(&spec);
        }
    }
    uses.then(|| GAUSSIAN_METHOD.to_string())
}
