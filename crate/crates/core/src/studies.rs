//! Preset studies on top of the experiment engine: phase-transition sweeps
//! across `n`, boundary-mass decay across `d`, sparsity thresholds, and
//! asymmetric mean-zero laws.
//!
//! Every study is a deterministic function of its arguments. Points within a
//! study share the master seed, so trial `t` of one point and trial `t` of
//! the next differ only through the experiment geometry (common random
//! numbers); this sharpens cross-point comparisons such as the empirical
//! crossing without costing reproducibility.

use crate::error::Error;
use crate::experiment::{
    run_experiment_with, ExperimentConfig, ExperimentKind, ExperimentResult, RunOptions,
    CONFIG_SCHEMA_VERSION,
};
use crate::rational::format_rational;
use crate::sampling::{DistributionSpec, DEFAULT_PRECISION_BITS};
use crate::stats::ls_slope;
use crate::wendel::{p_exact, p_exact_f64, window_estimate};
use crate::Q;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::ops::RangeInclusive;

/// Execution knobs shared by all studies. Like
/// [`RunOptions`](crate::experiment::RunOptions), these never influence the
/// reported numbers, only how they are computed and annotated.
#[derive(Clone, Copy, Debug)]
pub struct StudyOptions {
    /// Confidence level of every Wilson interval in the report.
    pub confidence: f64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            confidence: 0.99,
            threads: None,
        }
    }
}

fn hull_point(
    spec: &DistributionSpec,
    n: usize,
    d: usize,
    trials: u64,
    master_seed: u64,
    opts: &StudyOptions,
) -> Result<ExperimentResult, Error> {
    let cfg = ExperimentConfig {
        schema_version: CONFIG_SCHEMA_VERSION,
        kind: ExperimentKind::Hull,
        spec: spec.clone(),
        n,
        d,
        trials,
        master_seed,
        cost: None,
        confidence: opts.confidence,
    };
    let run = RunOptions {
        threads: opts.threads,
        ..RunOptions::default()
    };
    Ok(run_experiment_with(&cfg, &run)?.result)
}

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

// ---------------------------------------------------------------------------
// Phase-transition sweep

/// One `n` of a sweep; the frequency is the containment frequency
/// (boundary + interior).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub count: u64,
    pub frequency: f64,
    pub lo: f64,
    pub hi: f64,
    /// Exact containment probability `p(n,d)` as a double.
    pub theory: f64,
}

/// Containment frequency as `n` crosses the phase transition at fixed `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub d: usize,
    pub trials_per_point: u64,
    pub master_seed: u64,
    pub points: Vec<SweepPoint>,
    /// First `n` in the range with containment frequency >= 1/2, if any.
    pub empirical_crossing: Option<usize>,
    /// Smallest `n` with `p(n,d) >= 1/2`; always `2d` by the symmetry of the
    /// closed form.
    pub exact_crossing: u64,
    /// `empirical_crossing - 2d`.
    pub offset_from_2d: Option<i64>,
}

impl SweepReport {
    /// CSV with columns `n,freq,lo,hi,theory`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,freq,lo,hi,theory\n");
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.n,
                fmt_f64(p.frequency),
                fmt_f64(p.lo),
                fmt_f64(p.hi),
                fmt_f64(p.theory)
            )
            .expect("string write");
        }
        out
    }
}

/// Runs one hull experiment per `n` in the range and locates the empirical
/// containment crossing.
pub fn sweep(
    d: usize,
    n_range: RangeInclusive<usize>,
    spec: &DistributionSpec,
    trials: u64,
    master_seed: u64,
    opts: &StudyOptions,
) -> Result<SweepReport, Error> {
    if n_range.is_empty() {
        return Err(Error::ConfigError("sweep range is empty".into()));
    }
    let mut points = Vec::new();
    let mut empirical_crossing = None;
    for n in n_range {
        let result = hull_point(spec, n, d, trials, master_seed, opts)?;
        let contains = &result.intervals["contains"];
        if empirical_crossing.is_none() && contains.frequency >= 0.5 {
            empirical_crossing = Some(n);
        }
        points.push(SweepPoint {
            n,
            count: contains.count,
            frequency: contains.frequency,
            lo: contains.lo,
            hi: contains.hi,
            theory: p_exact_f64(n as u64, d as u64),
        });
    }
    Ok(SweepReport {
        d,
        trials_per_point: trials,
        master_seed,
        points,
        empirical_crossing,
        exact_crossing: window_estimate(d as u64, 0.5),
        offset_from_2d: empirical_crossing.map(|n| n as i64 - 2 * d as i64),
    })
}

// ---------------------------------------------------------------------------
// Boundary decay

/// Boundary-class frequency at `n = 2d` for one `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub d: usize,
    pub n: usize,
    pub boundary_count: u64,
    pub frequency: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Least-squares line through `(d, ln frequency)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Number of points entering the fit (those with >= 10 boundary hits).
    pub points_used: usize,
}

/// How fast the boundary class dies off as the dimension grows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub trials_per_point: u64,
    pub master_seed: u64,
    pub points: Vec<DecayPoint>,
    /// Omitted when fewer than two points have enough boundary hits to
    /// support a log-linear fit.
    pub fit: Option<DecayFit>,
}

impl DecayReport {
    /// CSV with columns `d,freq,lo,hi,theory`; the theory column is the
    /// fitted exponential when a fit exists, else empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,freq,lo,hi,theory\n");
        for p in &self.points {
            let fitted = self
                .fit
                .map(|f| (f.intercept + f.slope * p.d as f64).exp())
                .map(fmt_f64)
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{}",
                p.d,
                fmt_f64(p.frequency),
                fmt_f64(p.lo),
                fmt_f64(p.hi),
                fitted
            )
            .expect("string write");
        }
        out
    }
}

/// Measures the boundary-class frequency at `n = 2d` for each listed `d` and
/// fits `log(frequency)` against `d`.
///
/// Boundary events have probability zero under continuous laws, so the
/// entry law must have finite atoms.
pub fn boundary_decay(
    d_list: &[usize],
    spec: &DistributionSpec,
    trials: u64,
    master_seed: u64,
    opts: &StudyOptions,
) -> Result<DecayReport, Error> {
    if d_list.is_empty() {
        return Err(Error::ConfigError("dimension list is empty".into()));
    }
    if spec.effective_atoms().is_none() {
        return Err(Error::FiniteAtomsRequired);
    }
    let mut points = Vec::new();
    for &d in d_list {
        let n = 2 * d;
        let result = hull_point(spec, n, d, trials, master_seed, opts)?;
        let boundary = &result.intervals["boundary"];
        points.push(DecayPoint {
            d,
            n,
            boundary_count: boundary.count,
            frequency: boundary.frequency,
            lo: boundary.lo,
            hi: boundary.hi,
        });
    }
    let supported: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.boundary_count >= 10)
        .map(|p| (p.d as f64, p.frequency.ln()))
        .collect();
    let fit = ls_slope(&supported).map(|slope| {
        let k = supported.len() as f64;
        let mean_x = supported.iter().map(|(x, _)| x).sum::<f64>() / k;
        let mean_y = supported.iter().map(|(_, y)| y).sum::<f64>() / k;
        DecayFit {
            slope,
            intercept: mean_y - slope * mean_x,
            points_used: supported.len(),
        }
    });
    Ok(DecayReport {
        trials_per_point: trials,
        master_seed,
        points,
        fit,
    })
}

// ---------------------------------------------------------------------------
// Sparsity threshold

/// Containment frequency under a Bernoulli-Gaussian law at one sparsity `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsePoint {
    /// Activation probability, exact.
    #[serde(with = "crate::rational::qstring")]
    pub p: Q,
    /// The same `p` as a double, for plotting.
    pub p_value: f64,
    pub count: u64,
    pub frequency: f64,
    pub lo: f64,
    pub hi: f64,
    /// `|frequency - p(n,d)|`: distance to the dense-law prediction.
    pub gap_to_dense: f64,
}

/// Containment frequency across a sparsity grid, with the conjectured
/// critical sparsity solving `(1-p)^(2d) = 1/d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseReport {
    pub d: usize,
    pub n: usize,
    pub trials_per_point: u64,
    pub master_seed: u64,
    /// Dense-law containment probability `p(n,d)` as a double.
    pub theory: f64,
    pub conjectured_critical_p: f64,
    pub points: Vec<SparsePoint>,
}

impl SparseReport {
    /// CSV with columns `p,freq,lo,hi,theory`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,freq,lo,hi,theory\n");
        for pt in &self.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(pt.p_value),
                fmt_f64(pt.frequency),
                fmt_f64(pt.lo),
                fmt_f64(pt.hi),
                fmt_f64(self.theory)
            )
            .expect("string write");
        }
        out
    }
}

/// The root of `(1-p)^(2d) = 1/d` in `(0,1)`: `1 - d^(-1/(2d))`.
pub fn conjectured_critical_sparsity(d: usize) -> f64 {
    let d = d as f64;
    1.0 - d.powf(-1.0 / (2.0 * d))
}

/// Sweeps Bernoulli-Gaussian sparsity `p` over a grid at fixed `(n, d)` and
/// charts containment frequency against the dense-law prediction.
pub fn sparse_threshold_experiment(
    d: usize,
    n: usize,
    p_grid: &[Q],
    trials: u64,
    master_seed: u64,
    opts: &StudyOptions,
) -> Result<SparseReport, Error> {
    if p_grid.is_empty() {
        return Err(Error::ConfigError("sparsity grid is empty".into()));
    }
    for p in p_grid {
        if !p.is_positive() || p > &Q::one() {
            return Err(Error::ConfigError(format!(
                "sparsity {} outside (0, 1]",
                format_rational(p)
            )));
        }
    }
    let theory = p_exact_f64(n as u64, d as u64);
    let mut points = Vec::new();
    for p in p_grid {
        let spec =
            DistributionSpec::bernoulli_gaussian(p.clone(), DEFAULT_PRECISION_BITS, false);
        let result = hull_point(&spec, n, d, trials, master_seed, opts)?;
        let contains = &result.intervals["contains"];
        points.push(SparsePoint {
            p: p.clone(),
            p_value: p.to_f64().unwrap_or(f64::NAN),
            count: contains.count,
            frequency: contains.frequency,
            lo: contains.lo,
            hi: contains.hi,
            gap_to_dense: (contains.frequency - theory).abs(),
        });
    }
    Ok(SparseReport {
        d,
        n,
        trials_per_point: trials,
        master_seed,
        theory,
        conjectured_critical_p: conjectured_critical_sparsity(d),
        points,
    })
}

// ---------------------------------------------------------------------------
// Asymmetric mean-zero laws

/// Containment frequency under an asymmetric mean-zero law versus the
/// symmetric closed form. No pass/fail: the sign and size of the gap are the
/// observation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub d: usize,
    pub n: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub contains_count: u64,
    pub frequency: f64,
    pub lo: f64,
    pub hi: f64,
    /// `p(n,d)` as an exact `p/q` string.
    pub exact: String,
    /// `p(n,d)` as a double.
    pub theory: f64,
    /// Signed `frequency - p(n,d)`.
    pub gap: f64,
}

/// Runs a hull experiment under a law that need not be symmetric but must
/// have mean exactly zero.
///
/// Finite-atom specs have their mean verified here; asymmetric specs must
/// also declare themselves mean-zero. Symmetric and continuous specs are
/// mean-zero by construction and run unchanged.
pub fn asymmetry_experiment(
    d: usize,
    n: usize,
    spec: &DistributionSpec,
    trials: u64,
    master_seed: u64,
    opts: &StudyOptions,
) -> Result<AsymmetryReport, Error> {
    if let DistributionSpec::DiscreteGeneral {
        declared_mean_zero, ..
    } = spec
    {
        if !declared_mean_zero {
            return Err(Error::MeanZeroRequired);
        }
    }
    if let Some(atoms) = spec.effective_atoms() {
        let mean: Q = atoms.iter().map(|(v, w)| v * w).sum();
        if !mean.is_zero() {
            return Err(Error::MeanZeroRequired);
        }
    }
    let result = hull_point(spec, n, d, trials, master_seed, opts)?;
    let contains = &result.intervals["contains"];
    let exact = p_exact(n as u64, d as u64);
    let theory = p_exact_f64(n as u64, d as u64);
    Ok(AsymmetryReport {
        d,
        n,
        trials,
        master_seed,
        contains_count: contains.count,
        frequency: contains.frequency,
        lo: contains.lo,
        hi: contains.hi,
        exact: format_rational(&exact),
        theory,
        gap: contains.frequency - theory,
    })
}
