//! Deterministic, seedable sampling of exact-rational random matrices.
//!
//! Every coordinate this module emits is an exact rational: finite-atom laws
//! sample their atoms with exact rational probabilities (a uniform integer
//! draw below the common weight denominator), and continuous laws are
//! rounded to dyadic rationals `m / 2^precision_bits` so that downstream
//! geometry is exact for the realized instance.
//!
//! # Stream derivation
//!
//! Each trial draws from its own ChaCha8 stream whose 256-bit key is derived
//! from [`StreamKey`] `(master_seed, trial_index)` as follows: initialize a
//! SplitMix64 state with `master_seed XOR (0x9E3779B97F4A7C15 *
//! (trial_index + 1))` and take four successive SplitMix64 outputs as the
//! key words (little endian). Trials therefore need no shared generator
//! state, can run concurrently, and reproduce bit-for-bit from
//! `(master_seed, config)` alone regardless of scheduling.
//!
//! Gaussian bits come from the Marsaglia polar transform of 53-bit uniforms
//! (method name `"polar"`, recorded alongside `precision_bits` in result
//! headers). The transform evaluates `ln` and `sqrt` in double precision,
//! so bit-level reproducibility is per build; all exact-rational laws are
//! reproducible unconditionally.

use crate::error::Error;
use crate::linalg::Matrix;
use crate::rational::{dyadic_from_f64, format_rational, parse_rational};
use crate::{Q, QMatrix, QVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Name of the Gaussian bit-generation method, echoed in result headers.
pub const GAUSSIAN_METHOD: &str = "polar";

/// Default dyadic precision for continuous laws.
pub const DEFAULT_PRECISION_BITS: u32 = 53;

/// Identifies one trial's private random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamKey {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        StreamKey {
            master_seed,
            trial_index,
        }
    }

    /// The trial's ChaCha8 generator; see the module docs for the exact
    /// derivation.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = self
            .master_seed
            ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(self.trial_index.wrapping_add(1));
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An entry law for matrix and cost-vector coordinates.
///
/// Serializes to `{kind, p?, atoms?, precision_bits?, normalized?,
/// allow_asymmetric?}` with rationals as `p/q` strings. The optional
/// `subgaussian_bound` is informational only and never enforced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// Fair signs: +1 or -1 with probability 1/2 each.
    Rademacher {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        subgaussian_bound: Option<f64>,
    },
    /// Standard normal, rounded to `m / 2^precision_bits`.
    Gaussian {
        precision_bits: u32,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        subgaussian_bound: Option<f64>,
    },
    /// Product `b * g` of an independent Bernoulli(p) gate and a standard
    /// normal; `normalized` divides by sqrt(p) to restore unit variance.
    BernoulliGaussian {
        #[serde(with = "rational_field")]
        p: Q,
        precision_bits: u32,
        normalized: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        subgaussian_bound: Option<f64>,
    },
    /// Finite atom law required to be symmetric under negation.
    DiscreteSymmetric {
        #[serde(with = "atom_list")]
        atoms: Vec<(Q, Q)>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        subgaussian_bound: Option<f64>,
    },
    /// Finite atom law with no symmetry requirement; must be explicitly
    /// opted into, and a mean-zero declaration is verified exactly.
    DiscreteGeneral {
        #[serde(with = "atom_list")]
        atoms: Vec<(Q, Q)>,
        declared_mean_zero: bool,
        #[serde(default)]
        allow_asymmetric: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        subgaussian_bound: Option<f64>,
    },
}

/// Rationals inside spec JSON: canonical form is the `p/q` string, but bare
/// JSON numbers are accepted on input (converted through their exact binary
/// value).
mod rational_field {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s).map_err(de::Error::custom),
            Raw::Number(x) => Q::from_float(x)
                .ok_or_else(|| de::Error::custom("non-finite number in rational field")),
        }
    }
}

/// Vectors of rationals serialize as lists under the same convention as
/// [`rational_field`].
mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = v.iter().map(format_rational).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QVector, D::Error> {
        let text: Vec<String> = Vec::deserialize(d)?;
        text.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Atom lists serialize as `[[value, weight], ...]` with `p/q` strings.
mod atom_list {
    use super::*;

    pub fn serialize<S: Serializer>(atoms: &[(Q, Q)], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<[String; 2]> = atoms
            .iter()
            .map(|(v, w)| [format_rational(v), format_rational(w)])
            .collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Q, Q)>, D::Error> {
        let text: Vec<[String; 2]> = Vec::deserialize(d)?;
        text.into_iter()
            .map(|[v, w]| {
                Ok((
                    parse_rational(&v).map_err(de::Error::custom)?,
                    parse_rational(&w).map_err(de::Error::custom)?,
                ))
            })
            .collect()
    }
}

impl DistributionSpec {
    pub fn rademacher() -> Self {
        DistributionSpec::Rademacher {
            subgaussian_bound: None,
        }
    }

    pub fn gaussian(precision_bits: u32) -> Self {
        DistributionSpec::Gaussian {
            precision_bits,
            subgaussian_bound: None,
        }
    }

    pub fn bernoulli_gaussian(p: Q, precision_bits: u32, normalized: bool) -> Self {
        DistributionSpec::BernoulliGaussian {
            p,
            precision_bits,
            normalized,
            subgaussian_bound: None,
        }
    }

    pub fn discrete_symmetric(atoms: Vec<(Q, Q)>) -> Self {
        DistributionSpec::DiscreteSymmetric {
            atoms,
            subgaussian_bound: None,
        }
    }

    /// The atom list when the law is finitely supported.
    pub fn atoms(&self) -> Option<&[(Q, Q)]> {
        match self {
            DistributionSpec::DiscreteSymmetric { atoms, .. }
            | DistributionSpec::DiscreteGeneral { atoms, .. } => Some(atoms),
            DistributionSpec::Rademacher { .. } => None,
            _ => None,
        }
    }

    /// Rademacher viewed as its two-atom law; used by exhaustive
    /// enumeration, which needs explicit atoms.
    pub fn effective_atoms(&self) -> Option<Vec<(Q, Q)>> {
        match self {
            DistributionSpec::Rademacher { .. } => {
                let half = Q::new(BigInt::one(), BigInt::from(2));
                Some(vec![
                    (Q::one(), half.clone()),
                    (-Q::one(), half),
                ])
            }
            _ => self.atoms().map(<[_]>::to_vec),
        }
    }
}

/// Checks the structural invariants of a spec; every sampler calls this
/// before drawing.
pub fn validate_spec(spec: &DistributionSpec) -> Result<(), Error> {
    match spec {
        DistributionSpec::Rademacher { .. } => Ok(()),
        DistributionSpec::Gaussian { precision_bits, .. } => {
            check_precision(*precision_bits)
        }
        DistributionSpec::BernoulliGaussian {
            p, precision_bits, ..
        } => {
            check_precision(*precision_bits)?;
            if p.is_negative() || p > &Q::one() {
                return Err(Error::WeightError(format!(
                    "sparsity p = {} outside [0, 1]",
                    format_rational(p)
                )));
            }
            weight_denominator(&[(Q::zero(), Q::one() - p.clone()), (Q::one(), p.clone())])?;
            Ok(())
        }
        DistributionSpec::DiscreteSymmetric { atoms, .. } => {
            check_atoms(atoms)?;
            // Symmetry: the weight of value v must equal the weight of -v.
            for (v, w) in atoms {
                let neg = -v.clone();
                let matched = atoms.iter().find(|(u, _)| *u == neg);
                match matched {
                    Some((_, w2)) if w2 == w => {}
                    _ => {
                        return Err(Error::SymmetryViolation(format!(
                            "atom {} (weight {}) has no mirror atom of equal weight",
                            format_rational(v),
                            format_rational(w)
                        )))
                    }
                }
            }
            Ok(())
        }
        DistributionSpec::DiscreteGeneral {
            atoms,
            declared_mean_zero,
            allow_asymmetric,
            ..
        } => {
            check_atoms(atoms)?;
            if !allow_asymmetric {
                return Err(Error::SymmetryViolation(
                    "general atom laws require the allow_asymmetric flag".into(),
                ));
            }
            if *declared_mean_zero {
                let mean: Q = atoms
                    .iter()
                    .map(|(v, w)| v.clone() * w.clone())
                    .fold(Q::zero(), |a, b| a + b);
                if !mean.is_zero() {
                    return Err(Error::WeightError(format!(
                        "declared mean zero, but the exact mean is {}",
                        format_rational(&mean)
                    )));
                }
            }
            Ok(())
        }
    }
}

fn check_precision(bits: u32) -> Result<(), Error> {
    if bits == 0 {
        Err(Error::ConfigError("precision_bits must be >= 1".into()))
    } else if bits > 512 {
        Err(Error::ConfigError(
            "precision_bits beyond 512 serves no purpose here".into(),
        ))
    } else {
        Ok(())
    }
}

fn check_atoms(atoms: &[(Q, Q)]) -> Result<(), Error> {
    if atoms.is_empty() {
        return Err(Error::WeightError("no atoms given".into()));
    }
    let mut total = Q::zero();
    for (i, (v, w)) in atoms.iter().enumerate() {
        if w.is_negative() {
            return Err(Error::WeightError(format!(
                "negative weight {} on atom {}",
                format_rational(w),
                format_rational(v)
            )));
        }
        if atoms[..i].iter().any(|(u, _)| u == v) {
            return Err(Error::WeightError(format!(
                "duplicate atom value {}",
                format_rational(v)
            )));
        }
        total = total + w.clone();
    }
    if !total.is_one() {
        return Err(Error::WeightError(format!(
            "weights sum to {}, not 1",
            format_rational(&total)
        )));
    }
    weight_denominator(atoms)?;
    Ok(())
}

/// Common denominator of the atom weights, which must fit in a u64 so that
/// a single uniform integer draw selects an atom exactly.
fn weight_denominator(atoms: &[(Q, Q)]) -> Result<u64, Error> {
    let mut l = BigInt::one();
    for (_, w) in atoms {
        let d = w.denom();
        let g = num_integer::Integer::gcd(&l, d);
        l = l * (d / g);
    }
    l.to_u64().ok_or_else(|| {
        Error::WeightError("weight denominators exceed 64 bits; refuse to sample".into())
    })
}

/// One scalar stream over a trial's generator. Holds the spare value of the
/// polar transform so consecutive Gaussian draws use both outputs.
struct Sampler<'a> {
    spec: &'a DistributionSpec,
    rng: ChaCha8Rng,
    spare_gaussian: Option<f64>,
    /// Precomputed (cumulative counts, denominator, values) for atom laws.
    atom_table: Option<(Vec<u64>, u64, Vec<Q>)>,
}

impl<'a> Sampler<'a> {
    fn new(spec: &'a DistributionSpec, key: StreamKey) -> Result<Self, Error> {
        validate_spec(spec)?;
        let atom_table = match spec.atoms() {
            Some(atoms) => {
                let denom = weight_denominator(atoms)?;
                let mut cum = Vec::with_capacity(atoms.len());
                let mut acc: u64 = 0;
                let mut values = Vec::with_capacity(atoms.len());
                for (v, w) in atoms {
                    let count = (w.numer() * BigInt::from(denom) / w.denom())
                        .to_u64()
                        .expect("count bounded by denominator");
                    acc += count;
                    cum.push(acc);
                    values.push(v.clone());
                }
                debug_assert_eq!(acc, denom);
                Some((cum, denom, values))
            }
            None => None,
        };
        Ok(Sampler {
            spec,
            rng: key.rng(),
            spare_gaussian: None,
            atom_table,
        })
    }

    fn draw(&mut self) -> Result<Q, Error> {
        match self.spec {
            DistributionSpec::Rademacher { .. } => {
                Ok(if self.rng.next_u32() & 1 == 0 {
                    Q::one()
                } else {
                    -Q::one()
                })
            }
            DistributionSpec::Gaussian { precision_bits, .. } => {
                let z = self.gaussian();
                dyadic_from_f64(z, *precision_bits)
            }
            DistributionSpec::BernoulliGaussian {
                p,
                precision_bits,
                normalized,
                ..
            } => {
                if p.is_zero() {
                    return Ok(Q::zero());
                }
                let denom = p.denom().to_u64().expect("validated");
                let thresh = p.numer().to_u64().expect("p in [0,1], validated");
                let gate = self.uniform_below(denom) < thresh;
                if !gate {
                    return Ok(Q::zero());
                }
                let mut z = self.gaussian();
                if *normalized {
                    let pf = p.to_f64().expect("p in [0,1]");
                    z /= pf.sqrt();
                }
                dyadic_from_f64(z, *precision_bits)
            }
            DistributionSpec::DiscreteSymmetric { .. }
            | DistributionSpec::DiscreteGeneral { .. } => {
                let denom = self.atom_table.as_ref().expect("atom law has a table").1;
                let u = uniform_below_rng(&mut self.rng, denom);
                let (cum, _, values) = self.atom_table.as_ref().unwrap();
                let idx = cum.partition_point(|&c| c <= u);
                Ok(values[idx].clone())
            }
        }
    }

    /// Standard normal via the Marsaglia polar transform of 53-bit uniforms.
    fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.unit_f64() - 1.0;
            let v = 2.0 * self.unit_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_gaussian = Some(v * f);
                return u * f;
            }
        }
    }

    /// Uniform in [0, 1) from 53 random bits.
    fn unit_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn uniform_below(&mut self, l: u64) -> u64 {
        uniform_below_rng(&mut self.rng, l)
    }
}

/// Unbiased uniform draw from `{0, ..., l-1}` by rejection.
fn uniform_below_rng(rng: &mut ChaCha8Rng, l: u64) -> u64 {
    debug_assert!(l > 0);
    if l == 1 {
        return 0;
    }
    // Reject the tail of the 64-bit range that would bias the remainder.
    let threshold = l.wrapping_neg() % l;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % l;
        }
    }
}

/// An `n x d` matrix of i.i.d. draws (row-major draw order; each row is one
/// point of the instance).
pub fn sample_matrix(
    spec: &DistributionSpec,
    n: usize,
    d: usize,
    key: StreamKey,
) -> Result<QMatrix, Error> {
    let mut sampler = Sampler::new(spec, key)?;
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n * d {
        data.push(sampler.draw()?);
    }
    Matrix::new(n, d, data)
}

/// Cost-vector source: a fixed exact vector or per-trial sampling.
///
/// JSON form is either a plain array of `p/q` strings (fixed) or a
/// distribution-spec object (sampled); the shapes cannot collide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostChoice {
    Fixed(#[serde(with = "rational_vec")] QVector),
    Sampled(DistributionSpec),
}

/// The cost vector for one trial: either the fixed vector (validated
/// nonzero) or `d` fresh draws, resampled until some coordinate is nonzero.
pub fn sample_cost_vector(
    choice: &CostChoice,
    d: usize,
    key: StreamKey,
) -> Result<QVector, Error> {
    match choice {
        CostChoice::Fixed(c) => {
            if c.len() != d {
                return Err(Error::DimensionMismatch {
                    context: format!("cost vector has {} entries, expected {}", c.len(), d),
                });
            }
            if c.iter().all(Zero::is_zero) {
                return Err(Error::ZeroCostVector);
            }
            Ok(c.clone())
        }
        CostChoice::Sampled(spec) => {
            if law_is_almost_surely_zero(spec) {
                return Err(Error::ZeroCostVector);
            }
            let mut sampler = Sampler::new(spec, key)?;
            loop {
                let v: QVector = (0..d)
                    .map(|_| sampler.draw())
                    .collect::<Result<_, _>>()?;
                if v.iter().any(|x| !x.is_zero()) {
                    return Ok(v);
                }
            }
        }
    }
}

fn law_is_almost_surely_zero(spec: &DistributionSpec) -> bool {
    match spec {
        DistributionSpec::Rademacher { .. } | DistributionSpec::Gaussian { .. } => false,
        DistributionSpec::BernoulliGaussian { p, .. } => p.is_zero(),
        DistributionSpec::DiscreteSymmetric { atoms, .. }
        | DistributionSpec::DiscreteGeneral { atoms, .. } => atoms
            .iter()
            .all(|(v, w)| v.is_zero() || w.is_zero()),
    }
}
