//! Exhaustive enumeration of finite-atom laws.
//!
//! For a law with `k` atoms and an `n x d` matrix there are `k^(n*d)` equally
//! structured assignments; walking all of them and weighting each by its
//! exact product probability turns the deciders into closed-form class
//! probabilities. This is the ground truth the Monte Carlo engine is audited
//! against, so it deliberately shares nothing with the sampling path: no
//! RNG, no floats, and the per-class mass is accumulated as integer counts
//! over a common power-of-denominator base.

use crate::error::Error;
use crate::experiment::{fits_small_carrier, ExperimentKind};
use crate::hull::origin_class;
use crate::linalg::Matrix;
use crate::sampling::{validate_spec, DistributionSpec};
use crate::scalar::{Rat128, Scalar};
use crate::simplex::is_feasible;
use crate::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Largest admissible state count `k^(n*d)`. Past this, enumeration stops
/// being a desk-scale operation and callers must fall back to Monte Carlo.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Exact class probabilities of a finite-atom experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactClassProbabilities {
    Hull {
        #[serde(with = "crate::rational::qstring")]
        outside: Q,
        #[serde(with = "crate::rational::qstring")]
        boundary: Q,
        #[serde(with = "crate::rational::qstring")]
        interior: Q,
    },
    Lp {
        #[serde(with = "crate::rational::qstring")]
        bounded: Q,
        #[serde(with = "crate::rational::qstring")]
        unbounded: Q,
    },
}

impl ExactClassProbabilities {
    /// Containment probability (boundary + interior); hull kind only.
    pub fn contains(&self) -> Option<Q> {
        match self {
            ExactClassProbabilities::Hull {
                boundary, interior, ..
            } => Some(boundary.clone() + interior.clone()),
            ExactClassProbabilities::Lp { .. } => None,
        }
    }

    /// `(class name, probability)` pairs in a fixed order.
    pub fn classes(&self) -> Vec<(&'static str, Q)> {
        match self {
            ExactClassProbabilities::Hull {
                outside,
                boundary,
                interior,
            } => vec![
                ("outside", outside.clone()),
                ("boundary", boundary.clone()),
                ("interior", interior.clone()),
            ],
            ExactClassProbabilities::Lp { bounded, unbounded } => vec![
                ("bounded", bounded.clone()),
                ("unbounded", unbounded.clone()),
            ],
        }
    }
}

/// Walks every atom assignment of an `n x d` matrix, classifies it exactly,
/// and returns the exact probability of each class.
///
/// LP-kind enumeration needs a fixed rational cost vector. The number of
/// states `k^(n*d)` must stay within [`ENUMERATION_GUARD`].
pub fn enumerate_exact(
    spec: &DistributionSpec,
    n: usize,
    d: usize,
    kind: ExperimentKind,
    cost: Option<&[Q]>,
) -> Result<ExactClassProbabilities, Error> {
    validate_spec(spec)?;
    if n == 0 || d == 0 {
        return Err(Error::ConfigError("n and d must be at least 1".into()));
    }
    let atoms = spec.effective_atoms().ok_or(Error::FiniteAtomsRequired)?;
    let k = atoms.len();
    let cells = n
        .checked_mul(d)
        .ok_or_else(|| Error::ConfigError("n * d overflows".into()))?;
    let states = u32::try_from(cells)
        .ok()
        .and_then(|c| (k as u128).checked_pow(c))
        .unwrap_or(u128::MAX);
    if states > u128::from(ENUMERATION_GUARD) {
        return Err(Error::TooLargeToEnumerate {
            states,
            guard: ENUMERATION_GUARD,
        });
    }

    let cost = match kind {
        ExperimentKind::Hull => None,
        ExperimentKind::Lp => {
            let c = cost.ok_or_else(|| {
                Error::ConfigError(
                    "enumeration of LP experiments requires a fixed cost vector".into(),
                )
            })?;
            if c.len() != d {
                return Err(Error::DimensionMismatch {
                    context: format!("cost vector has {} entries, expected {}", c.len(), d),
                });
            }
            if c.iter().all(Zero::is_zero) {
                return Err(Error::ZeroCostVector);
            }
            Some(c.to_vec())
        }
    };

    // Atom weights as integer counts over a common denominator: the mass of
    // an assignment is a product of counts, and the total mass is an exact
    // power of the base.
    let mut base = BigInt::one();
    for (_, w) in &atoms {
        base = base.lcm(w.denom());
    }
    let counts: Vec<BigInt> = atoms
        .iter()
        .map(|(_, w)| w.numer() * (&base / w.denom()))
        .collect();
    assert!(
        counts.iter().sum::<BigInt>() == base,
        "internal: atom weights do not sum to one"
    );
    let total_mass = num_traits::pow(base, cells);

    let values: Vec<Q> = atoms.into_iter().map(|(v, _)| v).collect();
    let mut carrier_probe: Vec<Q> = values.clone();
    if let Some(c) = &cost {
        carrier_probe.extend(c.iter().cloned());
    }
    let small: Option<(Vec<Rat128>, Vec<Rat128>)> = if fits_small_carrier(&carrier_probe, d) {
        let vals: Option<Vec<Rat128>> = values.iter().map(Rat128::from_big).collect();
        let cvals: Option<Vec<Rat128>> = cost
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .map(Rat128::from_big)
            .collect();
        vals.zip(cvals)
    } else {
        None
    };

    let mut tallies = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut digits = vec![0usize; cells];
    'states: loop {
        let mass: BigInt = digits.iter().map(|&e| &counts[e]).product();
        let slot = match (&small, &cost) {
            (Some((vals, _)), None) => hull_slot(classify_assignment(&digits, vals, n, d)?),
            (None, None) => hull_slot(classify_assignment(&digits, &values, n, d)?),
            (Some((vals, cvals)), Some(_)) => lp_slot(decide_assignment(&digits, vals, cvals, n, d)?),
            (None, Some(c)) => lp_slot(decide_assignment(&digits, &values, c, n, d)?),
        };
        tallies[slot] += mass;

        let mut pos = 0;
        loop {
            if pos == cells {
                break 'states;
            }
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
    assert!(
        tallies.iter().sum::<BigInt>() == total_mass,
        "internal: enumeration lost probability mass"
    );

    let prob = |t: &BigInt| Q::new(t.clone(), total_mass.clone());
    Ok(match kind {
        ExperimentKind::Hull => ExactClassProbabilities::Hull {
            outside: prob(&tallies[0]),
            boundary: prob(&tallies[1]),
            interior: prob(&tallies[2]),
        },
        ExperimentKind::Lp => ExactClassProbabilities::Lp {
            bounded: prob(&tallies[0]),
            unbounded: prob(&tallies[1]),
        },
    })
}

fn hull_slot(class: crate::hull::OriginClass) -> usize {
    match class {
        crate::hull::OriginClass::Outside => 0,
        crate::hull::OriginClass::Boundary => 1,
        crate::hull::OriginClass::Interior => 2,
    }
}

fn lp_slot(bounded: bool) -> usize {
    usize::from(!bounded)
}

fn assignment_matrix<S: Scalar>(
    digits: &[usize],
    values: &[S],
    n: usize,
    d: usize,
) -> Matrix<S> {
    let data: Vec<S> = digits.iter().map(|&e| values[e].clone()).collect();
    Matrix::new(n, d, data).expect("assignment shape")
}

fn classify_assignment<S: Scalar>(
    digits: &[usize],
    values: &[S],
    n: usize,
    d: usize,
) -> Result<crate::hull::OriginClass, Error> {
    origin_class(&assignment_matrix(digits, values, n, d))
}

/// Boundedness of `max <c,x> s.t. Ax <= 1` as cone membership of `c`.
fn decide_assignment<S: Scalar>(
    digits: &[usize],
    values: &[S],
    cost: &[S],
    n: usize,
    d: usize,
) -> Result<bool, Error> {
    let a = assignment_matrix(digits, values, n, d);
    is_feasible(&a.transpose(), cost)
}
