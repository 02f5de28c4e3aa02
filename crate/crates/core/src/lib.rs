//! Exact-arithmetic toolkit for origin containment in random convex hulls
//! and boundedness of random linear programs.
//!
//! Every geometric verdict in this crate is decided over the rationals and
//! ships with a certificate that can be re-checked independently:
//!
//! * `hull::classify_origin` places the origin outside / on the boundary /
//!   in the interior of `conv{X_1, ..., X_n}`, returning convex weights or a
//!   separating functional as proof.
//! * `lp::is_bounded` decides whether `max <x,c> s.t. Ax <= 1` is bounded,
//!   returning nonnegative cone weights or an explicit recession ray.
//! * `wendel` evaluates the closed-form containment probability for
//!   symmetric continuous entries, exactly and in stable floating point.
//! * `experiment` runs seeded, reproducible experiments (frequency vs.
//!   theory, phase-transition sweeps, exhaustive enumeration of finite-atom
//!   laws) on top of the exact deciders.
//!
//! Floating point appears only where a contract asks for it (stable
//! probability evaluation, summary statistics, distribution parameters);
//! none of the decision paths round.
//!
//! The scalar type is generic: the default [`Q`] is an arbitrary-precision
//! rational, while kernels whose intermediate determinants provably fit in
//! 128 bits can run on the faster fixed-width [`Rat128`]. Both implement
//! [`scalar::Scalar`].

pub mod enumerate;
pub mod error;
pub mod experiment;
pub mod fastpath;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod sampling;
pub mod scalar;
pub mod simplex;
pub mod stats;
pub mod studies;
pub mod wendel;

pub use enumerate::{enumerate_exact, ExactClassProbabilities, ENUMERATION_GUARD};
pub use error::Error;
pub use experiment::{
    run_experiment, run_experiment_with, run_hull_experiment, run_lp_experiment, ClassCounts,
    ExperimentConfig, ExperimentKind, ExperimentResult, FrequencyInterval, RunOptions, RunOutput,
    TheoryProbability,
};
pub use fastpath::{certified_feasible, fast_origin_class, FastFeasibility};
pub use hull::{
    affine_hull_dim, classify_origin, contains_origin, interior_contains_origin, origin_class,
    verify_verdict, ContainmentOutcome, HullVerdict, InteriorOutcome, OriginClass,
};
pub use linalg::{rank, Matrix};
pub use lp::{
    is_bounded, is_bounded_fast, sandwich_check, verify_boundedness, BoundednessVerdict,
    ConsistencyReport, LPInstance,
};
pub use scalar::{Int, Rat128, Scalar};
pub use simplex::{is_feasible, solve_feasibility, verify_outcome, FeasibilityOutcome};
pub use studies::{
    asymmetry_experiment, boundary_decay, conjectured_critical_sparsity,
    sparse_threshold_experiment, sweep, AsymmetryReport, DecayFit, DecayPoint, DecayReport,
    SparsePoint, SparseReport, StudyOptions, SweepPoint, SweepReport,
};

/// Arbitrary-precision rational scalar; the default coordinate type.
pub type Rational = num_rational::BigRational;
/// Short alias for [`Rational`], used pervasively in signatures and tests.
pub type Q = Rational;
pub type QVector = Vec<Q>;
pub type QMatrix = linalg::Matrix<Q>;

/// Builds a `Vec<Q>` from `(numerator, denominator)` pairs.
///
/// ```
/// use originlab::{qvec, Q};
/// let v: Vec<Q> = qvec![(1, 2), (-3, 4)];
/// assert_eq!(v[0].clone() + v[1].clone(), Q::new((-1).into(), 4.into()));
/// ```
#[doc(hidden)]
pub use num_bigint;

#[macro_export]
macro_rules! qvec {
    ($(($n:expr, $d:expr)),* $(,)?) => {
        vec![$($crate::Q::new(
            $crate::num_bigint::BigInt::from($n),
            $crate::num_bigint::BigInt::from($d),
        )),*]
    };
}

/// Builds a rational matrix from integer rows; handy in tests and examples.
pub fn qmat_i64(rows: Vec<Vec<i64>>) -> QMatrix {
    Matrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(Q::from_i64).collect())
            .collect(),
    )
    .expect("rows of equal length")
}
