//! Exact boundedness of `max <x, c>` subject to `Ax <= 1`, with certificates.
//!
//! Since `x = 0` is always feasible, the program is bounded exactly when `c`
//! lies in the cone spanned by the rows of `A` (LP duality): a nonnegative
//! `lambda` with `A^T lambda = c` bounds the objective by `sum lambda_i`,
//! while a Farkas vector for that system is precisely a recession ray
//! `y` of `{Ax <= 1}` with `<c, y> > 0`, along which the objective grows
//! without limit. Boundedness is therefore one exact feasibility solve, not
//! an optimization run.
//!
//! The hull classifier and this decider overlap on a deterministic sandwich:
//! the origin interior to `conv(rows(A) + {-c})` forces boundedness, and
//! boundedness forces the origin into that hull. [`sandwich_check`] runs
//! both deciders and reports the implications; experiment drivers use it as
//! a cross-check between the two independent code paths.

use crate::error::Error;
use crate::fastpath::certified_feasible;
use crate::hull::{classify_origin, HullVerdict, OriginClass};
use crate::linalg::{dot, mat_vec, Matrix};
use crate::scalar::Scalar;
use crate::simplex::{solve_feasibility, FeasibilityOutcome};
use num_traits::Zero;

/// The random linear program `max <x, c>` s.t. `Ax <= 1`: constraint rows
/// `A` (n x d) and a nonzero cost `c`; the all-ones right-hand side is
/// implicit and fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPInstance<S> {
    a: Matrix<S>,
    c: Vec<S>,
}

impl<S: Scalar> LPInstance<S> {
    /// Validates `n >= 1`, `d >= 1`, matching dimensions, and `c != 0`.
    pub fn new(a: Matrix<S>, c: Vec<S>) -> Result<Self, Error> {
        if a.rows() == 0 {
            return Err(Error::EmptyPointSet);
        }
        if c.len() != a.cols() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "constraint matrix has {} columns but cost vector has {} entries",
                    a.cols(),
                    c.len()
                ),
            });
        }
        if c.iter().all(Zero::is_zero) {
            return Err(Error::ZeroCostVector);
        }
        Ok(LPInstance { a, c })
    }

    pub fn constraints(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn cost(&self) -> &[S] {
        &self.c
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }
}

/// Boundedness with its proof: cone weights or a recession ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundednessVerdict<S> {
    /// `weights >= 0` with `A^T weights = c`; certifies the objective is
    /// bounded by `sum weights_i` on the feasible set.
    Bounded(Vec<S>),
    /// Ray `y` with `Ay <= 0` and `<c, y> > 0`: feasibility is preserved
    /// along `t y` for all `t >= 0` while the objective grows unboundedly.
    Unbounded(Vec<S>),
}

impl<S> BoundednessVerdict<S> {
    pub fn is_bounded(&self) -> bool {
        matches!(self, BoundednessVerdict::Bounded(_))
    }
}

/// Decides boundedness exactly; the returned certificate has been
/// re-verified against the instance.
pub fn is_bounded<S: Scalar>(inst: &LPInstance<S>) -> Result<BoundednessVerdict<S>, Error> {
    let verdict = match solve_feasibility(&inst.a.transpose(), &inst.c)? {
        FeasibilityOutcome::Witness(lambda) => BoundednessVerdict::Bounded(lambda),
        FeasibilityOutcome::FarkasCertificate(y) => BoundednessVerdict::Unbounded(y),
    };
    assert!(
        verify_boundedness(inst, &verdict),
        "internal: boundedness certificate failed exact re-verification"
    );
    Ok(verdict)
}

/// Variant only, skipping certificate materialization: `true` iff bounded.
/// Routes through the float-guided oracle, whose every answer is still
/// proven by an exact integer certificate; agreement with [`is_bounded`] is
/// property-tested.
pub fn is_bounded_fast<S: Scalar>(inst: &LPInstance<S>) -> Result<bool, Error> {
    Ok(certified_feasible(&inst.a.transpose(), &inst.c)?.is_feasible())
}

/// Exact re-check of a verdict's defining (in)equalities against `inst`.
pub fn verify_boundedness<S: Scalar>(inst: &LPInstance<S>, verdict: &BoundednessVerdict<S>) -> bool {
    match verdict {
        BoundednessVerdict::Bounded(lambda) => {
            if lambda.len() != inst.rows() || lambda.iter().any(|l| l < &S::zero()) {
                return false;
            }
            // sum lambda_i row_i = c, checked coordinate by coordinate.
            (0..inst.dim()).all(|j| {
                let mut acc = S::zero();
                for i in 0..inst.rows() {
                    acc = acc + inst.a.get(i, j).clone() * lambda[i].clone();
                }
                acc == inst.c[j]
            })
        }
        BoundednessVerdict::Unbounded(y) => {
            if y.len() != inst.dim() {
                return false;
            }
            mat_vec(&inst.a, y).iter().all(|v| v <= &S::zero())
                && dot(&inst.c, y) > S::zero()
        }
    }
}

/// Joint report of the hull classifier and the boundedness decider on the
/// same instance, with the deterministic implications between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport<S> {
    /// Verdict of `classify_origin` on the rows of `A` with `-c` appended.
    pub hull: HullVerdict<S>,
    pub boundedness: BoundednessVerdict<S>,
    /// Origin interior to the extended hull forces a bounded program.
    pub interior_implies_bounded: bool,
    /// A bounded program forces the origin into the extended hull.
    pub bounded_implies_contained: bool,
    /// Both implications hold.
    pub pass: bool,
}

/// Classifies the origin against `conv(rows(A) + {-c})`, decides
/// boundedness, and checks the two implications that tie them together:
/// Interior implies Bounded (`0 = sum lambda_i r_i - mu c` with positive
/// `mu` rearranges to `c` in the row cone) and Bounded implies the origin is
/// not Outside (`sum lambda_i r_i + 1 * (-c) = 0` normalizes to a convex
/// witness). `-c` is appended as an extra point even when it duplicates a
/// row.
pub fn sandwich_check<S: Scalar>(inst: &LPInstance<S>) -> Result<ConsistencyReport<S>, Error> {
    let (n, d) = (inst.rows(), inst.dim());
    let mut rows: Vec<Vec<S>> = (0..n).map(|i| inst.a.row(i).to_vec()).collect();
    rows.push(inst.c.iter().map(|x| S::zero() - x.clone()).collect());
    let points = Matrix::from_rows(rows).expect("n rows of width d plus one");
    debug_assert_eq!(points.cols(), d);
    let hull = classify_origin(&points)?;
    let boundedness = is_bounded(inst)?;
    let interior_implies_bounded =
        hull.class != OriginClass::Interior || boundedness.is_bounded();
    let bounded_implies_contained =
        !boundedness.is_bounded() || hull.class != OriginClass::Outside;
    let pass = interior_implies_bounded && bounded_implies_contained;
    Ok(ConsistencyReport {
        hull,
        boundedness,
        interior_implies_bounded,
        bounded_implies_contained,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qmat_i64, Q};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn qv(vals: &[i64]) -> Vec<Q> {
        vals.iter().map(|&v| Q::from_i64(v)).collect()
    }

    fn inst(rows: Vec<Vec<i64>>, c: &[i64]) -> LPInstance<Q> {
        LPInstance::new(qmat_i64(rows), qv(c)).unwrap()
    }

    #[test]
    fn textbook_instances() {
        // max x s.t. x <= 1: bounded by the single row itself.
        let v = is_bounded(&inst(vec![vec![1]], &[1])).unwrap();
        assert_eq!(v, BoundednessVerdict::Bounded(qv(&[1])));

        // max x s.t. -x <= 1: x runs away upward.
        let v = is_bounded(&inst(vec![vec![-1]], &[1])).unwrap();
        assert_eq!(v, BoundednessVerdict::Unbounded(qv(&[1])));

        // Quadrant constraints, cost pointing out of the cone.
        let v = is_bounded(&inst(vec![vec![1, 0], vec![0, 1]], &[-1, 0])).unwrap();
        assert_eq!(v, BoundednessVerdict::Unbounded(qv(&[-1, 0])));

        // Same constraints, cost inside the cone.
        let v = is_bounded(&inst(vec![vec![1, 0], vec![0, 1]], &[1, 1])).unwrap();
        assert_eq!(v, BoundednessVerdict::Bounded(qv(&[1, 1])));
    }

    #[test]
    fn sandwich_examples() {
        // Rows e_1, e_2, (-1,-1) with c = (1,1): hull of the four points
        // (rows plus -c, a duplicate of the third) surrounds the origin.
        let r = sandwich_check(&inst(vec![vec![1, 0], vec![0, 1], vec![-1, -1]], &[1, 1])).unwrap();
        assert_eq!(r.hull.class, OriginClass::Interior);
        assert!(r.boundedness.is_bounded());
        assert!(r.pass);

        // A = [-1], c = (1): both points are -1, the hull misses 0.
        let r = sandwich_check(&inst(vec![vec![-1]], &[1])).unwrap();
        assert_eq!(r.hull.class, OriginClass::Outside);
        assert!(!r.boundedness.is_bounded());
        assert!(r.pass);

        // A = [1], c = (1): points {1, -1} straddle 0 on the line.
        let r = sandwich_check(&inst(vec![vec![1]], &[1])).unwrap();
        assert_eq!(r.hull.class, OriginClass::Interior);
        assert!(r.boundedness.is_bounded());
        assert!(r.pass);
    }

    #[test]
    fn verdicts_reverify_and_forgeries_fail() {
        let i = inst(vec![vec![1, 0], vec![0, 1]], &[1, 1]);
        let honest = is_bounded(&i).unwrap();
        assert!(verify_boundedness(&i, &honest));
        // Wrong weights: sum to c in one coordinate only.
        assert!(!verify_boundedness(&i, &BoundednessVerdict::Bounded(qv(&[1, 0]))));
        // Negative weights are rejected even if the combination matches:
        // 0*(1,0) - 1*(-1,0) + 1*(0,1) = (1,1) = c, but weights must be >= 0.
        let j = inst(vec![vec![1, 0], vec![-1, 0], vec![0, 1]], &[1, 1]);
        assert!(!verify_boundedness(
            &j,
            &BoundednessVerdict::Bounded(qv(&[0, -1, 1]))
        ));
        // A ray against a bounded instance violates Ay <= 0 or <c,y> > 0.
        assert!(!verify_boundedness(&i, &BoundednessVerdict::Unbounded(qv(&[1, 1]))));
        assert!(!verify_boundedness(&i, &BoundednessVerdict::Unbounded(qv(&[-1, -1]))));
        // Length mismatches never verify.
        assert!(!verify_boundedness(&i, &BoundednessVerdict::Bounded(qv(&[1]))));
        assert!(!verify_boundedness(&i, &BoundednessVerdict::Unbounded(qv(&[1]))));
    }

    #[test]
    fn construction_contract() {
        assert!(matches!(
            LPInstance::new(Matrix::<Q>::new(0, 2, vec![]).unwrap(), qv(&[1, 0])),
            Err(Error::EmptyPointSet)
        ));
        assert!(matches!(
            LPInstance::new(qmat_i64(vec![vec![1, 0]]), qv(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            LPInstance::new(qmat_i64(vec![vec![1, 0]]), qv(&[0, 0])),
            Err(Error::ZeroCostVector)
        ));
    }

    #[test]
    fn variant_is_invariant_under_positive_scalings() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5CA1E);
        let entry = |rng: &mut ChaCha8Rng| {
            let n = (rng.next_u32() % 9) as i64 - 4;
            let d = 1 + (rng.next_u32() % 3) as i64;
            Q::new(n.into(), d.into())
        };
        let alphas = [Q::from_i64(2), Q::new(1.into(), 3.into()), Q::new(7.into(), 2.into())];
        let mut checked = 0;
        for _ in 0..300 {
            let d = 1 + (rng.next_u32() as usize) % 3;
            let n = 1 + (rng.next_u32() as usize) % 4;
            let a = Matrix::from_rows(
                (0..n)
                    .map(|_| (0..d).map(|_| entry(&mut rng)).collect())
                    .collect::<Vec<Vec<Q>>>(),
            )
            .unwrap();
            let c: Vec<Q> = (0..d).map(|_| entry(&mut rng)).collect();
            let Ok(base) = LPInstance::new(a.clone(), c.clone()) else {
                continue; // all-zero cost draw
            };
            checked += 1;
            let want = is_bounded(&base).unwrap().is_bounded();
            assert_eq!(is_bounded_fast(&base).unwrap(), want);
            for alpha in &alphas {
                // Cost scaling.
                let scaled_c: Vec<Q> = c.iter().map(|x| x.clone() * alpha.clone()).collect();
                let i2 = LPInstance::new(a.clone(), scaled_c).unwrap();
                assert_eq!(is_bounded(&i2).unwrap().is_bounded(), want);
                // Scaling a single row.
                let pick = (rng.next_u32() as usize) % n;
                let rows: Vec<Vec<Q>> = (0..n)
                    .map(|i| {
                        a.row(i)
                            .iter()
                            .map(|x| {
                                if i == pick {
                                    x.clone() * alpha.clone()
                                } else {
                                    x.clone()
                                }
                            })
                            .collect()
                    })
                    .collect();
                let i3 = LPInstance::new(Matrix::from_rows(rows).unwrap(), c.clone()).unwrap();
                assert_eq!(is_bounded(&i3).unwrap().is_bounded(), want);
            }
        }
        assert!(checked > 250, "too many degenerate draws: {checked}");
    }

    /// Independent 2-d oracle: `c` lies in `cone{r_1, ..., r_n}` iff some
    /// pair (or single ray) expresses it with nonnegative coefficients
    /// (Caratheodory for cones needs at most d = 2 generators). Solved by
    /// Cramer's rule per pair, no simplex involved.
    fn cone_oracle_2d(rows: &[(i64, i64)], c: (i64, i64)) -> bool {
        let q = |x: i64| Q::from_i64(x);
        let nonneg_multiple = |r: (i64, i64)| {
            // c = t r with t >= 0?
            if r == (0, 0) {
                return c == (0, 0);
            }
            if r.0 * c.1 != r.1 * c.0 {
                return false;
            }
            let t_num = if r.0 != 0 { c.0 } else { c.1 };
            let t_den = if r.0 != 0 { r.0 } else { r.1 };
            t_num == 0 || (t_num > 0) == (t_den > 0)
        };
        for (i, &ri) in rows.iter().enumerate() {
            if nonneg_multiple(ri) {
                return true;
            }
            for &rj in rows.iter().skip(i + 1) {
                let det = ri.0 * rj.1 - ri.1 * rj.0;
                if det == 0 {
                    continue;
                }
                // alpha ri + beta rj = c via Cramer.
                let alpha = (q(c.0) * q(rj.1) - q(c.1) * q(rj.0)) / q(det);
                let beta = (q(ri.0) * q(c.1) - q(ri.1) * q(c.0)) / q(det);
                if alpha >= Q::zero() && beta >= Q::zero() {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn exhaustive_sign_matrices_match_ray_pair_oracle() {
        // Every 3x2 sign matrix, cost e_1.
        for mask in 0..64u32 {
            let bit = |p: u32| if mask >> p & 1 == 0 { -1i64 } else { 1 };
            let rows = [(bit(0), bit(1)), (bit(2), bit(3)), (bit(4), bit(5))];
            let i = inst(rows.iter().map(|&(a, b)| vec![a, b]).collect(), &[1, 0]);
            let got = is_bounded(&i).unwrap().is_bounded();
            assert_eq!(got, cone_oracle_2d(&rows, (1, 0)), "mask {mask:#08b}");
            assert_eq!(got, is_bounded_fast(&i).unwrap(), "fast path, mask {mask:#08b}");
        }
    }

    #[test]
    fn sandwich_holds_on_random_rational_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5AD1);
        let entry = |rng: &mut ChaCha8Rng| {
            let n = (rng.next_u32() % 7) as i64 - 3;
            let d = 1 + (rng.next_u32() % 3) as i64;
            Q::new(n.into(), d.into())
        };
        let mut seen_unbounded = false;
        let mut seen_bounded = false;
        for _ in 0..400 {
            let d = 1 + (rng.next_u32() as usize) % 3;
            let n = 1 + (rng.next_u32() as usize) % 5;
            let a = Matrix::from_rows(
                (0..n)
                    .map(|_| (0..d).map(|_| entry(&mut rng)).collect())
                    .collect::<Vec<Vec<Q>>>(),
            )
            .unwrap();
            let c: Vec<Q> = (0..d).map(|_| entry(&mut rng)).collect();
            let Ok(i) = LPInstance::new(a, c) else {
                continue;
            };
            let r = sandwich_check(&i).unwrap();
            assert!(r.pass, "sandwich violated on {i:?}");
            seen_bounded |= r.boundedness.is_bounded();
            seen_unbounded |= !r.boundedness.is_bounded();
        }
        assert!(seen_bounded && seen_unbounded, "draws never exercised both variants");
    }

    #[test]
    fn unit_cost_against_its_own_negation() {
        // A single row -e_1 with cost e_1: hull {(-1), (-1)} misses zero and
        // the report must still pass (Outside pairs with Unbounded).
        let r = sandwich_check(&inst(vec![vec![-1, 0]], &[1, 0])).unwrap();
        assert_eq!(r.hull.class, OriginClass::Outside);
        assert!(!r.boundedness.is_bounded());
        assert!(r.pass);
    }
}
