//! Exact LP feasibility with machine-checkable certificates.
//!
//! `solve_feasibility` decides `{lambda >= 0 : M lambda = b}` by a phase-1
//! simplex using Bland's smallest-index rule (termination under the massive
//! degeneracy of +-1 data). Pivoting is fraction-free: each row of `[M | b]`
//! is scaled to integers, and the tableau stores `delta * X` for the current
//! basis determinant `delta > 0`, so every entry stays an integer minor of
//! the input and no per-operation gcd reduction is needed.
//!
//! Certificates are verified *before* leaving the integer world: the basic
//! solution (numerators over `delta`) or the dual multipliers (adjugate
//! numerators over the basis determinant) are checked against the cleared
//! system with plain integer multiplications. Positive scalings preserve the
//! defining (in)equalities exactly, so this is the same proof as a rational
//! re-check but without any gcd normalization, which is what lets desk-scale
//! Monte Carlo runs finish on one core. Rational certificates are then
//! materialized only at the public boundary (one gcd per entry); the
//! decide-only entry point [`is_feasible`] skips even that. An internal
//! arithmetic fault can therefore panic, but never yield a wrong verdict.

use crate::error::Error;
use crate::linalg::{clear_and_flip, clear_rows, Matrix};
use crate::scalar::{Int, Scalar};

/// Outcome of an exact feasibility solve: either a point of the system or a
/// Farkas certificate of emptiness (`y^T M <= 0`, `y^T b > 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityOutcome<S> {
    Witness(Vec<S>),
    FarkasCertificate(Vec<S>),
}

impl<S> FeasibilityOutcome<S> {
    pub fn is_witness(&self) -> bool {
        matches!(self, FeasibilityOutcome::Witness(_))
    }
}

/// Decides `{lambda >= 0 : M lambda = b}` exactly, returning a verified
/// certificate either way.
pub fn solve_feasibility<S: Scalar>(
    m: &Matrix<S>,
    b: &[S],
) -> Result<FeasibilityOutcome<S>, Error> {
    match solve_raw(m, b)? {
        RawOutcome::Feasible { numer, delta } => Ok(FeasibilityOutcome::Witness(
            numer
                .into_iter()
                .map(|v| S::from_int_ratio(v, delta.clone()))
                .collect(),
        )),
        RawOutcome::Infeasible { numer, den, sigma } => Ok(FeasibilityOutcome::FarkasCertificate(
            numer
                .into_iter()
                .zip(sigma)
                .map(|(v, s)| S::from_int_ratio(v.mul(&s), den.clone()))
                .collect(),
        )),
    }
}

/// Decides feasibility only. The certificate is still constructed and
/// integer-verified internally; it is just never materialized as rationals,
/// which makes this the right entry point for counting loops.
pub fn is_feasible<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Result<bool, Error> {
    Ok(matches!(solve_raw(m, b)?, RawOutcome::Feasible { .. }))
}

/// Exact re-check of an outcome's defining (in)equalities. Works on scaled
/// integers internally; positive row/column scalings do not change signs.
pub fn verify_outcome<S: Scalar>(m: &Matrix<S>, b: &[S], outcome: &FeasibilityOutcome<S>) -> bool {
    if b.len() != m.rows() {
        return false;
    }
    let (r, k) = (m.rows(), m.cols());
    match outcome {
        FeasibilityOutcome::Witness(lambda) => {
            if lambda.len() != k || lambda.iter().any(S::is_negative) {
                return false;
            }
            // Scale lambda to a common denominator L, every row of [M | b]
            // to integers, and compare sum_j M_ij (L lambda_j) == L b_i.
            let (mi, bi, _) = clear_rows(m, Some(b));
            let scaled = scale_to_common_denominator(lambda);
            (0..r).all(|i| {
                let mut acc = <S::Int as Int>::zero();
                for (j, s) in scaled.numers.iter().enumerate() {
                    if !s.is_zero() {
                        acc = acc.add(&mi.get(i, j).mul(s));
                    }
                }
                acc == bi[i].mul(&scaled.denom)
            })
        }
        FeasibilityOutcome::FarkasCertificate(y) => {
            if y.len() != r {
                return false;
            }
            // Scale y to a common denominator and each column of M (and b as
            // one more column) to integers; only signs matter.
            let scaled = scale_to_common_denominator(y);
            let cleared_cols = clear_rows(&m.transpose(), None).0;
            let yt_m = (0..k).all(|j| {
                let mut acc = <S::Int as Int>::zero();
                for i in 0..r {
                    acc = acc.add(&cleared_cols.get(j, i).mul(&scaled.numers[i]));
                }
                !acc.is_positive()
            });
            if !yt_m {
                return false;
            }
            let bmat = Matrix::from_rows(vec![b.to_vec()]).expect("single row");
            let bint = clear_rows(&bmat, None).0;
            let mut acc = <S::Int as Int>::zero();
            for i in 0..r {
                acc = acc.add(&bint.get(0, i).mul(&scaled.numers[i]));
            }
            acc.is_positive()
        }
    }
}

struct ScaledVector<I> {
    numers: Vec<I>,
    denom: I,
}

/// Writes a rational vector as `numers / denom` with a single positive
/// denominator (the lcm of the reduced denominators).
fn scale_to_common_denominator<S: Scalar>(v: &[S]) -> ScaledVector<S::Int> {
    let one = <S::Int as Int>::one();
    let mut denom = one.clone();
    for x in v {
        let d = x.denom();
        let g = denom.gcd(&d);
        denom = denom.mul(&d.exact_div(&g));
    }
    let numers = v
        .iter()
        .map(|x| x.numer().mul(&denom.exact_div(&x.denom())))
        .collect();
    ScaledVector { numers, denom }
}

enum RawOutcome<I> {
    /// Basic solution: `lambda_j = numer_j / delta`, `delta > 0`.
    Feasible { numer: Vec<I>, delta: I },
    /// Farkas vector: `y_i = numer_i * sigma_i / den`, `den > 0`, where
    /// `sigma` is the signed row scaling back to the original system.
    Infeasible { numer: Vec<I>, den: I, sigma: Vec<I> },
}

/// Clears, solves, and integer-verifies. Every returned outcome has already
/// passed the exact sign/equality checks against the cleared system.
fn solve_raw<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Result<RawOutcome<S::Int>, Error> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "system has {} rows but right-hand side has {} entries",
                m.rows(),
                b.len()
            ),
        });
    }
    let (mh, bh, sigma) = clear_and_flip(m, b);
    let r = m.rows();
    let k = m.cols();
    if r == 0 {
        return Ok(RawOutcome::Feasible {
            numer: vec![<S::Int as Int>::zero(); k],
            delta: <S::Int as Int>::one(),
        });
    }
    let mut tab: Vec<<S as Scalar>::Int> = Vec::with_capacity(r * (k + 1));
    for i in 0..r {
        tab.extend(mh.row(i).iter().cloned());
        tab.push(bh[i].clone());
    }
    match phase_one::<S::Int>(&mut tab, r, k) {
        PhaseOneResult::Feasible { basis, delta } => {
            let cols = k + 1;
            let mut numer = vec![<S::Int as Int>::zero(); k];
            for (i, &var) in basis.iter().enumerate() {
                if var < k {
                    numer[var] = tab[i * cols + k].clone();
                }
            }
            verify_witness_int(&mh, &bh, &numer, &delta);
            Ok(RawOutcome::Feasible { numer, delta })
        }
        PhaseOneResult::Infeasible { basis } => {
            let (numer, den) = basis_multipliers::<S::Int>(&mh, &basis, k)
                .expect("final simplex basis is nonsingular");
            verify_farkas_int(&mh, &bh, &numer);
            Ok(RawOutcome::Infeasible { numer, den, sigma })
        }
    }
}

/// Asserts `numer >= 0` and `M numer == delta * b` over integers: the exact
/// proof obligation of a feasibility witness `lambda = numer / delta`.
pub(crate) fn verify_witness_int<I: Int>(mh: &Matrix<I>, bh: &[I], numer: &[I], delta: &I) {
    assert!(
        numer.iter().all(|v| !v.is_negative()),
        "internal: negative basic value"
    );
    for i in 0..mh.rows() {
        let mut acc = I::zero();
        for (j, v) in numer.iter().enumerate() {
            if !v.is_zero() {
                acc = acc.add(&mh.get(i, j).mul(v));
            }
        }
        assert!(
            acc == bh[i].mul(delta),
            "internal: witness failed exact re-verification"
        );
    }
}

/// Asserts `pi^T M <= 0` columnwise and `pi^T b > 0` over integers: the exact
/// proof obligation of a Farkas vector with numerators `numer` (the positive
/// common denominator cannot change any sign).
pub(crate) fn verify_farkas_int<I: Int>(mh: &Matrix<I>, bh: &[I], numer: &[I]) {
    let r = mh.rows();
    for j in 0..mh.cols() {
        let mut acc = I::zero();
        for i in 0..r {
            acc = acc.add(&numer[i].mul(mh.get(i, j)));
        }
        assert!(
            !acc.is_positive(),
            "internal: Farkas vector failed exact re-verification"
        );
    }
    let mut acc = I::zero();
    for i in 0..r {
        acc = acc.add(&numer[i].mul(&bh[i]));
    }
    assert!(
        acc.is_positive(),
        "internal: Farkas vector failed exact re-verification"
    );
}

enum PhaseOneResult<I> {
    Feasible { basis: Vec<usize>, delta: I },
    Infeasible { basis: Vec<usize> },
}

/// Phase-1 simplex on the integer tableau `tab` (r rows, k original columns
/// plus the right-hand side). Artificial variables k..k+r form the initial
/// basis and are dropped once they leave (they never re-enter; the reduced
/// problem detects infeasibility just as well and Bland's rule still
/// terminates). The artificial columns are not stored: the dual multipliers
/// needed for a Farkas certificate are recovered from the final basis.
fn phase_one<I: Int>(tab: &mut [I], r: usize, k: usize) -> PhaseOneResult<I> {
    let cols = k + 1;
    let mut basis: Vec<usize> = (k..k + r).collect();
    let mut delta = I::one();
    // Scaled reduced-cost row: z[j] = -column sum, z[k] = -(sum of rhs).
    let mut z: Vec<I> = (0..cols)
        .map(|j| {
            let mut acc = I::zero();
            for i in 0..r {
                acc = acc.add(&tab[i * cols + j]);
            }
            Int::neg(&acc)
        })
        .collect();

    let max_pivots = 1000 * (k + r + 10);
    for _ in 0..max_pivots {
        if z[k].is_zero() {
            // Objective already zero: every artificial variable sits at zero.
            return PhaseOneResult::Feasible { basis, delta };
        }
        // Bland entering rule: smallest original index with negative reduced cost.
        let Some(jc) = (0..k).find(|&j| z[j].is_negative()) else {
            return PhaseOneResult::Infeasible { basis };
        };
        // Ratio test, ties broken by smallest basis variable index.
        let mut leave: Option<usize> = None;
        for i in 0..r {
            if tab[i * cols + jc].is_positive() {
                leave = Some(match leave {
                    None => i,
                    Some(l) => {
                        let lhs = tab[i * cols + k].mul(&tab[l * cols + jc]);
                        let rhs = tab[l * cols + k].mul(&tab[i * cols + jc]);
                        match lhs.cmp(&rhs) {
                            std::cmp::Ordering::Less => i,
                            std::cmp::Ordering::Equal if basis[i] < basis[l] => i,
                            _ => l,
                        }
                    }
                });
            }
        }
        let pr = leave.expect("phase-1 objective is bounded below; a pivot row must exist");
        let piv = tab[pr * cols + jc].clone();
        for i in 0..r {
            if i == pr {
                continue;
            }
            let coef = tab[i * cols + jc].clone();
            for j in 0..cols {
                let t = piv.mul(&tab[i * cols + j]);
                let u = coef.mul(&tab[pr * cols + j]);
                tab[i * cols + j] = t.sub(&u).exact_div(&delta);
            }
        }
        let zcoef = z[jc].clone();
        for j in 0..cols {
            let t = piv.mul(&z[j]);
            let u = zcoef.mul(&tab[pr * cols + j]);
            z[j] = t.sub(&u).exact_div(&delta);
        }
        delta = piv;
        basis[pr] = jc;
        debug_assert!(delta.is_positive());
        debug_assert!((0..r).all(|i| !tab[i * cols + k].is_negative()));
    }
    panic!("phase-1 exceeded the pivot budget; anti-cycling rule violated");
}

/// Simplex multipliers of a basis: solves `B^T pi = c_B` exactly (`c_B` = 1
/// on artificial basis variables) and returns the adjugate numerators plus
/// the positive common denominator, so that `pi_i = numer_i / den` relative
/// to the flipped scaled system `mh`. `None` if the basis is singular (cannot
/// happen for a basis produced by `phase_one`, but callers passing guessed
/// bases must handle it).
pub(crate) fn basis_multipliers<I: Int>(
    mh: &Matrix<I>,
    basis: &[usize],
    k: usize,
) -> Option<(Vec<I>, I)> {
    let r = basis.len();
    let one = I::one();
    let zero = I::zero();
    // Row i of B^T is the basis column `basis[i]`; artificial basis
    // variables contribute unit columns.
    let mut data: Vec<I> = Vec::with_capacity(r * r);
    for &var in basis.iter() {
        for a in 0..r {
            if var < k {
                data.push(mh.get(a, var).clone());
            } else {
                data.push(if var - k == a { one.clone() } else { zero.clone() });
            }
        }
    }
    let bt = Matrix::new(r, r, data).expect("square by construction");
    let c_b: Vec<I> = basis
        .iter()
        .map(|&v| if v >= k { one.clone() } else { zero.clone() })
        .collect();
    solve_square_adjugate(bt, c_b)
}

/// Exact solution of a square integer system `A x = rhs` as adjugate
/// numerators over a positive determinant: returns `(numer, den)` with
/// `x_i = numer_i / den`; `None` if singular. Fraction-free Gauss-Jordan:
/// after the sweep the matrix is `det * I` (up to the sign introduced by row
/// swaps, which is normalized away), so no rational back-substitution is
/// needed and the result stays in integers.
pub(crate) fn solve_square_adjugate<I: Int>(mut a: Matrix<I>, mut rhs: Vec<I>) -> Option<(Vec<I>, I)> {
    let n = a.rows();
    debug_assert_eq!(a.cols(), n);
    if n == 0 {
        return Some((vec![], I::one()));
    }
    let mut prev = I::one();
    for col in 0..n {
        let p = (col..n).find(|&i| !a.get(i, col).is_zero())?;
        if p != col {
            for j in 0..n {
                a_swap(&mut a, p * n + j, col * n + j);
            }
            rhs.swap(p, col);
        }
        let piv = a.get(col, col).clone();
        for i in 0..n {
            if i == col {
                continue;
            }
            let coef = a.get(i, col).clone();
            for j in 0..n {
                let t = piv.mul(a.get(i, j));
                let u = coef.mul(a.get(col, j));
                a_set(&mut a, i * n + j, t.sub(&u).exact_div(&prev));
            }
            let t = piv.mul(&rhs[i]);
            let u = coef.mul(&rhs[col]);
            rhs[i] = t.sub(&u).exact_div(&prev);
        }
        prev = piv;
    }
    // Diagonal entries are now all the same signed determinant.
    let det = a.get(n - 1, n - 1).clone();
    debug_assert!((0..n).all(|i| *a.get(i, i) == det));
    if det.is_negative() {
        Some((rhs.iter().map(Int::neg).collect(), Int::neg(&det)))
    } else {
        Some((rhs, det))
    }
}

fn a_swap<T>(m: &mut Matrix<T>, i: usize, j: usize) {
    m.data_mut().swap(i, j);
}

fn a_set<T>(m: &mut Matrix<T>, i: usize, v: T) {
    m.data_mut()[i] = v;
}
