//! Float-guided exact feasibility: a fast oracle for Monte Carlo loops.
//!
//! The exact solver spends essentially all of its time on multiprecision
//! pivots, yet for randomly sampled systems the optimal basis is almost
//! always nondegenerate and easy to find numerically. This module runs a
//! plain `f64` phase-1 simplex to *guess* that basis, then proves the
//! claimed outcome in exact integer arithmetic:
//!
//! * feasible claim: solve `B lambda_B = b` fraction-free on the candidate
//!   basis; every artificial basic value must be exactly zero and every
//!   original one nonnegative, after which the expanded vector satisfies the
//!   full system by construction (still asserted);
//! * infeasible claim: recover the dual multipliers of the candidate basis
//!   and check the Farkas inequalities exactly; a wrong claim simply fails
//!   the checks and is discarded.
//!
//! Any failure (nonfinite floats, iteration cap, singular basis, wrong
//! signs) falls back to the fully exact solver, so callers observe exactly
//! the verdicts of [`crate::simplex::is_feasible`] and
//! [`crate::hull::origin_class`], merely faster. Floats steer; integers
//! decide.

use crate::error::Error;
use crate::hull::{exact_rank, OriginClass};
use crate::linalg::{clear_and_flip, Matrix};
use crate::scalar::{Int, Scalar};
use crate::simplex::{basis_multipliers, is_feasible, solve_square_adjugate, verify_witness_int};

/// Feasibility answer with one extra bit used by hull classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FastFeasibility {
    /// `nondegenerate_basic` records that the proving witness came from a
    /// basis of original variables only with every basic value strictly
    /// positive. It is `false` whenever the exact fallback decided, which
    /// reports no basis; callers may only rely on `true`.
    Feasible { nondegenerate_basic: bool },
    Infeasible,
}

impl FastFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FastFeasibility::Feasible { .. })
    }
}

/// Decides `{lambda >= 0 : M lambda = b}` with the float oracle in front.
/// Always returns the same answer as [`is_feasible`].
pub fn certified_feasible<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Result<FastFeasibility, Error> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "system has {} rows but right-hand side has {} entries",
                m.rows(),
                b.len()
            ),
        });
    }
    let (r, k) = (m.rows(), m.cols());
    if r == 0 {
        return Ok(FastFeasibility::Feasible {
            nondegenerate_basic: false,
        });
    }
    let (mh, bh, _sigma) = clear_and_flip(m, b);
    if let Some(out) = float_guided(&mh, &bh, r, k) {
        return Ok(out);
    }
    Ok(if is_feasible(m, b)? {
        FastFeasibility::Feasible {
            nondegenerate_basic: false,
        }
    } else {
        FastFeasibility::Infeasible
    })
}

/// [`crate::hull::origin_class`] with the float oracle in front.
///
/// One extra shortcut is exact: when the containment witness sits on a basis
/// of `d + 1` original variables with strictly positive values, those points
/// are affinely independent (the basis matrix is `[X_i; 1]` columns and it
/// is nonsingular), so the origin lies in the interior of their simplex and
/// hence of the hull; the relative-interior solve and the rank computation
/// are skipped. Positive row scaling of the system does not disturb the
/// basis or the signs, so the flag proven on the cleared system transfers to
/// the original one.
pub fn fast_origin_class<S: Scalar>(points: &Matrix<S>) -> Result<OriginClass, Error> {
    if points.rows() == 0 {
        return Err(Error::EmptyPointSet);
    }
    let (m, d) = (points.rows(), points.cols());
    let mut data: Vec<S> = Vec::with_capacity((d + 1) * m);
    for j in 0..d {
        for i in 0..m {
            data.push(points.get(i, j).clone());
        }
    }
    data.extend(std::iter::repeat(S::one()).take(m));
    let system = Matrix::new(d + 1, m, data).expect("sized above");
    let mut rhs = vec![S::zero(); d];
    rhs.push(S::one());
    match certified_feasible(&system, &rhs)? {
        FastFeasibility::Infeasible => return Ok(OriginClass::Outside),
        FastFeasibility::Feasible {
            nondegenerate_basic: true,
        } => return Ok(OriginClass::Interior),
        FastFeasibility::Feasible { .. } => {}
    }
    let cols = points.transpose();
    let mut neg_sum = vec![S::zero(); d];
    for i in 0..m {
        for j in 0..d {
            neg_sum[j] = neg_sum[j].clone() - points.get(i, j).clone();
        }
    }
    if certified_feasible(&cols, &neg_sum)?.is_feasible() && exact_rank(points) == d {
        Ok(OriginClass::Interior)
    } else {
        Ok(OriginClass::Boundary)
    }
}

/// Runs the float oracle on the cleared system and tries to certify its
/// claim. `None` means "no exactly proven answer here": fall back.
fn float_guided<I: Int>(mh: &Matrix<I>, bh: &[I], r: usize, k: usize) -> Option<FastFeasibility> {
    let cols = k + 1;
    let mut t = vec![0.0f64; r * cols];
    for i in 0..r {
        let mut scale = 0.0f64;
        for j in 0..k {
            let v = mh.get(i, j).to_f64();
            if !v.is_finite() {
                return None;
            }
            t[i * cols + j] = v;
            scale = scale.max(v.abs());
        }
        let v = bh[i].to_f64();
        if !v.is_finite() {
            return None;
        }
        t[i * cols + k] = v;
        scale = scale.max(v.abs());
        if scale > 0.0 {
            for j in 0..cols {
                t[i * cols + j] /= scale;
            }
        }
    }
    let (claims_feasible, basis) = float_phase_one(&mut t, r, k)?;
    if claims_feasible {
        certify_witness(mh, bh, &basis, k)
    } else {
        certify_farkas(mh, bh, &basis, k)
    }
}

/// Classic dense phase-1 simplex (Dantzig pricing, pivot-row division) on a
/// row-normalized float tableau with `r` rows, `k` original columns and the
/// right-hand side in column `k`. Returns the claim and the final basis, or
/// `None` when the run is numerically untrustworthy: no admissible pivot, or
/// the iteration cap was hit (cycling on degenerate data).
fn float_phase_one(t: &mut [f64], r: usize, k: usize) -> Option<(bool, Vec<usize>)> {
    const EPS: f64 = 1e-9;
    const PIVOT_EPS: f64 = 1e-7;
    let cols = k + 1;
    let mut basis: Vec<usize> = (k..k + r).collect();
    let mut z = vec![0.0f64; cols];
    for (j, zj) in z.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..r {
            acc += t[i * cols + j];
        }
        *zj = -acc;
    }
    // z[k] is minus the phase-1 objective; it starts in [-r, 0] after row
    // normalization and rises toward zero.
    let obj_tol = EPS * (1.0 - z[k]).max(1.0);
    let cap = 4 * (r + k) + 40;
    for _ in 0..cap {
        if z[k] >= -obj_tol {
            return Some((true, basis));
        }
        let mut jc = k;
        let mut best = -EPS;
        for (j, zj) in z.iter().enumerate().take(k) {
            if *zj < best {
                best = *zj;
                jc = j;
            }
        }
        if jc == k {
            return Some((false, basis));
        }
        let mut pr = r;
        let mut best_ratio = f64::INFINITY;
        for i in 0..r {
            let a = t[i * cols + jc];
            if a > PIVOT_EPS {
                let ratio = t[i * cols + k] / a;
                if ratio < best_ratio {
                    best_ratio = ratio;
                    pr = i;
                }
            }
        }
        if pr == r {
            return None;
        }
        let piv = t[pr * cols + jc];
        for j in 0..cols {
            t[pr * cols + j] /= piv;
        }
        for i in 0..r {
            if i == pr {
                continue;
            }
            let f = t[i * cols + jc];
            if f != 0.0 {
                for j in 0..cols {
                    t[i * cols + j] -= f * t[pr * cols + j];
                }
                t[i * cols + jc] = 0.0;
            }
        }
        let f = z[jc];
        for j in 0..cols {
            z[j] -= f * t[pr * cols + j];
        }
        z[jc] = 0.0;
        basis[pr] = jc;
    }
    None
}

/// Exact proof attempt for a feasible claim. `None` when the candidate basis
/// is singular, keeps an artificial variable at a nonzero level, or yields a
/// negative basic value; any of those means the float run lied or stopped
/// short, not that the system is infeasible.
fn certify_witness<I: Int>(
    mh: &Matrix<I>,
    bh: &[I],
    basis: &[usize],
    k: usize,
) -> Option<FastFeasibility> {
    let r = basis.len();
    let one = I::one();
    let zero = I::zero();
    let mut data: Vec<I> = Vec::with_capacity(r * r);
    for a in 0..r {
        for &var in basis {
            data.push(if var < k {
                mh.get(a, var).clone()
            } else if var - k == a {
                one.clone()
            } else {
                zero.clone()
            });
        }
    }
    let bsq = Matrix::new(r, r, data).expect("square by construction");
    let (vals, den) = solve_square_adjugate(bsq, bh.to_vec())?;
    let mut nondegenerate = true;
    let mut full = vec![zero; k];
    for (i, &var) in basis.iter().enumerate() {
        let v = &vals[i];
        if v.is_negative() {
            return None;
        }
        if var < k {
            if v.is_zero() {
                nondegenerate = false;
            }
            full[var] = v.clone();
        } else {
            if !v.is_zero() {
                return None;
            }
            nondegenerate = false;
        }
    }
    // The basis solve covers every row and artificial entries are zero, so
    // this holds by construction; failure would be an internal fault.
    verify_witness_int(mh, bh, &full, &den);
    Some(FastFeasibility::Feasible {
        nondegenerate_basic: nondegenerate,
    })
}

/// Exact proof attempt for an infeasible claim: the dual multipliers of the
/// candidate basis must satisfy the Farkas inequalities. Unlike the witness
/// case nothing is implied by the basis solve alone, so the checks reject
/// rather than assert.
fn certify_farkas<I: Int>(
    mh: &Matrix<I>,
    bh: &[I],
    basis: &[usize],
    k: usize,
) -> Option<FastFeasibility> {
    if basis.iter().all(|&v| v < k) {
        // No artificial variable left: the multiplier objective is zero and
        // the resulting vector proves nothing.
        return None;
    }
    let (pi, _den) = basis_multipliers(mh, basis, k)?;
    let r = mh.rows();
    for j in 0..k {
        let mut acc = I::zero();
        for (i, p) in pi.iter().enumerate() {
            if !p.is_zero() {
                acc = acc.add(&p.mul(mh.get(i, j)));
            }
        }
        if acc.is_positive() {
            return None;
        }
    }
    let mut acc = I::zero();
    for i in 0..r {
        acc = acc.add(&pi[i].mul(&bh[i]));
    }
    if acc.is_positive() {
        Some(FastFeasibility::Infeasible)
    } else {
        None
    }
}
