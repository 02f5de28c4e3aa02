//! Dense exact matrices and fraction-free (Bareiss) elimination.
//!
//! Matrices are row-major and generic over the scalar. Rank and kernel
//! computations clear each row to integers first and eliminate with the
//! two-term Bareiss update, so no rational normalization happens inside the
//! loops; zero tests are exact throughout.

use crate::error::Error;
use crate::scalar::{Int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "matrix data length {} does not match {}x{}",
                    data.len(),
                    rows,
                    cols
                ),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "rows of unequal length".into(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Matrix<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

pub fn mat_vec<S: Scalar>(m: &Matrix<S>, v: &[S]) -> Vec<S> {
    (0..m.rows()).map(|i| dot(m.row(i), v)).collect()
}

/// Scales each row of `[m | extra]` by the lcm of its denominators.
///
/// Returns the integer matrix, the integer image of `extra`, and the
/// (positive) scale factor applied to each row. Feasibility of
/// `{x >= 0 : m x = extra}` and kernels are invariant under this scaling.
pub fn clear_rows<S: Scalar>(
    m: &Matrix<S>,
    extra: Option<&[S]>,
) -> (Matrix<S::Int>, Vec<S::Int>, Vec<S::Int>) {
    let one = <S::Int as Int>::one();
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    let mut extra_int = Vec::new();
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut l = one.clone();
        let mut fold = |d: &S::Int| {
            let g = l.gcd(d);
            l = l.mul(&d.exact_div(&g));
        };
        for x in m.row(i) {
            fold(&x.denom());
        }
        if let Some(b) = extra {
            fold(&b[i].denom());
        }
        for x in m.row(i) {
            data.push(x.numer().mul(&l.exact_div(&x.denom())));
        }
        if let Some(b) = extra {
            extra_int.push(b[i].numer().mul(&l.exact_div(&b[i].denom())));
        }
        scales.push(l);
    }
    (
        Matrix {
            rows: m.rows(),
            cols: m.cols(),
            data,
        },
        extra_int,
        scales,
    )
}

/// Cleared integer image of `{x >= 0 : m x = b}` with rows flipped so the
/// right-hand side is nonnegative: returns `(M_int, b_int, sigma)` with
/// `sigma_i * row_i(m) = row_i(M_int)`, `sigma_i * b_i = b_int_i >= 0`.
/// Feasibility and Farkas certificates transfer both ways because every
/// `sigma_i` is nonzero and scaling an equality row is reversible.
pub(crate) fn clear_and_flip<S: Scalar>(
    m: &Matrix<S>,
    b: &[S],
) -> (Matrix<S::Int>, Vec<S::Int>, Vec<S::Int>) {
    let (mut mi, mut bi, mut sigma) = clear_rows(m, Some(b));
    for i in 0..mi.rows {
        if bi[i].is_negative() {
            for j in 0..mi.cols {
                let idx = i * mi.cols + j;
                mi.data[idx] = Int::neg(&mi.data[idx]);
            }
            bi[i] = Int::neg(&bi[i]);
            sigma[i] = Int::neg(&sigma[i]);
        }
    }
    (mi, bi, sigma)
}

/// Exact rank over the rationals.
pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let (mi, _, _) = clear_rows(m, None);
    int_rank(mi)
}

/// Bareiss elimination rank of an integer matrix, with partial pivoting on
/// exact nonzero tests. Consumes the matrix.
pub(crate) fn int_rank<I: Int>(mut a: Matrix<I>) -> usize {
    let (r, c) = (a.rows, a.cols);
    let mut rank = 0;
    let mut prev = I::one();
    for col in 0..c {
        if rank == r {
            break;
        }
        let Some(p) = (rank..r).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..c {
                a.data.swap(p * c + j, rank * c + j);
            }
        }
        let piv_row = rank;
        for i in (rank + 1)..r {
            for j in (col + 1)..c {
                let t = a.get(piv_row, col).mul(a.get(i, j));
                let u = a.get(i, col).mul(a.get(piv_row, j));
                a.data[i * c + j] = t.sub(&u).exact_div(&prev);
            }
            a.data[i * c + col] = I::zero();
        }
        prev = a.get(piv_row, col).clone();
        rank += 1;
    }
    rank
}

/// Some nonzero `y` with `m y = 0`, or `None` when the columns are
/// independent. Echelonizes fraction-free, then back-substitutes one free
/// column over the rationals.
pub fn nullspace_vector<S: Scalar>(m: &Matrix<S>) -> Option<Vec<S>> {
    if m.cols() == 0 {
        return None;
    }
    if m.rows() == 0 {
        let mut y = vec![S::zero(); m.cols()];
        y[0] = S::one();
        return Some(y);
    }
    let (mut a, _, _) = clear_rows(m, None);
    let (r, c) = (a.rows, a.cols);
    let mut prev = <S::Int as Int>::one();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for col in 0..c {
        let rank = pivot_cols.len();
        if rank == r {
            break;
        }
        let Some(p) = (rank..r).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..c {
                a.data.swap(p * c + j, rank * c + j);
            }
        }
        for i in (rank + 1)..r {
            for j in (col + 1)..c {
                let t = a.get(rank, col).mul(a.get(i, j));
                let u = a.get(i, col).mul(a.get(rank, j));
                a.data[i * c + j] = t.sub(&u).exact_div(&prev);
            }
            a.data[i * c + col] = <S::Int as Int>::zero();
        }
        prev = a.get(rank, col).clone();
        pivot_cols.push(col);
    }
    let free = (0..c).find(|j| !pivot_cols.contains(j))?;
    let mut y = vec![S::zero(); c];
    y[free] = S::one();
    for (i, &pc) in pivot_cols.iter().enumerate().rev() {
        if pc > free {
            continue;
        }
        let mut acc = S::zero();
        for j in (pc + 1)..c {
            if !y[j].is_zero() {
                acc = acc + S::from_int(a.get(i, j).clone()) * y[j].clone();
            }
        }
        y[pc] = -acc / S::from_int(a.get(i, pc).clone());
    }
    debug_assert!(y.iter().any(|v| !v.is_zero()));
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qvec, Q};
    use num_traits::Zero;

    fn qmat(rows: Vec<Vec<i64>>) -> Matrix<Q> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Q::from_i64).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_identity_is_full() {
        let m = qmat(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn rank_proportional_rows_is_one() {
        let m = qmat(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn rank_zero_matrix_is_zero() {
        let m = qmat(vec![vec![0, 0, 0], vec![0, 0, 0]]);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn rank_handles_rationals() {
        let m = Matrix::from_rows(vec![
            qvec![(1, 2), (1, 3)],
            qvec![(1, 2), (1, 1)],
            qvec![(1, 1), (4, 3)],
        ])
        .unwrap();
        // Row 3 = row 1 + row 2; rows 1 and 2 are independent.
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn nullspace_of_dependent_columns() {
        let m = qmat(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let y = nullspace_vector(&m).unwrap();
        assert!(y.iter().any(|v| !v.is_zero()));
        for val in mat_vec(&m, &y) {
            assert!(val.is_zero());
        }
    }

    #[test]
    fn nullspace_none_for_independent_columns() {
        let m = qmat(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(nullspace_vector(&m).is_none());
    }

    #[test]
    fn transpose_roundtrip() {
        let m = qmat(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let t = m.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.cols(), 2);
        assert_eq!(t.transpose(), m);
    }

    proptest::proptest! {
        #[test]
        fn rank_agrees_with_transpose(
            rows in proptest::collection::vec(
                proptest::collection::vec((-4i64..=4, 1i64..=3), 4),
                0..5,
            )
        ) {
            let m = Matrix::from_rows(
                rows.into_iter()
                    .map(|r| r.into_iter().map(|(n, d)| Q::new(n.into(), d.into())).collect())
                    .collect(),
            )
            .unwrap();
            proptest::prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }
}
