//! Shared helper for integration tests: an independent plane-geometry oracle
//! for the origin trichotomy in dimension two.
//!
//! The oracle never touches rank computations or the simplex method. It
//! decides by brute-force separation over a finite candidate set of
//! directions, which is exhaustive in the plane:
//!
//! * a strict separator exists iff the open cone `{y : <y, x_i> < 0}` is
//!   nonempty; that cone is an intersection of open halfplanes, so when it is
//!   nonempty it contains either `-x_i` for some point (halfplane case) or
//!   the sum of two of its boundary rays, each of which is perpendicular to
//!   some point (sector case);
//! * a weak separator (nonzero `y` with `<y, x_i> <= 0` for all `i`) exists
//!   iff the closed cone is bigger than `{0}`, and then one of the
//!   perpendicular directions `+-perp(x_i)` already works, because every
//!   extreme ray of the closed cone makes some constraint tight and the
//!   remaining degenerate shape (a full line) is itself perpendicular to
//!   every point.
//!
//! Outside means strict separation; boundary means containment with a weak
//! separator; interior means neither.

use num_traits::{Signed, Zero};
use originlab::{OriginClass, Q, QMatrix};

fn dot(y: &(Q, Q), x: &(Q, Q)) -> Q {
    &y.0 * &x.0 + &y.1 * &x.1
}

fn perp(x: &(Q, Q)) -> (Q, Q) {
    (-x.1.clone(), x.0.clone())
}

fn neg(x: &(Q, Q)) -> (Q, Q) {
    (-x.0.clone(), -x.1.clone())
}

fn add(a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn is_zero(x: &(Q, Q)) -> bool {
    x.0.is_zero() && x.1.is_zero()
}

pub fn plane_oracle(points: &QMatrix) -> OriginClass {
    assert_eq!(points.cols(), 2, "the oracle only handles the plane");
    let pts: Vec<(Q, Q)> = (0..points.rows())
        .map(|i| {
            let row = points.row(i);
            (row[0].clone(), row[1].clone())
        })
        .collect();

    if pts.iter().all(is_zero) {
        // conv{0} contains the origin but has empty interior in the plane.
        return OriginClass::Boundary;
    }

    let mut base: Vec<(Q, Q)> = Vec::new();
    for p in &pts {
        if is_zero(p) {
            continue;
        }
        let q = perp(p);
        base.push(p.clone());
        base.push(neg(p));
        base.push(q.clone());
        base.push(neg(&q));
    }
    let mut candidates = base.clone();
    for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            candidates.push(add(&base[i], &base[j]));
        }
    }

    let strict = candidates.iter().any(|y| {
        !is_zero(y) && pts.iter().all(|x| dot(y, x).is_negative())
    });
    if strict {
        return OriginClass::Outside;
    }

    let weak = pts
        .iter()
        .flat_map(|p| {
            let q = perp(p);
            [q.clone(), neg(&q)]
        })
        .any(|y| !is_zero(&y) && pts.iter().all(|x| !dot(&y, x).is_positive()));
    if weak {
        OriginClass::Boundary
    } else {
        OriginClass::Interior
    }
}

/// All `n`-row sign matrices with entries in {-1, +1} and `d` columns,
/// enumerated by bit mask.
pub fn sign_matrices(n: usize, d: usize) -> impl Iterator<Item = QMatrix> {
    use originlab::Scalar as _;
    let cells = n * d;
    assert!(cells < 63);
    (0u64..(1u64 << cells)).map(move |mask| {
        let rows: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if mask >> (i * d + j) & 1 == 1 {
                            Q::from_i64(1)
                        } else {
                            Q::from_i64(-1)
                        }
                    })
                    .collect()
            })
            .collect();
        QMatrix::from_rows(rows).expect("sign rows are rectangular")
    })
}
