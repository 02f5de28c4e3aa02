//! The containment probability for symmetric continuous entry laws.
//!
//! For `n` i.i.d. points in dimension `d` whose law is symmetric about the
//! origin and assigns no mass to hyperplanes through it, the probability
//! that the convex hull captures the origin is
//!
//! ```text
//! p(n, d) = 1 - 2^(1-n) * sum_{k=0}^{d-1} C(n-1, k)
//! ```
//!
//! equivalently the upper tail `P[Binomial(n-1, 1/2) >= d]`. This module
//! evaluates it exactly over the rationals, in stable log-space floating
//! point for large `n`, and locates the transition window where the
//! probability first reaches a target.

use crate::stats::probit;
use crate::Q;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact containment probability `p(n, d)` as a rational.
///
/// Evaluated as written and clamped below at zero; for `n <= d` the binomial
/// sum saturates and the result is exactly 0, matching the geometric fact
/// that `n` points in general position cannot capture the origin in fewer
/// than `d + 1` of them.
pub fn p_exact(n: u64, d: u64) -> Q {
    assert!(n >= 1 && d >= 1, "p(n, d) requires n >= 1, d >= 1");
    let m = n - 1;
    // Running binomial C(m, k) and partial sum over k = 0..d-1.
    let mut binom = BigInt::one();
    let mut sum = BigInt::zero();
    for k in 0..d.min(m + 1) {
        if k > 0 {
            // C(m, k) = C(m, k-1) * (m - k + 1) / k; exact at every step.
            binom = binom * BigInt::from(m - k + 1) / BigInt::from(k);
        }
        sum += &binom;
    }
    let denom = BigInt::one() << m;
    let num = &denom - sum;
    if num.is_negative() {
        return Q::zero();
    }
    Q::new(num, denom)
}

/// Stable floating-point evaluation of `p(n, d)`.
///
/// Agrees with [`p_exact`] to relative error below 1e-12 wherever the exact
/// value is representable as a normal double; no big-integer intermediates,
/// so `n` in the millions is fine. The smaller binomial tail is accumulated
/// in compensated arithmetic from a saddle-point evaluation of the boundary
/// probability mass.
pub fn p_float(n: u64, d: u64) -> f64 {
    assert!(n >= 1 && d >= 1, "p(n, d) requires n >= 1, d >= 1");
    if n <= d {
        return 0.0;
    }
    if n == 2 * d {
        // Symmetry of Binomial(2d-1, 1/2) about d - 1/2.
        return 0.5;
    }
    let m = n - 1;
    // p = P[Binomial(m, 1/2) >= d]. Sum whichever tail is smaller.
    if (d as f64) <= (m as f64 + 1.0) / 2.0 {
        // Lower tail over k = d-1 down to 0, then complement.
        1.0 - tail_sum(m, d - 1, TailDir::Down)
    } else {
        tail_sum(m, d, TailDir::Up)
    }
}

enum TailDir {
    Down,
    Up,
}

/// Kahan-compensated tail of Binomial(m, 1/2) starting at `k0` inclusive and
/// walking away from the mode. Terms are generated from the boundary mass by
/// the exact pmf ratio, so each is accurate relative to the first.
fn tail_sum(m: u64, k0: u64, dir: TailDir) -> f64 {
    let mut term = pmf_half(m, k0);
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    let mut k = k0;
    loop {
        // Kahan update.
        let y = term - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;

        let ratio = match dir {
            TailDir::Down => {
                if k == 0 {
                    break;
                }
                // pmf(k-1) / pmf(k) = k / (m - k + 1)
                let r = k as f64 / (m - k + 1) as f64;
                k -= 1;
                r
            }
            TailDir::Up => {
                if k == m {
                    break;
                }
                // pmf(k+1) / pmf(k) = (m - k) / (k + 1)
                let r = (m - k) as f64 / (k + 1) as f64;
                k += 1;
                r
            }
        };
        term *= ratio;
        // Away from the mode the ratios decrease monotonically, so once the
        // current term is negligible the remaining tail is bounded by a
        // geometric series with that same ratio.
        if ratio < 0.5 && term < acc * 1e-17 {
            acc += term / (1.0 - ratio);
            break;
        }
        if term < acc * 1e-20 {
            break;
        }
    }
    acc
}

/// `P[Binomial(m, 1/2) = k]` via the saddle-point form used by standard
/// dbinom implementations: Stirling-error corrections plus a stable binomial
/// deviance, all quantities O(1), no catastrophic cancellation.
fn pmf_half(m: u64, k: u64) -> f64 {
    debug_assert!(k <= m);
    if m == 0 {
        return 1.0;
    }
    if k == 0 || k == m {
        return (-(m as f64) * std::f64::consts::LN_2).exp();
    }
    let n = m as f64;
    let x = k as f64;
    let np = n * 0.5;
    let lc = stirlerr(m) - stirlerr(k) - stirlerr(m - k) - bd0(x, np) - bd0(n - x, np);
    let lf = (2.0 * std::f64::consts::PI).ln() + x.ln() + (-(x / n)).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// `ln(k!) - ln(sqrt(2 pi k) (k/e)^k)`, the Stirling series remainder.
fn stirlerr(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if k < 16 {
        // Exact factorial fits in 53 bits for k <= 15; direct evaluation.
        let kf = k as f64;
        let fact: u64 = (2..=k).product::<u64>().max(1);
        (fact as f64).ln() - (kf + 0.5) * kf.ln() + kf - 0.5 * (2.0 * std::f64::consts::PI).ln()
    } else {
        let kk = (k as f64) * (k as f64);
        (S0 - (S1 - (S2 - (S3 - S4 / kk) / kk) / kk) / kk) / k as f64
    }
}

/// Binomial deviance `x ln(x / np) + np - x`, evaluated by the series in
/// `v = (x - np)/(x + np)` when `x` is close to `np` to avoid cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        let mut j = 1u32;
        loop {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1;
        }
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Smallest `n` with `p_exact(n, d) >= target`.
///
/// A normal approximation to the binomial tail seeds the search; the answer
/// itself is fixed by exact rational comparisons, so the approximation never
/// leaks into the result. Panics unless `0 < target < 1` and `d >= 1`.
pub fn window_estimate(d: u64, target: f64) -> u64 {
    assert!(d >= 1, "dimension must be positive");
    assert!(
        target > 0.0 && target < 1.0,
        "target probability must lie strictly between 0 and 1"
    );
    let target_q = Q::from_float(target).expect("finite target");
    let meets = |n: u64| p_exact(n, d) >= target_q;

    // Seed: p(n, d) ~ Phi((n - 1 - 2d) / sqrt(n - 1)) gives a quadratic in
    // sqrt(n - 1).
    let z = probit(target);
    let s = (z + (z * z + 8.0 * d as f64).sqrt()) / 2.0;
    let guess = (1.0 + s * s).ceil().max(2.0) as u64;

    // Bracket the threshold around the seed, then bisect; p is monotone
    // nondecreasing in n.
    let mut hi = guess.max(2);
    while !meets(hi) {
        hi = hi.saturating_mul(2);
    }
    let mut lo = 1u64; // p(1, d) = 0 < target
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Convenience: `p_exact` converted to a double (correctly rounded).
pub fn p_exact_f64(n: u64, d: u64) -> f64 {
    p_exact(n, d).to_f64().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvec;

    #[test]
    fn saturated_and_symmetric_identities() {
        let half = Q::new(BigInt::one(), BigInt::from(2));
        for d in 1..40u64 {
            assert_eq!(p_exact(d, d), Q::zero(), "p(d, d) at d = {d}");
            assert_eq!(p_exact(2 * d, d), half, "p(2d, d) at d = {d}");
            let expect = Q::new(BigInt::one(), BigInt::one() << d);
            assert_eq!(p_exact(d + 1, d), expect, "p(d+1, d) at d = {d}");
        }
        // Below the threshold the probability is exactly zero.
        assert_eq!(p_exact(1, 3), Q::zero());
        assert_eq!(p_exact(2, 3), Q::zero());
    }

    #[test]
    fn five_points_in_the_plane() {
        // Independent evaluation: C(4,0) + C(4,1) = 5, so p = 1 - 5/16.
        assert_eq!(p_exact(5, 2), qvec![(11, 16)][0]);
        assert!((p_float(5, 2) - 0.6875).abs() < 1e-12 * 0.6875);
    }

    /// Complement identity against an accumulator that only ever adds:
    /// Pascal's triangle gives the exact CDF of Binomial(n-1, 1/2) with no
    /// multiplication or division in sight.
    #[test]
    fn complement_matches_pascal_triangle_cdf() {
        let mut row: Vec<BigInt> = vec![BigInt::one()]; // row for m = 0
        for n in 1u64..=120 {
            // row currently holds binomials C(n-1, .).
            let denom = BigInt::one() << (n - 1);
            let mut partial = BigInt::zero();
            for d in 1..=n {
                partial += &row[(d - 1) as usize];
                let cdf = Q::new(partial.clone(), denom.clone());
                assert_eq!(
                    Q::one() - p_exact(n, d),
                    cdf,
                    "complement identity at n = {n}, d = {d}"
                );
            }
            // Advance Pascal's triangle by pure addition.
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
        }
    }

    #[test]
    fn monotone_in_n_and_antitone_in_d() {
        let mut prev_row: Vec<Q> = Vec::new(); // indexed by d - 1, for n - 1
        for n in 1u64..=200 {
            let row: Vec<Q> = (1..=n).map(|d| p_exact(n, d)).collect();
            for d in 1..row.len() {
                assert!(
                    row[d] <= row[d - 1],
                    "p({n}, {}) > p({n}, {})",
                    d + 1,
                    d
                );
            }
            for (i, prev) in prev_row.iter().enumerate() {
                assert!(
                    row[i] >= *prev,
                    "p({n}, {}) < p({}, {})",
                    i + 1,
                    n - 1,
                    i + 1
                );
            }
            prev_row = row;
        }
    }

    #[test]
    fn float_matches_exact_on_grid() {
        let mut checked = 0u32;
        for &n in &[2u64, 3, 4, 5, 8, 10, 30, 100, 333, 500, 1000, 2000] {
            let half = n / 2;
            let mut ds: Vec<u64> = vec![
                1,
                2,
                n / 4,
                half.saturating_sub(3),
                half.saturating_sub(1),
                half,
                half + 1,
                half + 3,
                3 * n / 4,
                n.saturating_sub(1),
                n,
            ];
            ds.retain(|&d| d >= 1 && d <= n);
            ds.dedup();
            for d in ds {
                let exact = p_exact(n, d).to_f64().unwrap();
                let approx = p_float(n, d);
                if exact == 0.0 {
                    assert_eq!(approx, 0.0, "clamp mismatch at ({n}, {d})");
                } else if exact >= f64::MIN_POSITIVE {
                    let rel = ((approx - exact) / exact).abs();
                    assert!(rel <= 1e-12, "rel err {rel:.3e} at ({n}, {d})");
                    checked += 1;
                }
            }
        }
        assert!(checked > 80, "grid too sparse: {checked}");
    }

    #[test]
    fn float_handles_large_n() {
        // Two standard deviations either side of the transition.
        let below = p_float(1_000_000, 499_000);
        let above = p_float(1_000_000, 501_000);
        assert!(below > 0.5 && below < 1.0, "below = {below}");
        assert!(above > 0.0 && above < 0.5, "above = {above}");
        // Normal approximation agrees loosely (sanity, not a tolerance).
        assert!((below - 0.977).abs() < 0.01);
        assert!((above - 0.023).abs() < 0.01);
        // Symmetry pin.
        assert_eq!(p_float(1_000_000, 500_000), 0.5);
        // Deep but representable tail stays finite and positive (about 36
        // standard deviations out, order 1e-283).
        let deep = p_float(1_000_000, 518_000);
        assert!(deep > 0.0 && deep < 1e-250);
    }

    #[test]
    fn window_hits_exact_thresholds() {
        assert_eq!(window_estimate(15, 0.5), 30);
        assert_eq!(window_estimate(1, 0.5), 2);
        let n_star = window_estimate(100, 0.99);
        let target = Q::from_float(0.99).unwrap();
        assert!(p_exact(n_star, 100) >= target);
        assert!(p_exact(n_star - 1, 100) < target);
    }

    #[test]
    fn window_brackets_for_various_targets() {
        for &(d, t) in &[(3u64, 0.1f64), (7, 0.9), (20, 0.75), (64, 0.5)] {
            let n_star = window_estimate(d, t);
            let tq = Q::from_float(t).unwrap();
            assert!(p_exact(n_star, d) >= tq);
            if n_star > 1 {
                assert!(p_exact(n_star - 1, d) < tq);
            }
        }
        assert_eq!(window_estimate(64, 0.5), 128);
    }
}
