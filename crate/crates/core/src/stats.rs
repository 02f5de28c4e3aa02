//! Small statistical helpers: inverse normal quantiles, Wilson score
//! intervals for binomial frequencies, and a least-squares slope for decay
//! plots. Floating point is fine here; nothing downstream of these values is
//! ever fed back into an exact decision.

/// Inverse of the standard normal CDF.
///
/// Acklam's rational minimax approximation; relative error below 1.2e-9 over
/// (0, 1), which is far tighter than anything a Monte Carlo interval needs.
/// Panics outside (0, 1).
pub fn probit(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "probit requires 0 < p < 1, got {p}");

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Wilson score interval for a binomial proportion.
///
/// Endpoints are clamped to the trivial exact bounds: zero successes pin the
/// lower endpoint to 0, all successes pin the upper endpoint to 1.
/// Panics if `trials == 0` or `confidence` is outside (0, 1).
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0, "wilson interval needs at least one trial");
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must lie in (0, 1), got {confidence}"
    );
    assert!(successes <= trials, "more successes than trials");
    let z = probit(0.5 + confidence / 2.0);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Ordinary least-squares slope of `y` on `x`; `None` when fewer than two
/// distinct abscissae are given.
pub fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probit_matches_known_quantiles() {
        assert!(probit(0.5).abs() < 1e-9);
        assert!((probit(0.975) - 1.959963985).abs() < 1e-6);
        assert!((probit(0.995) - 2.575829304).abs() < 1e-6);
        assert!((probit(0.8413447460685429) - 1.0).abs() < 1e-7);
        for &p in &[0.001, 0.01, 0.1, 0.3, 0.7, 0.9, 0.99, 0.999] {
            assert!((probit(p) + probit(1.0 - p)).abs() < 1e-9);
        }
    }

    #[test]
    fn wilson_pins_exact_endpoints() {
        let (lo, _) = wilson_interval(0, 100, 0.95);
        assert_eq!(lo, 0.0);
        let (_, hi) = wilson_interval(100, 100, 0.95);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn wilson_half_sample_interval() {
        let (lo, hi) = wilson_interval(50, 100, 0.95);
        assert!((lo - 0.404).abs() < 1e-3, "lo = {lo}");
        assert!((hi - 0.596).abs() < 1e-3, "hi = {hi}");
    }

    #[test]
    fn wilson_interval_is_ordered_and_contained() {
        for &(s, t) in &[(1u64, 10u64), (5, 10), (9, 10), (1, 1000), (999, 1000)] {
            let (lo, hi) = wilson_interval(s, t, 0.99);
            assert!(0.0 <= lo && lo < hi && hi <= 1.0);
            let phat = s as f64 / t as f64;
            assert!(lo < phat && phat < hi);
        }
    }

    #[test]
    fn slope_recovers_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        assert!((ls_slope(&pts).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(ls_slope(&[(1.0, 2.0)]), None);
        assert_eq!(ls_slope(&[(1.0, 2.0), (1.0, 3.0)]), None);
    }
}
