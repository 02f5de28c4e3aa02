//! Parsing, formatting, and dyadic conversion for exact rationals.
//!
//! The external text form of a rational is `p/q` (or a bare integer `p`),
//! matching the `Display` output of the scalar types. Floating-point values
//! only ever enter the exact world through [`dyadic_from_f64`], which fixes
//! an explicit binary precision, so every conversion is reproducible and
//! every emitted coordinate re-parses bit-for-bit.

use crate::error::Error;
use crate::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

/// Parses `p/q` or a bare integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::InvalidRational {
            input: s.to_string(),
            reason: "empty string".into(),
        });
    }
    Q::from_str(t).map_err(|e| Error::InvalidRational {
        input: s.to_string(),
        reason: e.to_string(),
    })
}

/// Canonical text form: `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(q: &Q) -> String {
    q.to_string()
}

/// Rounds a float to the nearest dyadic rational `m / 2^bits` (ties to
/// even), passing through the exact binary value of the double on the way,
/// so the result depends only on the input bits.
pub fn dyadic_from_f64(x: f64, bits: u32) -> Result<Q, Error> {
    if !x.is_finite() {
        return Err(Error::InvalidRational {
            input: format!("{x}"),
            reason: "not a finite number".into(),
        });
    }
    if bits == 0 {
        return Err(Error::ConfigError(
            "dyadic precision must be at least 1 bit".into(),
        ));
    }
    let exact = Q::from_float(x).expect("finite doubles are rational");
    let denom: BigInt = BigInt::one() << bits;
    Ok(Q::new(round_nearest(&(exact * Q::from_integer(denom.clone()))), denom))
}

/// Nearest integer to an exact rational, ties to even.
fn round_nearest(q: &Q) -> BigInt {
    let floor = q.floor().to_integer();
    let frac = q - Q::from_integer(floor.clone());
    let twice = frac * Q::from_integer(BigInt::from(2));
    let one = Q::one();
    let floor_is_odd = (&floor % BigInt::from(2)) != BigInt::zero();
    if twice > one || (twice == one && floor_is_odd) {
        floor + 1
    } else {
        floor
    }
}

/// Serde adapter serializing a rational as its `p/q` string.
pub mod qstring {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvec;
    use num_traits::ToPrimitive;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), qvec![(3, 4)][0]);
        assert_eq!(parse_rational("-7").unwrap(), Q::from_integer((-7).into()));
        assert_eq!(parse_rational(" 1/2 ").unwrap(), qvec![(1, 2)][0]);
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("one half").is_err());
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&Q::new(2.into(), 4.into())), "1/2");
        assert_eq!(format_rational(&Q::new(6.into(), 3.into())), "2");
        assert_eq!(format_rational(&Q::new((-1).into(), 2.into())), "-1/2");
    }

    #[test]
    fn round_trip_is_identity() {
        for q in qvec![(3, 7), (-22, 6), (0, 1), (1154253, 1 << 20)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }

    #[test]
    fn dyadic_conversion_is_exact_for_representable_values() {
        // 0.25 is already dyadic at any precision >= 2.
        assert_eq!(dyadic_from_f64(0.25, 53).unwrap(), qvec![(1, 4)][0]);
        assert_eq!(dyadic_from_f64(-3.0, 1).unwrap(), Q::from_integer((-3).into()));
        // A value already on the 2^-20 grid survives 53-bit rounding.
        let x = 123_456_789.0f64 / (1u64 << 20) as f64;
        let q = dyadic_from_f64(x, 53).unwrap();
        assert_eq!(q.to_f64().unwrap(), x);
        assert_eq!(q, Q::new(123_456_789.into(), (1u64 << 20).into()));
    }

    #[test]
    fn dyadic_rounds_to_requested_precision() {
        // 1/3 at 4 bits: 16/3 = 5.33.. rounds to 5, giving 5/16.
        let q = dyadic_from_f64(1.0 / 3.0, 4).unwrap();
        assert_eq!(q, qvec![(5, 16)][0]);
        // Ties to even: 3/4 at 1 bit sits halfway between 1/2 and 1,
        // rounding to the even numerator 1 over denominator 1... (2/2 = 1).
        let q = dyadic_from_f64(0.75, 1).unwrap();
        assert_eq!(q, Q::one());
        // And 1/4 at 1 bit ties between 0 and 1/2, rounding to 0.
        let q = dyadic_from_f64(0.25, 1).unwrap();
        assert_eq!(q, Q::zero());
        assert!(dyadic_from_f64(f64::NAN, 53).is_err());
        assert!(dyadic_from_f64(1.0, 0).is_err());
    }
}
