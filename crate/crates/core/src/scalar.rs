//! Scalar abstraction for the exact kernels.
//!
//! All geometry in this crate is decided over an ordered field of exact
//! rationals. The solvers pivot fraction-free on the scalar's integer type,
//! so [`Scalar`] couples the field operations (via the `num-traits`
//! vocabulary) with a (numerator, denominator) decomposition into an
//! associated [`Int`] type.
//!
//! Two instantiations ship:
//!
//! * [`BigRational`] / [`BigInt`]: arbitrary precision, always safe; this is
//!   the `Q` alias at the crate root.
//! * [`Rat128`] / `i128`: fixed width with *checked* arithmetic, used as a
//!   fast path when a size analysis proves every intermediate fits (the
//!   experiment engine's carrier selection). Overflow panics; it never
//!   wraps silently.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact integer arithmetic as used by the fraction-free kernels.
///
/// Methods take references so that big-integer implementations avoid clones;
/// implementations must be exact and must never wrap silently.
pub trait Int: Clone + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Quotient of a division with zero remainder. Panics on inexactness.
    fn exact_div(&self, other: &Self) -> Self;
    fn gcd(&self, other: &Self) -> Self;
    fn abs(&self) -> Self;
    /// Bit length of |self|; 0 for zero. Used by overflow prechecks.
    fn bits(&self) -> u64;
    fn to_i64(&self) -> Option<i64>;
    /// Nearest-f64 image (may be infinite). Heuristics only, never decisions.
    fn to_f64(&self) -> f64;
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert!(!Int::is_zero(other), "exact_div by zero");
        let (q, r) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&r), "exact_div with nonzero remainder");
        q
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn bits(&self) -> u64 {
        BigInt::bits(self)
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[inline]
fn cmul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("i128 overflow in exact kernel")
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        self.checked_neg().expect("i128 overflow in exact kernel")
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("i128 overflow in exact kernel")
    }
    fn sub(&self, other: &Self) -> Self {
        self.checked_sub(*other).expect("i128 overflow in exact kernel")
    }
    fn mul(&self, other: &Self) -> Self {
        cmul(*self, *other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert!(*other != 0, "exact_div by zero");
        debug_assert!(self % other == 0, "exact_div with nonzero remainder");
        self / other
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn abs(&self) -> Self {
        self.checked_abs().expect("i128 overflow in exact kernel")
    }
    fn bits(&self) -> u64 {
        (128 - self.unsigned_abs().leading_zeros()) as u64
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Exact rational scalar: an ordered field with integer decomposition.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Num
    + Signed
    + Send
    + Sync
    + 'static
{
    type Int: Int;

    fn from_int(i: Self::Int) -> Self;
    /// Reduced fraction num/den; `den` must be nonzero.
    fn from_int_ratio(num: Self::Int, den: Self::Int) -> Self;
    fn numer(&self) -> Self::Int;
    /// Always positive.
    fn denom(&self) -> Self::Int;

    fn from_i64(v: i64) -> Self {
        Self::from_int(Self::Int::from_i64(v))
    }
    /// Exact widening for reporting.
    fn to_big(&self) -> BigRational;
    /// Exact narrowing; `None` if the value does not fit.
    fn from_big(q: &BigRational) -> Option<Self>;
}

impl Scalar for BigRational {
    type Int = BigInt;

    fn from_int(i: BigInt) -> Self {
        BigRational::from_integer(i)
    }
    fn from_int_ratio(num: BigInt, den: BigInt) -> Self {
        BigRational::new(num, den)
    }
    fn numer(&self) -> BigInt {
        self.numer().clone()
    }
    fn denom(&self) -> BigInt {
        self.denom().clone()
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
    fn from_big(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
}

/// Reduced fraction over `i128` with overflow-checked arithmetic.
///
/// Invariants: `den > 0`, `gcd(|num|, den) = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rat128 {
    num: i128,
    den: i128,
}

impl Rat128 {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 {
            (num.checked_neg().expect("i128 overflow in exact kernel"), den.checked_neg().expect("i128 overflow in exact kernel"))
        } else {
            (num, den)
        };
        if num == 0 {
            return Rat128 { num: 0, den: 1 };
        }
        let g = Integer::gcd(&num, &den);
        Rat128 { num: num / g, den: den / g }
    }

    pub fn numer_raw(&self) -> i128 {
        self.num
    }
    pub fn denom_raw(&self) -> i128 {
        self.den
    }
}

impl fmt::Display for Rat128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl PartialOrd for Rat128 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::cmp::Ord for Rat128 {
    fn cmp(&self, other: &Self) -> Ordering {
        cmul(self.num, other.den).cmp(&cmul(other.num, self.den))
    }
}

impl Add for Rat128 {
    type Output = Rat128;
    fn add(self, rhs: Rat128) -> Rat128 {
        let num = cmul(self.num, rhs.den)
            .checked_add(cmul(rhs.num, self.den))
            .expect("i128 overflow in exact kernel");
        Rat128::new(num, cmul(self.den, rhs.den))
    }
}

impl Sub for Rat128 {
    type Output = Rat128;
    fn sub(self, rhs: Rat128) -> Rat128 {
        self + (-rhs)
    }
}

impl Mul for Rat128 {
    type Output = Rat128;
    fn mul(self, rhs: Rat128) -> Rat128 {
        // Cross-reduce before multiplying to keep intermediates small.
        let g1 = Integer::gcd(&self.num, &rhs.den);
        let g2 = Integer::gcd(&rhs.num, &self.den);
        Rat128::new(
            cmul(self.num / g1, rhs.num / g2),
            cmul(self.den / g2, rhs.den / g1),
        )
    }
}

impl Div for Rat128 {
    type Output = Rat128;
    fn div(self, rhs: Rat128) -> Rat128 {
        assert!(rhs.num != 0, "division by zero");
        self * Rat128 { num: rhs.den, den: rhs.num }
    }
}

impl Rem for Rat128 {
    type Output = Rat128;
    fn rem(self, rhs: Rat128) -> Rat128 {
        let q = self / rhs;
        let trunc = Rat128::new(q.num / q.den, 1);
        self - trunc * rhs
    }
}

impl Neg for Rat128 {
    type Output = Rat128;
    fn neg(self) -> Rat128 {
        Rat128 {
            num: self.num.checked_neg().expect("i128 overflow in exact kernel"),
            den: self.den,
        }
    }
}

impl Zero for Rat128 {
    fn zero() -> Self {
        Rat128 { num: 0, den: 1 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl One for Rat128 {
    fn one() -> Self {
        Rat128 { num: 1, den: 1 }
    }
}

impl Num for Rat128 {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        let parse = |t: &str| i128::from_str_radix(t, radix).map_err(|e| e.to_string());
        match s.split_once('/') {
            Some((n, d)) => Ok(Rat128::new(parse(n)?, parse(d)?)),
            None => Ok(Rat128::new(parse(s)?, 1)),
        }
    }
}

impl Signed for Rat128 {
    fn abs(&self) -> Self {
        Rat128 { num: Int::abs(&self.num), den: self.den }
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Zero::zero()
        } else {
            *self - *other
        }
    }
    fn signum(&self) -> Self {
        Rat128 { num: self.num.signum(), den: 1 }
    }
    fn is_positive(&self) -> bool {
        self.num > 0
    }
    fn is_negative(&self) -> bool {
        self.num < 0
    }
}

impl Scalar for Rat128 {
    type Int = i128;

    fn from_int(i: i128) -> Self {
        Rat128 { num: i, den: 1 }
    }
    fn from_int_ratio(num: i128, den: i128) -> Self {
        Rat128::new(num, den)
    }
    fn numer(&self) -> i128 {
        self.num
    }
    fn denom(&self) -> i128 {
        self.den
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
    fn from_big(q: &BigRational) -> Option<Self> {
        let num = ToPrimitive::to_i128(q.numer())?;
        let den = ToPrimitive::to_i128(q.denom())?;
        Some(Rat128 { num, den })
    }
}
