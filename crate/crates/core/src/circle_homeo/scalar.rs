//! Number types the piecewise-linear algebra is generic over.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn floor_i64(&self) -> i64;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// Equality at the resolution of the arithmetic. Exact types compare exactly.
    fn near(&self, other: &Self) -> bool;

    /// Whether the two chords `(dx1, dy1)` and `(dx2, dy2)` have the same slope.
    fn same_slope(dx1: &Self, dy1: &Self, dx2: &Self, dy2: &Self) -> bool;

    /// Storage size in bits, used to cap exact compositions.
    fn bits(&self) -> u64 {
        0
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn floor_i64(&self) -> i64 {
        self.floor() as i64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= 4.0 * f64::EPSILON * (1.0 + self.abs().max(other.abs()))
    }
    fn same_slope(dx1: &Self, dy1: &Self, dx2: &Self, dy2: &Self) -> bool {
        let lhs = dy1 * dx2;
        let rhs = dy2 * dx1;
        (lhs - rhs).abs() <= 8.0 * f64::EPSILON * (lhs.abs() + rhs.abs())
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn floor_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor out of i64 range")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn near(&self, other: &Self) -> bool {
        self == other
    }
    fn same_slope(dx1: &Self, dy1: &Self, dx2: &Self, dy2: &Self) -> bool {
        dy1 * dx2 == dy2 * dx1
    }
    fn bits(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value required")
}

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(p) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(p));
    }
    // Decimal strings are read exactly, e.g. "0.1" is 1/10.
    let (int, frac) = s.split_once('.')?;
    let negative = int.starts_with('-');
    let digits: BigInt = format!("{}{}", int.trim_start_matches(['-', '+']), frac).parse().ok()?;
    let scale = BigInt::from_u64(10)?.pow(frac.len() as u32);
    let value = BigRational::new(digits, scale);
    Some(if negative { -value } else { value })
}

/// Best `(p, q)` pair with `q <= max_q` if the rational is that simple.
pub fn small_fraction(r: &BigRational, max_q: u64) -> Option<(i64, u64)> {
    let q = r.denom().to_u64()?;
    if q > max_q {
        return None;
    }
    let p = r.numer().to_i64()?;
    Some((p, q))
}

pub fn abs_rational(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-0.1").unwrap(), BigRational::new((-1).into(), 10.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn float_conversion_is_exact() {
        let r = rational_from_f64(0.1);
        assert_ne!(r, BigRational::new(1.into(), 10.into()));
        assert_eq!(Scalar::to_f64(&r), 0.1);
    }

    #[test]
    fn slope_test_exact_vs_float() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert!(BigRational::same_slope(&q(1, 3), &q(1, 6), &q(2, 3), &q(1, 3)));
        assert!(!BigRational::same_slope(&q(1, 3), &q(1, 6), &q(2, 3), &q(1, 2)));
        assert!(f64::same_slope(&0.1, &0.3, &0.2, &0.6));
    }
}
