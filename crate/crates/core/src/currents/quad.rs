//! Exact arithmetic in a real quadratic field `Q(√d)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// `a + b√d`. Rational values carry `d = 0`; two irrational values may only
/// be combined when they share the same `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Quad {
        if b.is_zero() || d == 0 {
            return Quad { a, b: BigRational::zero(), d: 0 };
        }
        let s = d.isqrt();
        if s * s == d {
            return Quad { a: a + b * BigRational::from_integer(BigInt::from(s)), b: BigRational::zero(), d: 0 };
        }
        Quad { a, b, d }
    }

    pub fn rational(a: BigRational) -> Quad {
        Quad::new(a, BigRational::zero(), 0)
    }

    pub fn int(n: i64) -> Quad {
        Quad::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Quad {
        Quad::int(0)
    }

    /// `√d` itself.
    pub fn sqrt(d: u64) -> Quad {
        Quad::new(BigRational::zero(), BigRational::from_integer(1.into()), d)
    }

    pub fn parts(&self) -> (&BigRational, &BigRational, u64) {
        (&self.a, &self.b, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> Quad {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Nearest double, computed without cancellation between the parts.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return f(&self.a);
        }
        let root = (self.d as f64).sqrt();
        if self.a.is_zero() || self.a.is_positive() == self.b.is_positive() {
            return f(&self.a) + f(&self.b) * root;
        }
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        f(&norm) / (f(&self.a) - f(&self.b) * root)
    }

    fn field(&self, other: &Quad) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing Q(√{x}) and Q(√{y})"),
        }
    }
}

impl From<i64> for Quad {
    fn from(n: i64) -> Quad {
        Quad::int(n)
    }
}

impl Add for &Quad {
    type Output = Quad;
    fn add(self, o: &Quad) -> Quad {
        Quad::new(&self.a + &o.a, &self.b + &o.b, self.field(o))
    }
}

impl Sub for &Quad {
    type Output = Quad;
    fn sub(self, o: &Quad) -> Quad {
        Quad::new(&self.a - &o.a, &self.b - &o.b, self.field(o))
    }
}

impl Mul for &Quad {
    type Output = Quad;
    fn mul(self, o: &Quad) -> Quad {
        let d = self.field(o);
        let dd = BigRational::from_integer(BigInt::from(d));
        Quad::new(&self.a * &o.a + &self.b * &o.b * dd, &self.a * &o.b + &self.b * &o.a, d)
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        &self + &o
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, o: Quad) -> Quad {
        &self - &o
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, o: Quad) -> Quad {
        &self * &o
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√{}", self.b, self.d)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

impl Serialize for Quad {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Quad", 2)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_identities() {
        let half = Quad::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), 5);
        // φ² = φ + 1
        assert_eq!(&half * &half, &half + &Quad::int(1));
        assert_eq!(Quad::sqrt(4), Quad::int(2));
        assert_eq!((&Quad::sqrt(5) * &Quad::sqrt(5)), Quad::int(5));
    }

    #[test]
    fn sign_and_value_without_cancellation() {
        let phi = Quad::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), 5);
        let mut p = Quad::int(1);
        let mut conj = Quad::int(1);
        let psi = &Quad::int(1) - &phi;
        for _ in 0..60 {
            p = &p * &phi;
            conj = &conj * &psi;
        }
        let expect = ((1.0 - 5f64.sqrt()) / 2.0).powi(60);
        assert!((conj.to_f64() - expect).abs() / expect < 1e-12);
        assert_eq!(conj.signum(), Ordering::Greater);
        assert_eq!((-conj.clone()).abs(), conj);
        assert!(p.to_f64() > 1e12);
    }
}
