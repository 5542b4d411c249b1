//! Exact rational scalars.
//!
//! Every coefficient in the library is a `Rat`: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. There is no
//! floating point anywhere in the crate. Values that fit in machine words
//! stay there; any overflow promotes to big integers, and results demote
//! back when they fit, so the representation is canonical.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number with a machine-word fast path.
#[derive(Clone)]
pub enum Rat {
    Small(Ratio<i64>),
    Big(BigRational),
}

use Rat::{Big, Small};

fn promote(r: &Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn demote(r: BigRational) -> Rat {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Small(Ratio::new_raw(n, d)),
        _ => Big(r),
    }
}

impl Rat {
    pub fn zero() -> Self {
        Small(Ratio::zero())
    }

    pub fn one() -> Self {
        Small(Ratio::one())
    }

    pub fn from_int(n: i64) -> Self {
        Small(Ratio::from_integer(n))
    }

    /// `num/den`; panics on a zero denominator (a programming error).
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Small(Ratio::new(num, den))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        demote(BigRational::from_integer(n))
    }

    fn to_big(&self) -> BigRational {
        match self {
            Small(r) => promote(r),
            Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Small(r) => r.is_zero(),
            Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Small(r) => r.is_one(),
            Big(r) => r.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Small(r) => r.is_negative(),
            Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Small(r) => r.is_integer(),
            Big(r) => r.is_integer(),
        }
    }

    /// Integer value, if the fraction is an integer that fits in `i64`.
    pub fn to_integer(&self) -> Option<i64> {
        match self {
            Small(r) if r.is_integer() => Some(*r.numer()),
            Big(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Small(r) => BigInt::from(*r.numer()),
            Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Small(r) => BigInt::from(*r.denom()),
            Big(r) => r.denom().clone(),
        }
    }

    pub fn inv(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::NotAUnit("0".into()));
        }
        Ok(match self {
            Small(r) => Small(r.recip()),
            Big(r) => demote(r.recip()),
        })
    }

    pub fn pow_i(&self, k: i64) -> Result<Rat> {
        let base = if k >= 0 { self.clone() } else { self.inv()? };
        let mut acc = Rat::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc * base.clone();
        }
        Ok(acc)
    }

    /// n! as a rational (exact).
    pub fn factorial(n: u32) -> Rat {
        let mut acc = Rat::one();
        for k in 2..=n as i64 {
            acc = acc * Rat::from_int(k);
        }
        acc
    }

    /// Binomial coefficient C(n, k).
    pub fn binomial(n: u32, k: u32) -> Rat {
        if k > n {
            return Rat::zero();
        }
        let mut acc = Rat::one();
        for j in 0..k as i64 {
            acc = acc * Rat::from_int(n as i64 - j) / Rat::from_int(j + 1);
        }
        acc
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            // canonical: anything that fits is Small, so variants match
            (Small(a), Small(b)) => a == b,
            (Big(a), Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Small(a), Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::hash::Hash for Rat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Small(r) => write!(f, "{r}"),
            Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `a`, `-a`, `a/b` with arbitrary-precision integers.
    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        BigRational::from_str(s)
            .map(demote)
            .map_err(|e| Error::parse(1, 1, format!("invalid rational `{s}`: {e}")))
    }
}

macro_rules! checked_binop {
    ($trait:ident, $method:ident, $checked:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                &self $op &rhs
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                if let (Small(a), Small(b)) = (self, rhs) {
                    if let Some(c) = a.$checked(b) {
                        return Small(c);
                    }
                }
                demote(self.to_big().$method(rhs.to_big()))
            }
        }
    };
}

checked_binop!(Add, add, checked_add, +);
checked_binop!(Sub, sub, checked_sub, -);
checked_binop!(Mul, mul, checked_mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        self * rhs.inv().expect("nonzero")
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Small(r) => Small(-r),
            Big(r) => Big(-r),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.clone().neg()
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        *self = &*self - &rhs;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        *self = &*self * &rhs;
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        Rat::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_display() {
        let r = Rat::new(-6, 4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!("-3/2".parse::<Rat>().unwrap(), r);
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(Rat::factorial(5), Rat::from_int(120));
        assert_eq!(Rat::factorial(0), Rat::one());
        assert_eq!(Rat::binomial(4, 2), Rat::from_int(6));
        assert_eq!(Rat::binomial(3, 5), Rat::zero());
    }

    #[test]
    fn integer_powers() {
        let half = Rat::new(1, 2);
        assert_eq!(half.pow_i(-2).unwrap(), Rat::from_int(4));
        assert_eq!(half.pow_i(3).unwrap(), Rat::new(1, 8));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Big(_)));
        assert_eq!(&sq - &sq, Rat::zero());
        assert!(matches!(&sq - &sq, Small(_)));
        // a big value divided back down demotes
        let back = sq.clone() / big.clone();
        assert_eq!(back, big);
        assert!(matches!(back, Small(_)));
        // equality across representations is canonical
        assert_eq!(&sq * &Rat::zero(), Rat::zero());
        let fact = Rat::factorial(30); // exceeds i64
        assert!(matches!(fact, Big(_)));
        assert_eq!(fact.clone() / fact, Rat::one());
    }

    #[test]
    fn mixed_arithmetic_is_exact() {
        let a = Rat::factorial(25); // big
        let b = Rat::new(1, 3); // small
        let c = &a * &b;
        assert_eq!(c / b.clone(), a);
        assert_eq!(&a + &b.clone().neg(), &a - &b);
    }
}
