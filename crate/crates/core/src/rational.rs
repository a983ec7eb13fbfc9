//! Exact non-negative-friendly rationals for metric tables.
//!
//! Backed by `num_rational::Ratio<i64>`, which keeps values in lowest terms
//! with a positive denominator. Arithmetic is checked: an overflow aborts
//! with a panic instead of wrapping, so no result is ever rounded.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `denominator` is zero.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Rational(Ratio::new(numerator, denominator))
    }

    pub fn integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numerator() > 0
    }

    pub fn abs_diff(self, other: Rational) -> Rational {
        if self >= other {
            self - other
        } else {
            other - self
        }
    }

    pub fn checked_add(self, other: Rational) -> Option<Rational> {
        num_traits_checked(self.0, other.0, |a, b| a.checked_add(b))
    }

    pub fn checked_sub(self, other: Rational) -> Option<Rational> {
        num_traits_checked(self.0, other.0, |a, b| a.checked_sub(b))
    }
}

// a/b ± c/d computed over the lcm of the denominators with overflow checks.
fn num_traits_checked(
    lhs: Ratio<i64>,
    rhs: Ratio<i64>,
    op: impl Fn(i64, i64) -> Option<i64>,
) -> Option<Rational> {
    let (a, b) = (*lhs.numer(), *lhs.denom());
    let (c, d) = (*rhs.numer(), *rhs.denom());
    let l = b.lcm(&d);
    let left = a.checked_mul(l / b)?;
    let right = c.checked_mul(l / d)?;
    Some(Rational(Ratio::new(op(left, right)?, l)))
}

impl Add for Rational {
    type Output = Rational;

    fn add(self, rhs: Rational) -> Rational {
        self.checked_add(rhs)
            .unwrap_or_else(|| panic!("rational overflow in {self} + {rhs}"))
    }
}

impl Sub for Rational {
    type Output = Rational;

    fn sub(self, rhs: Rational) -> Rational {
        self.checked_sub(rhs)
            .unwrap_or_else(|| panic!("rational overflow in {self} - {rhs}"))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = num.parse().map_err(|_| bad())?;
        let den: i64 = den.parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(Rational::new(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numerator(), -3);
        assert_eq!(r.denominator(), 2);
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!("2".parse::<Rational>().unwrap(), Rational::integer(2));
        assert_eq!("4/6".parse::<Rational>().unwrap(), Rational::new(2, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let big = Rational::integer(i64::MAX);
        assert!(big.checked_add(Rational::ONE).is_none());
    }

    proptest! {
        #[test]
        fn addition_is_exact(a in -1000i64..1000, b in 1i64..50, c in -1000i64..1000, d in 1i64..50) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            let s = x + y;
            // cross-multiplied identity: s = (ad + cb) / bd
            prop_assert_eq!(s, Rational::new(a * d + c * b, b * d));
            prop_assert_eq!(s - y, x);
        }

        #[test]
        fn display_round_trips(a in -1000i64..1000, b in 1i64..50) {
            let x = Rational::new(a, b);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
