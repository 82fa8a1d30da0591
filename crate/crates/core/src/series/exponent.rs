use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An exponent that is an integer multiple of one half, stored as its numerator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfExponent {
    pub numerator: i64,
}

impl HalfExponent {
    pub const fn halves(numerator: i64) -> Self {
        HalfExponent { numerator }
    }

    pub const fn int(value: i64) -> Self {
        HalfExponent { numerator: 2 * value }
    }

    pub fn is_integral(self) -> bool {
        self.numerator % 2 == 0
    }

    /// The integer value, or `NonIntegerExponent` if it is a proper half.
    pub fn to_int(self) -> Result<i64> {
        if self.is_integral() {
            Ok(self.numerator / 2)
        } else {
            Err(Error::NonIntegerExponent(self.numerator))
        }
    }
}

impl From<i64> for HalfExponent {
    fn from(v: i64) -> Self {
        HalfExponent::int(v)
    }
}

impl Add for HalfExponent {
    type Output = HalfExponent;
    fn add(self, rhs: Self) -> Self {
        HalfExponent::halves(self.numerator + rhs.numerator)
    }
}

impl Sub for HalfExponent {
    type Output = HalfExponent;
    fn sub(self, rhs: Self) -> Self {
        HalfExponent::halves(self.numerator - rhs.numerator)
    }
}

impl Neg for HalfExponent {
    type Output = HalfExponent;
    fn neg(self) -> Self {
        HalfExponent::halves(-self.numerator)
    }
}

impl Mul<i64> for HalfExponent {
    type Output = HalfExponent;
    fn mul(self, rhs: i64) -> Self {
        HalfExponent::halves(self.numerator * rhs)
    }
}

impl fmt::Display for HalfExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.numerator / 2)
        } else {
            write!(f, "{}/2", self.numerator)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrality() {
        assert_eq!(HalfExponent::halves(6).to_int(), Ok(3));
        assert_eq!(
            HalfExponent::halves(3).to_int(),
            Err(Error::NonIntegerExponent(3))
        );
        // 3/2 n^2 - 1/2 n at n = 3 is 12
        let e = HalfExponent::halves(3) * 9 - HalfExponent::halves(1) * 3;
        assert_eq!(e.to_int(), Ok(12));
    }
}
