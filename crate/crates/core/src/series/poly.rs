//! Exact (untruncated) Laurent polynomials in a and q.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Orders, TruncatedSeries};

/// The factor `1 - sign * a^a_pow * q^q_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    pub sign: i8,
    pub a_pow: i64,
    pub q_exp: i64,
}

impl LinearFactor {
    pub fn new(sign: i8, a_pow: i64, q_exp: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        LinearFactor { sign, a_pow, q_exp }
    }

    pub fn to_poly(self) -> Poly {
        Poly::one() - Poly::monomial(BigInt::from(self.sign), self.a_pow, self.q_exp)
    }

    /// True when the factor is a unit in the q-adic ring (division is exact).
    pub fn q_invertible(self) -> bool {
        self.q_exp >= 1 && self.a_pow >= 0
    }
}

/// Sparse exact polynomial keyed by (q_exp, a_exp).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        Poly::monomial(c, 0, 0)
    }

    pub fn monomial(c: BigInt, a_exp: i64, q_exp: i64) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((q_exp, a_exp), c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (a_exp, q_exp, coeff), ordered by q then a.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> {
        self.terms.iter().map(|(&(q, a), c)| (a, q, c))
    }

    pub fn coeff(&self, a_exp: i64, q_exp: i64) -> BigInt {
        self.terms.get(&(q_exp, a_exp)).cloned().unwrap_or_default()
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn min_a(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_q(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn shift(&self, a_exp: i64, q_exp: i64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&(q, a), c)| ((q + q_exp, a + a_exp), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect() }
    }

    fn add_term(&mut self, a_exp: i64, q_exp: i64, c: BigInt) {
        let e = self.terms.entry((q_exp, a_exp)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(q_exp, a_exp));
        }
    }

    /// If the polynomial is `c * (1 - s a^p q^e)` with p, e >= 0 not both zero,
    /// returns `(c, factor)`.
    pub fn as_linear(&self) -> Option<(BigInt, LinearFactor)> {
        if self.terms.len() != 2 {
            return None;
        }
        let c0 = self.terms.get(&(0, 0))?;
        let (&(q, a), c1) = self.terms.iter().find(|(&k, _)| k != (0, 0))?;
        if q < 0 || a < 0 || c1.abs() != c0.abs() {
            return None;
        }
        let sign = if c1 == c0 { -1 } else { 1 };
        Some((c0.clone(), LinearFactor::new(sign, a, q)))
    }

    pub fn to_series(&self, orders: Orders) -> TruncatedSeries {
        TruncatedSeries::from_terms(self.terms().map(|(a, q, c)| (a, q, c.clone())), orders)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for ((q, a), c) in rhs.terms {
            self.add_term(a, q, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(q1, a1), c1) in &self.terms {
            for (&(q2, a2), c2) in &rhs.terms {
                out.add_term(a1 + a2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(c: i64, a: i64, q: i64) -> Poly {
        Poly::monomial(BigInt::from(c), a, q)
    }

    #[test]
    fn linear_detection() {
        let p = m(1, 0, 0) - m(1, 1, 2);
        assert_eq!(p.as_linear(), Some((BigInt::one(), LinearFactor::new(1, 1, 2))));
        let p = m(-1, 0, 0) - m(1, 0, 3);
        assert_eq!(p.as_linear(), Some((BigInt::from(-1), LinearFactor::new(-1, 0, 3))));
        assert_eq!((m(1, 0, 0) + m(2, 0, 1)).as_linear(), None);
    }

    #[test]
    fn like_terms_cancel() {
        // 1 + a - 1 = a
        let p = m(1, 0, 0) + m(1, 1, 0) - m(1, 0, 0);
        assert_eq!(p, m(1, 1, 0));
        let sq = &(m(1, 0, 0) - m(1, 0, 1)) * &(m(1, 0, 0) + m(1, 0, 1));
        assert_eq!(sq, m(1, 0, 0) - m(1, 0, 2));
    }
}
