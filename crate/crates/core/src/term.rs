//! Builder for a single summand: a monomial times finite and infinite
//! products, exact polynomials and nested series.
//!
//! Linear factors `1 - s a^p q^e` shared between numerator and denominator
//! cancel before anything is expanded, so quotients such as
//! `(a;q^3)_n / (a;q)_{2n}` never divide by the non-unit `1 - a`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{HalfExponent, Length, LinearFactor, Orders, PochhammerSpec, Poly, TruncatedSeries};

type Deferred<'a> = Box<dyn Fn(Orders) -> Result<TruncatedSeries> + 'a>;

/// Base `sign * a^a_power * q^q_offset` of a Pochhammer symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Base {
    pub sign: i8,
    pub a_power: i64,
    pub q_offset: i64,
}

impl Base {
    pub fn q(q_offset: i64) -> Base {
        Base { sign: 1, a_power: 0, q_offset }
    }

    pub fn aq(q_offset: i64) -> Base {
        Base { sign: 1, a_power: 1, q_offset }
    }

    pub fn neg(self) -> Base {
        Base { sign: -self.sign, ..self }
    }

    pub fn spec(self, step: i64, length: Length) -> PochhammerSpec {
        PochhammerSpec::new(self.sign, self.a_power, self.q_offset, step, length)
    }
}

#[derive(Default)]
pub struct Term<'a> {
    coeff: BigInt,
    a_exp: i64,
    q_exp: HalfExponent,
    num: Vec<LinearFactor>,
    den: Vec<LinearFactor>,
    num_poly: Vec<Poly>,
    den_poly: Vec<Poly>,
    num_inf: Vec<PochhammerSpec>,
    den_inf: Vec<PochhammerSpec>,
    deferred: Vec<Deferred<'a>>,
    zero: bool,
    error: Option<Error>,
}

impl<'a> Term<'a> {
    pub fn new() -> Self {
        Term { coeff: BigInt::one(), ..Default::default() }
    }

    pub fn times_int(mut self, k: impl Into<BigInt>) -> Self {
        self.coeff *= k.into();
        if self.coeff.is_zero() {
            self.zero = true;
        }
        self
    }

    /// Multiplies by `(-1)^n`.
    pub fn sign(mut self, n: i64) -> Self {
        if n % 2 != 0 {
            self.coeff = -self.coeff;
        }
        self
    }

    pub fn a(mut self, e: i64) -> Self {
        self.a_exp += e;
        self
    }

    pub fn q(mut self, e: i64) -> Self {
        self.q_exp = self.q_exp + HalfExponent::int(e);
        self
    }

    pub fn q_half(mut self, e: HalfExponent) -> Self {
        self.q_exp = self.q_exp + e;
        self
    }

    pub fn times_linear(mut self, f: LinearFactor) -> Self {
        if f.q_exp < 0 || f.a_pow < 0 {
            return self.times_poly(f.to_poly());
        }
        self.num.push(f);
        self
    }

    pub fn over_linear(mut self, f: LinearFactor) -> Self {
        if f.q_exp < 0 || f.a_pow < 0 {
            return self.over_poly(f.to_poly());
        }
        self.den.push(f);
        self
    }

    /// Multiplies by `(base; q^step)_n`; a negative `n` is an error.
    pub fn poch(mut self, base: Base, step: i64, n: i64) -> Self {
        if n < 0 {
            self.error.get_or_insert(Error::NegativeLength(n));
            return self;
        }
        let spec = base.spec(step, Length::Finite(n as u64));
        for j in 0..n as u64 {
            self = self.times_linear(spec.factor(j));
        }
        self
    }

    /// Divides by `(base; q^step)_n`; a negative `n` makes the term vanish.
    pub fn over_poch(mut self, base: Base, step: i64, n: i64) -> Self {
        if n < 0 {
            self.zero = true;
            return self;
        }
        let spec = base.spec(step, Length::Finite(n as u64));
        for j in 0..n as u64 {
            self = self.over_linear(spec.factor(j));
        }
        self
    }

    pub fn times_inf(mut self, base: Base, step: i64) -> Self {
        self.num_inf.push(base.spec(step, Length::Infinite));
        self
    }

    pub fn over_inf(mut self, base: Base, step: i64) -> Self {
        self.den_inf.push(base.spec(step, Length::Infinite));
        self
    }

    /// Splits off the lowest monomial of `p`; returns the remaining factor
    /// with its minimal exponents at zero.
    fn extract(&mut self, p: Poly, sign: i64) -> Option<Poly> {
        if p.is_zero() {
            return None;
        }
        let (ma, mq) = (p.min_a().unwrap(), p.min_q().unwrap());
        self.a_exp += sign * ma;
        self.q_exp = self.q_exp + HalfExponent::int(sign * mq);
        Some(p.shift(-ma, -mq))
    }

    pub fn times_poly(mut self, p: Poly) -> Self {
        let Some(p) = self.extract(p, 1) else {
            self.zero = true;
            return self;
        };
        if p.len() == 1 {
            self.coeff *= p.coeff(0, 0);
        } else if let Some((c, f)) = p.as_linear() {
            self.coeff *= c;
            self.num.push(f);
        } else {
            self.num_poly.push(p);
        }
        self
    }

    pub fn over_poly(mut self, p: Poly) -> Self {
        let Some(p) = self.extract(p, -1) else {
            self.error.get_or_insert(Error::NotInvertible("division by zero".into()));
            return self;
        };
        if p.len() == 1 {
            let c = p.coeff(0, 0);
            if c.abs().is_one() {
                self.coeff *= c;
            } else {
                self.error.get_or_insert(Error::NotInvertible(format!("division by {c}")));
            }
        } else if let Some((c, f)) = p.as_linear().filter(|(c, _)| c.abs().is_one()) {
            self.coeff *= c;
            self.den.push(f);
        } else {
            self.den_poly.push(p);
        }
        self
    }

    /// Multiplies by a series produced on demand at whatever box the rest of
    /// the term requires.
    pub fn times_series<F>(mut self, f: F) -> Self
    where
        F: Fn(Orders) -> Result<TruncatedSeries> + 'a,
    {
        self.deferred.push(Box::new(f));
        self
    }

    /// Expands the term exactly on the box `orders`.
    pub fn build(mut self, orders: Orders) -> Result<TruncatedSeries> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        if self.zero || self.coeff.is_zero() {
            return Ok(TruncatedSeries::zero(orders));
        }
        self.cancel();
        // constant factors 1 - s
        for f in std::mem::take(&mut self.num) {
            if f.q_exp == 0 && f.a_pow == 0 {
                self.coeff *= 1 - f.sign as i64;
            } else {
                self.num.push(f);
            }
        }
        if self.coeff.is_zero() {
            return Ok(TruncatedSeries::zero(orders));
        }
        if let Some(f) = self.den.iter().find(|f| !f.q_invertible()) {
            return Err(Error::NotInvertible(format!(
                "denominator factor 1 - ({})a^{}q^{}",
                f.sign, f.a_pow, f.q_exp
            )));
        }
        let q_exp = self.q_exp.to_int()?;

        let mut deferred = std::mem::take(&mut self.deferred);
        let vals = self.deferred_valuations(&mut deferred, q_exp, orders)?;
        let Some(vals) = vals else {
            return Ok(TruncatedSeries::zero(orders));
        };
        let (sq, sa): (i64, i64) = (vals.iter().map(|v| v.1).sum(), vals.iter().map(|v| v.0).sum());
        let x_orders = Orders { q: orders.q - sq, a: orders.a.map(|a| a - sa) };
        let mut x = self.exact_part(q_exp, x_orders)?;
        for (_, _, s) in &vals {
            x = x.mul_within(s, orders);
        }
        x.truncate_in_place(orders);
        Ok(x)
    }

    /// Evaluates deferred factors on boxes wide enough for the final product.
    /// Returns (a valuation, q valuation, series) per factor, or `None` when
    /// some factor vanishes on its box.
    #[allow(clippy::type_complexity)]
    fn deferred_valuations(
        &self,
        deferred: &mut [Deferred<'a>],
        q_exp: i64,
        orders: Orders,
    ) -> Result<Option<Vec<(i64, i64, TruncatedSeries)>>> {
        if deferred.is_empty() {
            return Ok(Some(Vec::new()));
        }
        let n = deferred.len();
        let mut guess = vec![(0i64, 0i64); n];
        for _ in 0..8 {
            let mut out = Vec::with_capacity(n);
            let mut retry = false;
            for (i, f) in deferred.iter().enumerate() {
                let oq: i64 = guess.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.1).sum();
                let oa: i64 = guess.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.0).sum();
                let box_i = Orders {
                    q: orders.q - q_exp - oq,
                    a: orders.a.map(|a| a - self.a_exp - oa),
                };
                let s = f(box_i)?;
                if s.q_order() < box_i.q || matches!((s.a_order(), box_i.a), (Some(x), Some(y)) if x < y) {
                    return Err(Error::Unsupported("deferred factor returned a smaller box than requested".into()));
                }
                let (Some(va), Some(vq)) = (s.a_valuation(), s.q_valuation()) else {
                    return Ok(None);
                };
                out.push((va, vq, s));
            }
            for (g, v) in guess.iter_mut().zip(&out) {
                if v.0 < g.0 || v.1 < g.1 {
                    g.0 = g.0.min(v.0);
                    g.1 = g.1.min(v.1);
                    retry = true;
                }
            }
            if !retry {
                return Ok(Some(out));
            }
        }
        Err(Error::Unsupported("deferred factor precision did not settle".into()))
    }

    fn exact_part(&self, q_exp: i64, orders: Orders) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::monomial_in(self.coeff.clone(), self.a_exp, q_exp, orders);
        if s.is_zero() {
            return Ok(s);
        }
        for &f in &self.num {
            s.mul_linear(f);
        }
        for p in &self.num_poly {
            s.mul_poly(p);
        }
        for &f in &self.den {
            s.div_linear(f)?;
        }
        for p in &self.den_poly {
            s.div_poly(p)?;
        }
        for spec in &self.num_inf {
            spec.apply(&mut s, false)?;
        }
        for spec in &self.den_inf {
            spec.apply(&mut s, true)?;
        }
        Ok(s)
    }

    /// Removes linear factors common to numerator and denominator.
    fn cancel(&mut self) {
        if self.den.is_empty() || self.num.is_empty() {
            return;
        }
        let mut count: HashMap<LinearFactor, i64> = HashMap::new();
        for f in &self.den {
            *count.entry(*f).or_default() += 1;
        }
        let mut num = Vec::with_capacity(self.num.len());
        for f in self.num.drain(..) {
            match count.get_mut(&f) {
                Some(c) if *c > 0 => *c -= 1,
                _ => num.push(f),
            }
        }
        self.num = num;
        let mut den = Vec::with_capacity(self.den.len());
        for f in self.den.drain(..) {
            let c = count.get_mut(&f).unwrap();
            // remaining count is what survives in the denominator
            if *c > 0 {
                *c -= 1;
                den.push(f);
            }
        }
        self.den = den;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::pochhammer;

    fn o(n: i64) -> Orders {
        Orders::univariate(n)
    }

    #[test]
    fn cancellation_of_one_minus_a() {
        // (a;q^2)_2 / (a;q)_2 = (1 - aq^2) / (1 - aq)
        let t = Term::new().poch(Base::aq(0), 2, 2).over_poch(Base::aq(0), 1, 2);
        let lhs = t.build(Orders::bivariate(6, 10)).unwrap();
        let mut rhs = TruncatedSeries::one(Orders::bivariate(6, 10));
        rhs.mul_linear(LinearFactor::new(1, 1, 2));
        rhs.div_linear(LinearFactor::new(1, 1, 1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_unit_denominator_is_rejected() {
        let t = Term::new().over_poch(Base::aq(0), 1, 1);
        assert!(matches!(t.build(o(5)), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn zero_convention_and_negative_length() {
        assert!(Term::new().over_poch(Base::q(1), 1, -1).build(o(5)).unwrap().is_zero());
        assert_eq!(
            Term::new().poch(Base::q(1), 1, -1).build(o(5)),
            Err(Error::NegativeLength(-1))
        );
    }

    #[test]
    fn laurent_prefactor_cancels() {
        // a^-1 q^-3 (1 + a q^3 - 1) = 1
        let p = Poly::one() + Poly::monomial(1.into(), 1, 3) - Poly::one();
        let t = Term::new().a(-1).q(-3).times_poly(p);
        assert_eq!(t.build(Orders::bivariate(4, 8)).unwrap().to_string(), "1");
    }

    #[test]
    fn half_exponents_must_be_integral() {
        let t = Term::new().q_half(HalfExponent::halves(3));
        assert_eq!(t.build(o(5)), Err(Error::NonIntegerExponent(3)));
    }

    #[test]
    fn deferred_series_gets_enough_precision() {
        // q^-2 * (1/(q;q)_inf) must be exact to order 10
        let t = Term::new().q(-2).times_series(|ord| {
            let e = pochhammer(&PochhammerSpec::q_inf(1, 1), ord)?;
            e.invert()
        });
        let s = t.build(o(10)).unwrap();
        assert_eq!(s.q_order(), 10);
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (k, &v) in p.iter().enumerate() {
            assert_eq!(s.coeff(0, k as i64 - 2), BigInt::from(v));
        }
    }

    #[test]
    fn infinite_products() {
        // (-aq;q)_inf / (aq;q)_inf at a -> 0 is 1
        let t = Term::new().times_inf(Base::aq(1).neg(), 1).over_inf(Base::aq(1), 1);
        let s = t.build(Orders::bivariate(3, 12)).unwrap();
        assert_eq!(s.coeff(0, 0), BigInt::one());
        assert_eq!(s.coeff(1, 1), BigInt::from(2));
    }
}
