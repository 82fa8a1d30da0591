//! Exact truncated bivariate Laurent series in `a` and `q`.
//!
//! A [`TruncatedSeries`] is exact for every exponent pair inside its box
//! `q <= q_order` (and `a <= a_order` when that bound is set). Coefficients
//! are `BigInt`s; storage is one dense a-row per q exponent.

mod exponent;
mod pochhammer;
mod poly;
mod row;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use exponent::HalfExponent;
pub use pochhammer::{
    pochhammer, pochhammer_recip, theta_sum, triple_product, Length, PochhammerSpec,
};
pub use poly::{LinearFactor, Poly};
use row::Row;

/// Truncation box of a series. `a == None` means exact in `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Orders {
    pub q: i64,
    pub a: Option<i64>,
}

impl Orders {
    pub fn univariate(q: i64) -> Orders {
        Orders { q, a: None }
    }

    pub fn bivariate(a: i64, q: i64) -> Orders {
        Orders { q, a: Some(a) }
    }

    pub fn min(self, other: Orders) -> Orders {
        Orders { q: self.q.min(other.q), a: min_opt(self.a, other.a) }
    }
}

fn min_opt(x: Option<i64>, y: Option<i64>) -> Option<i64> {
    match (x, y) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Point at which `a` is specialised by [`TruncatedSeries::eval_a`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AValue {
    Zero,
    One,
    QPower(i64),
}

/// First coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Difference {
    pub a_exp: i64,
    pub q_exp: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    q_order: i64,
    a_order: Option<i64>,
    /// q-exponent of `rows[0]`
    q_lo: i64,
    rows: Vec<Row>,
}

impl TruncatedSeries {
    pub fn zero(orders: Orders) -> Self {
        TruncatedSeries { q_order: orders.q, a_order: orders.a, q_lo: 0, rows: Vec::new() }
    }

    pub fn one(orders: Orders) -> Self {
        Self::monomial_in(BigInt::one(), 0, 0, orders)
    }

    /// `coeff * a^a_exp * q^q_exp`, exact in `a`.
    pub fn monomial(coeff: impl Into<BigInt>, a_exp: i64, q_exp: i64, q_order: i64) -> Self {
        Self::monomial_in(coeff.into(), a_exp, q_exp, Orders::univariate(q_order))
    }

    pub fn monomial_in(coeff: BigInt, a_exp: i64, q_exp: i64, orders: Orders) -> Self {
        let mut s = Self::zero(orders);
        if q_exp <= orders.q && orders.a.is_none_or(|a| a_exp <= a) && !coeff.is_zero() {
            s.q_lo = q_exp;
            s.rows.push(Row::constant(coeff, a_exp));
        }
        s
    }

    /// Builds a series from (a_exp, q_exp, coeff) triples; repeated keys add.
    pub fn from_terms<I>(terms: I, orders: Orders) -> Self
    where
        I: IntoIterator<Item = (i64, i64, BigInt)>,
    {
        let mut s = Self::zero(orders);
        for (a, q, c) in terms {
            if q > orders.q || orders.a.is_some_and(|cap| a > cap) || c.is_zero() {
                continue;
            }
            let r = s.row_mut(q);
            r.add_shifted(&Row::constant(c, 0), a, false, None);
        }
        s.normalize();
        s
    }

    pub fn orders(&self) -> Orders {
        Orders { q: self.q_order, a: self.a_order }
    }

    pub fn q_order(&self) -> i64 {
        self.q_order
    }

    pub fn a_order(&self) -> Option<i64> {
        self.a_order
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coeff(&self, a_exp: i64, q_exp: i64) -> BigInt {
        self.row(q_exp).and_then(|r| r.get(a_exp)).cloned().unwrap_or_default()
    }

    /// Nonzero terms as (a_exp, q_exp, coeff), ordered by q then a.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(k, r)| {
            let q = self.q_lo + k as i64;
            r.c.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (r.lo + j as i64, q, c))
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    pub fn q_valuation(&self) -> Option<i64> {
        (!self.rows.is_empty()).then_some(self.q_lo)
    }

    pub fn a_valuation(&self) -> Option<i64> {
        self.rows.iter().filter(|r| !r.is_empty()).map(|r| r.lo).min()
    }

    pub fn a_degree(&self) -> Option<i64> {
        self.rows.iter().filter(|r| !r.is_empty()).map(|r| r.hi()).max()
    }

    fn row(&self, q: i64) -> Option<&Row> {
        if q < self.q_lo {
            return None;
        }
        self.rows.get((q - self.q_lo) as usize)
    }

    /// Row for exponent `q`, extending storage as needed.
    fn row_mut(&mut self, q: i64) -> &mut Row {
        if self.rows.is_empty() {
            self.q_lo = q;
        }
        if q < self.q_lo {
            let extra = (self.q_lo - q) as usize;
            let mut rows = vec![Row::default(); extra];
            rows.append(&mut self.rows);
            self.rows = rows;
            self.q_lo = q;
        }
        let idx = (q - self.q_lo) as usize;
        if idx >= self.rows.len() {
            self.rows.resize(idx + 1, Row::default());
        }
        &mut self.rows[idx]
    }

    /// Extends storage so rows cover exponents up to `q`.
    fn cover_to(&mut self, q: i64) {
        if !self.rows.is_empty() && q >= self.q_lo {
            self.row_mut(q);
        }
    }

    fn normalize(&mut self) {
        let top = self.q_order;
        let cap = self.a_order;
        if !self.rows.is_empty() && self.q_lo + self.rows.len() as i64 - 1 > top {
            let keep = (top - self.q_lo + 1).max(0) as usize;
            self.rows.truncate(keep);
        }
        for r in self.rows.iter_mut() {
            r.cap(cap);
        }
        while matches!(self.rows.last(), Some(r) if r.is_empty()) {
            self.rows.pop();
        }
        let lead = self.rows.iter().take_while(|r| r.is_empty()).count();
        if lead > 0 {
            self.rows.drain(..lead);
            self.q_lo += lead as i64;
        }
        if self.rows.is_empty() {
            self.q_lo = 0;
        }
    }

    /// Restricts the series to the smaller of its own box and `orders`.
    pub fn truncate(&self, orders: Orders) -> Self {
        let mut s = self.clone();
        s.truncate_in_place(orders);
        s
    }

    pub fn truncate_in_place(&mut self, orders: Orders) {
        let o = self.orders().min(orders);
        self.q_order = o.q;
        self.a_order = o.a;
        self.normalize();
    }

    /// Product truncated to `orders`. The caller guarantees both factors were
    /// built with enough precision for the product to be exact on that box.
    pub(crate) fn mul_within(&self, other: &Self, orders: Orders) -> Self {
        self.mul_rows(other, orders)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut s = self.clone();
        for r in s.rows.iter_mut() {
            r.scale(k);
        }
        s.normalize();
        s
    }

    /// Multiplies by `a^a_exp q^q_exp`. Negative shifts shrink the box.
    pub fn shift(&self, a_exp: i64, q_exp: i64) -> Self {
        let mut s = self.clone();
        s.q_order = self.q_order + q_exp.min(0);
        s.a_order = self.a_order.map(|a| a + a_exp.min(0));
        s.q_lo += q_exp;
        for r in s.rows.iter_mut() {
            if !r.is_empty() {
                r.lo += a_exp;
            }
        }
        s.normalize();
        s
    }

    fn add_scaled(&self, other: &Self, negate: bool) -> Self {
        let mut s = self.truncate(other.orders());
        let cap = s.a_order;
        for (k, r) in other.rows.iter().enumerate() {
            let q = other.q_lo + k as i64;
            if q > s.q_order || r.is_empty() {
                continue;
            }
            s.row_mut(q).add_shifted(r, 0, negate, cap);
        }
        s.normalize();
        s
    }

    /// Box of a product: min(N1, N2, N1 + v2, N2 + v1), likewise for a.
    fn product_orders(&self, other: &Self) -> Orders {
        let vq1 = self.q_valuation().unwrap_or(0).min(0);
        let vq2 = other.q_valuation().unwrap_or(0).min(0);
        let q = (self.q_order + vq2).min(other.q_order + vq1);
        let va1 = self.a_valuation().unwrap_or(0).min(0);
        let va2 = other.a_valuation().unwrap_or(0).min(0);
        let a = min_opt(self.a_order.map(|a| a + va2), other.a_order.map(|a| a + va1));
        Orders { q, a }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.mul_rows(other, self.product_orders(other))
    }

    fn mul_rows(&self, other: &Self, orders: Orders) -> Self {
        let mut out = Self::zero(orders);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let lo = self.q_lo + other.q_lo;
        if lo > orders.q {
            return out;
        }
        let len = (orders.q - lo + 1) as usize;
        out.q_lo = lo;
        out.rows = vec![Row::default(); len];
        for (i, x) in self.rows.iter().enumerate() {
            if x.is_empty() {
                continue;
            }
            for (j, y) in other.rows.iter().enumerate() {
                let idx = i + j;
                if idx >= len {
                    break;
                }
                out.rows[idx].add_product(x, y, orders.a);
            }
        }
        out.normalize();
        out
    }

    /// In-place multiplication by `1 - s a^p q^e`.
    pub fn mul_linear(&mut self, f: LinearFactor) {
        if f.q_exp < 0 || f.a_pow < 0 {
            let p = f.to_poly();
            self.mul_poly(&p);
            return;
        }
        if self.is_zero() {
            return;
        }
        let negate = f.sign == 1;
        let cap = self.a_order;
        let e = f.q_exp as usize;
        if e == 0 {
            for r in self.rows.iter_mut() {
                let old = r.clone();
                r.add_shifted(&old, f.a_pow, negate, cap);
            }
        } else {
            let top = self.q_lo + self.rows.len() as i64 - 1 + f.q_exp;
            self.cover_to(top.min(self.q_order));
            for idx in (e..self.rows.len()).rev() {
                let (lo, hi) = self.rows.split_at_mut(idx);
                hi[0].add_shifted(&lo[idx - e], f.a_pow, negate, cap);
            }
        }
        self.normalize();
    }

    /// In-place division by `1 - s a^p q^e`; needs `e >= 1` and `p >= 0`.
    pub fn div_linear(&mut self, f: LinearFactor) -> Result<()> {
        if !f.q_invertible() {
            return Err(Error::NotInvertible(format!(
                "1 - ({})a^{}q^{}",
                f.sign, f.a_pow, f.q_exp
            )));
        }
        if self.is_zero() {
            return Ok(());
        }
        let negate = f.sign == -1;
        let cap = self.a_order;
        let e = f.q_exp as usize;
        self.cover_to(self.q_order);
        for idx in e..self.rows.len() {
            let (lo, hi) = self.rows.split_at_mut(idx);
            if lo[idx - e].is_empty() {
                continue;
            }
            hi[0].add_shifted(&lo[idx - e], f.a_pow, negate, cap);
        }
        self.normalize();
        Ok(())
    }

    /// In-place multiplication by an exact polynomial.
    pub fn mul_poly(&mut self, p: &Poly) {
        if let Some((c, f)) = p.as_linear() {
            self.mul_linear(f);
            if !c.is_one() {
                *self = self.scale(&c);
            }
            return;
        }
        let vq = p.min_q().unwrap_or(0).min(0);
        let va = p.min_a().unwrap_or(0).min(0);
        let orders = Orders { q: self.q_order + vq, a: self.a_order.map(|a| a + va) };
        let mut out = Self::zero(orders);
        for (a, q, c) in p.terms() {
            for (k, r) in self.rows.iter().enumerate() {
                let qq = self.q_lo + k as i64 + q;
                if r.is_empty() || qq > orders.q {
                    continue;
                }
                let mut term = r.clone();
                term.scale(c);
                out.row_mut(qq).add_shifted(&term, a, false, orders.a);
            }
        }
        out.normalize();
        *self = out;
    }

    /// In-place division by rows `(q_exp >= 1, row)` of a divisor with unit
    /// constant term `c0`.
    fn div_by_rows(&mut self, c0: &BigInt, rest: &[(usize, Row)]) {
        if self.is_zero() {
            return;
        }
        let cap = self.a_order;
        self.cover_to(self.q_order);
        let neg_unit = c0.is_negative();
        if neg_unit {
            for r in self.rows.iter_mut() {
                r.negate();
            }
        }
        for idx in 0..self.rows.len() {
            let (lo, hi) = self.rows.split_at_mut(idx);
            for (e, d) in rest {
                if *e > idx || lo[idx - e].is_empty() {
                    continue;
                }
                let mut t = Row::default();
                t.add_product(d, &lo[idx - e], cap);
                hi[0].add_shifted(&t, 0, !neg_unit, cap);
            }
        }
        self.normalize();
    }

    /// In-place division by an exact polynomial whose constant term is ±1 and
    /// whose other terms have `q_exp >= 1`, `a_exp >= 0`.
    pub fn div_poly(&mut self, p: &Poly) -> Result<()> {
        if let Some((c, f)) = p.as_linear() {
            if c.abs().is_one() && f.q_invertible() {
                self.div_linear(f)?;
                if c.is_negative() {
                    *self = -&*self;
                }
                return Ok(());
            }
        }
        let c0 = p.coeff(0, 0);
        let ok = c0.abs().is_one()
            && p.terms().all(|(a, q, _)| (a, q) == (0, 0) || (q >= 1 && a >= 0));
        if !ok {
            return Err(Error::NotInvertible(format!("polynomial with {} terms", p.len())));
        }
        let mut rest: Vec<(usize, Row)> = Vec::new();
        for (a, q, c) in p.terms() {
            if q == 0 {
                continue;
            }
            let r = Row::constant(c.clone(), a);
            match rest.iter_mut().find(|(e, _)| *e == q as usize) {
                Some((_, row)) => row.add_shifted(&r, 0, false, None),
                None => rest.push((q as usize, r)),
            }
        }
        self.div_by_rows(&c0, &rest);
        Ok(())
    }

    /// Multiplicative inverse; requires the constant term to be ±1 and all
    /// other terms to have `q_exp >= 1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coeff(0, 0);
        let head_ok = self.q_lo == 0
            && self.rows.first().is_some_and(|r| r.lo == 0 && r.c.len() == 1)
            && c0.abs().is_one();
        if !head_ok {
            return Err(Error::NotInvertible(
                "constant term must be ±1 with all other terms of positive q-degree".into(),
            ));
        }
        if self.a_valuation().unwrap_or(0) < 0 && self.a_order.is_some() {
            return Err(Error::NotInvertible("negative a-exponent under an a bound".into()));
        }
        let rest: Vec<(usize, Row)> = self
            .rows
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, r)| !r.is_empty())
            .map(|(e, r)| (e, r.clone()))
            .collect();
        let mut out = Self::one(self.orders());
        out.div_by_rows(&c0, &rest);
        Ok(out)
    }

    /// Maps each term `a^i q^j` to `a^i q^(m j + d i)`.
    ///
    /// The q-order never grows: terms beyond the original order are dropped,
    /// so callers wanting order N after `q -> q^m` can build the input at
    /// order `ceil(N / m)`.
    pub fn substitute(&self, a_shift: i64, q_scale: i64) -> Self {
        assert!(a_shift >= 0 && q_scale >= 1, "substitute needs d >= 0, m >= 1");
        let a_min = self.a_valuation().unwrap_or(0).min(0);
        let q = self.q_order.min(q_scale * self.q_order + a_shift * a_min);
        let orders = Orders { q, a: self.a_order };
        Self::from_terms(
            self.terms().map(|(a, j, c)| (a, q_scale * j + a_shift * a, c.clone())),
            orders,
        )
    }

    /// Specialises `a` at 0, 1 or `q^t` (t >= 0).
    ///
    /// With a bounded a-order the result of `One` only covers the stored
    /// terms; `QPower(t)` shrinks the q-order to what the a bound certifies.
    pub fn eval_a(&self, at: AValue) -> Result<Self> {
        match at {
            AValue::Zero => {
                if self.a_valuation().unwrap_or(0) < 0 {
                    return Err(Error::NegativeAPower);
                }
                Ok(Self::from_terms(
                    self.terms().filter(|t| t.0 == 0).map(|(_, q, c)| (0, q, c.clone())),
                    Orders::univariate(self.q_order),
                ))
            }
            AValue::One => {
                let mut s = Self::zero(Orders::univariate(self.q_order));
                s.q_lo = self.q_lo;
                s.rows = self.rows.iter().map(|r| Row::constant(r.total(), 0)).collect();
                s.normalize();
                Ok(s)
            }
            AValue::QPower(t) => {
                if t < 0 {
                    return Err(Error::Unsupported("eval_a at a negative power of q".into()));
                }
                let mut q = self.q_order;
                if let Some(a) = self.a_order {
                    let v = self.q_valuation().unwrap_or(0).min(0);
                    q = q.min(v + t * (a + 1) - 1);
                }
                Ok(Self::from_terms(
                    self.terms().map(|(a, j, c)| (0, j + t * a, c.clone())),
                    Orders::univariate(q),
                ))
            }
        }
    }

    /// First disagreement inside the common box, smallest q then smallest a.
    pub fn first_difference(&self, other: &Self) -> Option<Difference> {
        let o = self.orders().min(other.orders());
        let lo = match (self.q_valuation(), other.q_valuation()) {
            (None, None) => return None,
            (Some(x), None) | (None, Some(x)) => x,
            (Some(x), Some(y)) => x.min(y),
        };
        let empty = Row::default();
        for q in lo..=o.q {
            let x = self.row(q).unwrap_or(&empty);
            let y = other.row(q).unwrap_or(&empty);
            if x == y {
                continue;
            }
            let a_lo = match (x.is_empty(), y.is_empty()) {
                (true, _) => y.lo,
                (_, true) => x.lo,
                _ => x.lo.min(y.lo),
            };
            let a_hi = x.hi().max(y.hi());
            for a in a_lo..=a_hi {
                if o.a.is_some_and(|cap| a > cap) {
                    break;
                }
                let cx = x.get(a).cloned().unwrap_or_default();
                let cy = y.get(a).cloned().unwrap_or_default();
                if cx != cy {
                    return Some(Difference { a_exp: a, q_exp: q, lhs: cx, rhs: cy });
                }
            }
        }
        None
    }
}

impl PartialEq for TruncatedSeries {
    /// Equality up to the common truncation box.
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add_scaled(rhs, false)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add_scaled(rhs, true)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        let mut s = self.clone();
        for r in s.rows.iter_mut() {
            r.negate();
        }
        s
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $f(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $f(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, a: i64, q: i64) -> fmt::Result {
    match a {
        0 => {}
        1 => write!(f, "a")?,
        _ => write!(f, "a^{a}")?,
    }
    match q {
        0 => Ok(()),
        1 => write!(f, "q"),
        _ => write!(f, "q^{q}"),
    }
}

impl fmt::Display for TruncatedSeries {
    /// Terms in increasing q then a, e.g. `1 -1q -1q^2 +1q^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (a, q, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            let sign = if c.is_negative() { "-" } else if n > 0 { "+" } else { "" };
            write!(f, "{sign}{}", c.abs())?;
            fmt_monomial(f, a, q)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
