use num_bigint::BigInt;
use num_integer::Integer;

use super::{HalfExponent, LinearFactor, Orders, TruncatedSeries};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(u64),
    Infinite,
}

/// `prod_{j < length} (1 - sign * a^a_power * q^(q_offset + j * q_step))`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PochhammerSpec {
    pub sign: i8,
    pub a_power: i64,
    pub q_offset: i64,
    pub q_step: i64,
    pub length: Length,
}

impl PochhammerSpec {
    pub fn new(sign: i8, a_power: i64, q_offset: i64, q_step: i64, length: Length) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        assert!(a_power >= 0 && q_step >= 1, "need a_power >= 0 and q_step >= 1");
        PochhammerSpec { sign, a_power, q_offset, q_step, length }
    }

    /// `(q^offset; q^step)_n`
    pub fn q(offset: i64, step: i64, n: u64) -> Self {
        Self::new(1, 0, offset, step, Length::Finite(n))
    }

    /// `(q^offset; q^step)_inf`
    pub fn q_inf(offset: i64, step: i64) -> Self {
        Self::new(1, 0, offset, step, Length::Infinite)
    }

    pub fn with_length(self, length: Length) -> Self {
        PochhammerSpec { length, ..self }
    }

    pub fn factor(&self, j: u64) -> LinearFactor {
        LinearFactor::new(self.sign, self.a_power, self.q_offset + j as i64 * self.q_step)
    }

    /// The product continuing after `by` factors.
    pub fn skip(&self, by: u64) -> Self {
        let length = match self.length {
            Length::Finite(n) => Length::Finite(n.saturating_sub(by)),
            Length::Infinite => Length::Infinite,
        };
        PochhammerSpec { q_offset: self.q_offset + by as i64 * self.q_step, length, ..*self }
    }

    fn check_truncates(&self) -> Result<()> {
        if self.length == Length::Infinite && self.q_offset <= 0 && self.a_power == 0 {
            return Err(Error::NonTruncating(format!(
                "offset {} with no power of a",
                self.q_offset
            )));
        }
        Ok(())
    }

    /// Multiplies (or divides) `s` by this product in place.
    pub fn apply(&self, s: &mut TruncatedSeries, divide: bool) -> Result<()> {
        self.check_truncates()?;
        let mut j = 0u64;
        loop {
            if let Length::Finite(n) = self.length {
                if j >= n {
                    break;
                }
            } else {
                // later factors have larger q-exponent and cannot reach the box
                let f = self.factor(j);
                let Some(vq) = s.q_valuation() else { break };
                if f.q_exp > 0 && vq + f.q_exp > s.q_order() {
                    break;
                }
                if let (Some(cap), Some(va)) = (s.a_order(), s.a_valuation()) {
                    if self.a_power > 0 && va + self.a_power > cap && f.q_exp > 0 {
                        break;
                    }
                }
            }
            let f = self.factor(j);
            if divide {
                s.div_linear(f)?;
            } else {
                s.mul_linear(f);
            }
            j += 1;
        }
        Ok(())
    }
}

/// Expands a Pochhammer product to the given box.
pub fn pochhammer(spec: &PochhammerSpec, orders: Orders) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::one(orders);
    spec.apply(&mut s, false)?;
    Ok(s)
}

/// `1 / spec` with `length` given as a signed integer; a negative length
/// yields the zero series.
pub fn pochhammer_recip(spec: &PochhammerSpec, length: i64, orders: Orders) -> Result<TruncatedSeries> {
    if length < 0 {
        return Ok(TruncatedSeries::zero(orders));
    }
    let spec = spec.with_length(Length::Finite(length as u64));
    let mut s = TruncatedSeries::one(orders);
    spec.apply(&mut s, true)?;
    Ok(s)
}

/// `sum_{n in Z} (-1)^n q^(A n^2 + B n)` for `A > 0`.
pub fn theta_sum(a: HalfExponent, b: HalfExponent, q_order: i64) -> Result<TruncatedSeries> {
    if a.numerator <= 0 {
        return Err(Error::Unsupported("theta_sum needs A > 0".into()));
    }
    // A n^2 + B n is integral for all n iff A + B is
    (a + b).to_int()?;
    let exp = |n: i64| (a.numerator * n * n + b.numerator * n) / 2;
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        loop {
            let e = exp(n);
            // past the vertex the exponent only grows
            let past_vertex = 2 * a.numerator * n * dir + b.numerator * dir >= 0;
            if e > q_order && past_vertex {
                break;
            }
            if e <= q_order {
                let c = if n.is_even() { 1 } else { -1 };
                terms.push((0, e, BigInt::from(c)));
            }
            n += dir;
        }
    }
    Ok(TruncatedSeries::from_terms(terms, Orders::univariate(q_order)))
}

/// `(q^x, q^y, q^m; q^m)_inf`
pub fn triple_product(x: i64, y: i64, m: i64, q_order: i64) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::one(Orders::univariate(q_order));
    for off in [x, y, m] {
        PochhammerSpec::q_inf(off, m).apply(&mut s, false)?;
    }
    Ok(s)
}
