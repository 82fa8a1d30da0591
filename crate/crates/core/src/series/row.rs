//! One q-row of a series: a Laurent polynomial in a stored densely.

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Row {
    /// a-exponent of `c[0]`
    pub lo: i64,
    pub c: Vec<BigInt>,
}

impl Row {
    pub fn constant(v: BigInt, a_exp: i64) -> Row {
        let mut r = Row { lo: a_exp, c: vec![v] };
        r.trim();
        r
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// a-exponent of the last stored coefficient
    pub fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64 - 1
    }

    pub fn get(&self, a: i64) -> Option<&BigInt> {
        if a < self.lo {
            return None;
        }
        self.c.get((a - self.lo) as usize)
    }

    pub fn trim(&mut self) {
        while matches!(self.c.last(), Some(x) if x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead == self.c.len() {
            self.c.clear();
            self.lo = 0;
        } else if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i64;
        }
    }

    /// Drops coefficients with a-exponent above `cap`.
    pub fn cap(&mut self, cap: Option<i64>) {
        if let Some(cap) = cap {
            if self.is_empty() {
                return;
            }
            if cap < self.lo {
                self.c.clear();
                self.lo = 0;
            } else if cap < self.hi() {
                self.c.truncate((cap - self.lo + 1) as usize);
                self.trim();
            }
        }
    }

    /// Makes room for exponents `lo..=hi`.
    fn cover(&mut self, lo: i64, hi: i64) {
        if self.is_empty() {
            self.lo = lo;
            self.c = vec![BigInt::zero(); (hi - lo + 1) as usize];
            return;
        }
        if lo < self.lo {
            let extra = (self.lo - lo) as usize;
            let mut c = vec![BigInt::zero(); extra];
            c.append(&mut self.c);
            self.c = c;
            self.lo = lo;
        }
        if hi > self.hi() {
            let len = (hi - self.lo + 1) as usize;
            self.c.resize(len, BigInt::zero());
        }
    }

    /// self += sign * a^shift * src, dropping a-exponents above `cap`.
    pub fn add_shifted(&mut self, src: &Row, shift: i64, negate: bool, cap: Option<i64>) {
        if src.is_empty() {
            return;
        }
        let lo = src.lo + shift;
        let mut hi = src.hi() + shift;
        if let Some(cap) = cap {
            hi = hi.min(cap);
        }
        if hi < lo {
            return;
        }
        self.cover(lo, hi);
        let off = (lo - self.lo) as usize;
        let n = (hi - lo + 1) as usize;
        for (dst, s) in self.c[off..off + n].iter_mut().zip(&src.c[..n]) {
            if negate {
                *dst -= s;
            } else {
                *dst += s;
            }
        }
        self.trim();
    }

    /// self += x * y, dropping a-exponents above `cap`.
    pub fn add_product(&mut self, x: &Row, y: &Row, cap: Option<i64>) {
        if x.is_empty() || y.is_empty() {
            return;
        }
        let lo = x.lo + y.lo;
        let mut hi = x.hi() + y.hi();
        if let Some(cap) = cap {
            hi = hi.min(cap);
        }
        if hi < lo {
            return;
        }
        self.cover(lo, hi);
        for (i, xi) in x.c.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let ai = x.lo + i as i64;
            for (j, yj) in y.c.iter().enumerate() {
                let a = ai + y.lo + j as i64;
                if a > hi {
                    break;
                }
                let idx = (a - self.lo) as usize;
                self.c[idx] += xi * yj;
            }
        }
        self.trim();
    }

    pub fn negate(&mut self) {
        for x in self.c.iter_mut() {
            *x = -std::mem::take(x);
        }
    }

    pub fn scale(&mut self, k: &BigInt) {
        for x in self.c.iter_mut() {
            *x *= k;
        }
        self.trim();
    }

    /// Sum of the coefficients.
    pub fn total(&self) -> BigInt {
        self.c.iter().sum()
    }
}
