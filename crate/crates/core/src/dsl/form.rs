//! Polynomials of degree at most two in the summation indices, with rational
//! coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cutoff::Q;

/// Keys are sorted variable lists of length 0, 1 or 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Form {
    terms: BTreeMap<Vec<String>, Q>,
}

pub type Env = HashMap<String, i64>;

impl Form {
    pub fn constant(c: Q) -> Form {
        let mut f = Form::default();
        f.add_term(Vec::new(), c);
        f
    }

    pub fn int(c: i64) -> Form {
        Form::constant(Q::from(c))
    }

    pub fn var(name: &str) -> Form {
        let mut f = Form::default();
        f.add_term(vec![name.to_string()], Q::one());
        f
    }

    fn add_term(&mut self, mut key: Vec<String>, c: Q) {
        key.sort();
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// The constant value if no variable occurs.
    pub fn as_constant(&self) -> Option<Q> {
        match self.degree() {
            0 => Some(self.terms.get(&Vec::new()).copied().unwrap_or_else(Q::zero)),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.keys().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn scale(&self, c: Q) -> Form {
        let mut f = Form::default();
        for (k, v) in &self.terms {
            f.add_term(k.clone(), *v * c);
        }
        f
    }

    /// Product, or `None` when the degree would exceed two.
    pub fn mul(&self, other: &Form) -> Option<Form> {
        if self.degree() + other.degree() > 2 {
            return None;
        }
        let mut f = Form::default();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                f.add_term([k1.clone(), k2.clone()].concat(), *v1 * *v2);
            }
        }
        Some(f)
    }

    pub fn eval(&self, env: &Env) -> Option<Q> {
        let mut s = Q::zero();
        for (k, v) in &self.terms {
            let mut t = *v;
            for x in k {
                t *= Q::from(*env.get(x)?);
            }
            s += t;
        }
        Some(s)
    }

    /// Replaces the variables bound in `env` by their values.
    pub fn partial(&self, env: &Env) -> Form {
        let mut f = Form::default();
        for (k, v) in &self.terms {
            let mut c = *v;
            let mut rest = Vec::new();
            for x in k {
                match env.get(x) {
                    Some(&val) => c *= Q::from(val),
                    None => rest.push(x.clone()),
                }
            }
            f.add_term(rest, c);
        }
        f
    }

    /// Splits as `A x^2 + B x + C` with `B` affine and `C` free of `x`.
    pub fn split(&self, x: &str) -> (Q, Form, Form) {
        let (mut a, mut b, mut c) = (Q::zero(), Form::default(), Form::default());
        for (k, v) in &self.terms {
            let n = k.iter().filter(|y| *y == x).count();
            let rest: Vec<String> = k.iter().filter(|y| *y != x).cloned().collect();
            match n {
                2 => a += *v,
                1 => b.add_term(rest, *v),
                _ => c.add_term(rest, *v),
            }
        }
        (a, b, c)
    }

    /// Substitutes the affine form `value` for `x`.
    pub fn substitute(&self, x: &str, value: &Form) -> Option<Form> {
        let (a, b, c) = self.split(x);
        let sq = value.mul(value)?.scale(a);
        Some(&(&sq + &b.mul(value)?) + &c)
    }

    /// Coefficients of a form in the single variable `x` as `(x^2, x, 1)`.
    pub fn univariate(&self, x: &str) -> Option<(Q, Q, Q)> {
        let (a, b, c) = self.split(x);
        Some((a, b.as_constant()?, c.as_constant()?))
    }

    /// Least common denominator of the coefficients.
    fn denominator(&self) -> i64 {
        self.terms.values().fold(1, |l, v| l.lcm(v.denom()))
    }
}

impl std::ops::Add for &Form {
    type Output = Form;
    fn add(self, other: &Form) -> Form {
        let mut f = self.clone();
        for (k, v) in &other.terms {
            f.add_term(k.clone(), *v);
        }
        f
    }
}

impl std::ops::Sub for &Form {
    type Output = Form;
    fn sub(self, other: &Form) -> Form {
        self + &other.scale(-Q::one())
    }
}

impl fmt::Display for Form {
    /// Integer-coefficient polynomial, over a common denominator if needed,
    /// with quadratic terms first: `n^2 + 3*n - 1`, `(3*n^2 - n)/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let den = self.denominator();
        let mut keys: Vec<&Vec<String>> = self.terms.keys().collect();
        keys.sort_by(|x, y| y.len().cmp(&x.len()).then(x.cmp(y)));
        let mut out = String::new();
        for (idx, k) in keys.iter().enumerate() {
            let c = self.terms[*k] * den;
            let c = *c.numer();
            let mono = match k.len() {
                0 => String::new(),
                1 => k[0].clone(),
                _ if k[0] == k[1] => format!("{}^2", k[0]),
                _ => format!("{}*{}", k[0], k[1]),
            };
            let sign = if c < 0 { "-" } else { "+" };
            if idx == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.abs();
            match (mono.is_empty(), a == 1) {
                (true, _) => out.push_str(&a.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{a}*{mono}")),
            }
        }
        if den == 1 {
            f.write_str(&out)
        } else if keys.len() == 1 && !out.starts_with('-') {
            write!(f, "{out}/{den}")
        } else {
            write!(f, "({out})/{den}")
        }
    }
}
