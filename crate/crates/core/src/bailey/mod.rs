//! The parametrized Bailey pair `(alpha_{d,k,m}, beta_{d,k,n})`.
//!
//! `beta` is computed from the defining relation
//! `beta_n = sum_{r<=n} alpha_r / ((q;q)_{n-r} (aq;q)_{n+r})`; closed forms
//! are provided separately and cross-checked against it.

mod insert;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::report::{Checker, VerificationReport};
use crate::series::{HalfExponent, Orders, TruncatedSeries};
use crate::term::{Base, Term};

pub use insert::{alpha_sum, insert, insert_with, Transform};

/// A `(d, k)` pair with `lambda = d(2k + 1 - 3d)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DKParams {
    pub d: i64,
    pub k: i64,
    pub lambda: i64,
}

impl DKParams {
    /// Pairs with a known closed form for beta.
    pub const SUPPORTED: [(i64, i64); 10] =
        [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (3, 5), (4, 6)];

    pub fn new(d: i64, k: i64) -> Result<Self> {
        if d < 1 || k < 1 {
            return Err(Error::UnsupportedParams { d, k });
        }
        Ok(DKParams { d, k, lambda: d * (2 * k + 1 - 3 * d) / 2 })
    }

    /// Coefficient of `r^2` in the q-exponent of `alpha_{d,k,dr}`.
    pub fn alpha_quadratic(&self) -> HalfExponent {
        HalfExponent::halves(2 * self.d * self.k - 2 * self.d * self.d + self.d)
    }
}

/// `alpha_{d,k,m}(a, q^scale)` as an unexpanded term; `None` when `d` does not
/// divide `m`.
pub fn alpha_term<'a>(p: &DKParams, m: u64, scale: i64) -> Option<Term<'a>> {
    let (d, m) = (p.d, m as i64);
    if m % d != 0 {
        return None;
    }
    let r = m / d;
    if r == 0 {
        return Some(Term::new());
    }
    let e = p.alpha_quadratic() * (r * r) - HalfExponent::halves(d * r);
    Some(
        Term::new()
            .sign(r)
            .a((p.k - d) * r)
            .q_half(e * scale)
            .times_linear(crate::series::LinearFactor::new(1, 1, 2 * d * r * scale))
            .poch(Base::aq(d * scale), d * scale, r - 1)
            .over_poch(Base::q(d * scale), d * scale, r),
    )
}

pub fn alpha(p: &DKParams, m: u64, orders: Orders) -> Result<TruncatedSeries> {
    match alpha_term(p, m, 1) {
        Some(t) => t.build(orders),
        None => Ok(TruncatedSeries::zero(orders)),
    }
}

pub fn beta_definitional(p: &DKParams, n: u64, orders: Orders) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::zero(orders);
    for r in (0..=n).step_by(p.d as usize) {
        let n = n as i64;
        let r = r as i64;
        let t = alpha_term(p, r as u64, 1)
            .expect("r is a multiple of d")
            .over_poch(Base::q(1), 1, n - r)
            .over_poch(Base::aq(1), 1, n + r);
        s = &s + &t.build(orders)?;
    }
    Ok(s)
}

fn sum_terms<'a, F>(range: impl Iterator<Item = i64>, orders: Orders, mut f: F) -> Result<TruncatedSeries>
where
    F: FnMut(i64) -> Term<'a>,
{
    let mut s = TruncatedSeries::zero(orders);
    for r in range {
        s = &s + &f(r).build(orders)?;
    }
    Ok(s)
}

/// Closed forms for `(d, k)` in {(2,4), (2,1), (3,3), (3,5), (4,6)}.
pub fn beta_closed(p: &DKParams, n: u64, orders: Orders) -> Result<TruncatedSeries> {
    let n = n as i64;
    let a = Base::aq(0);
    match (p.d, p.k) {
        (2, 4) => sum_terms(0..=n / 2, orders, |r| {
            Term::new()
                .a(r)
                .q(2 * r * r)
                .over_poch(Base::q(2), 2, r)
                .over_poch(Base::q(1), 1, n - 2 * r)
                .over_poch(Base::aq(1), 2, n)
        }),
        (2, 1) => sum_terms(0..=n / 2, orders, |r| {
            Term::new()
                .q(n * (n - 1) / 2)
                .sign(r)
                .a(-r)
                .q(r * r - 2 * n * r)
                .over_poch(Base::q(2), 2, r)
                .over_poch(Base::q(1), 1, n - 2 * r)
                .over_poch(Base::aq(1), 2, n)
        }),
        (3, 3) => sum_terms(0..=n / 3, orders, |r| {
            Term::new()
                .sign(r)
                .q_half(HalfExponent::halves(3 * r * r - 3 * r))
                .poch(a, 3, n - r)
                .over_poch(Base::q(3), 3, r)
                .over_poch(Base::q(1), 1, n - 3 * r)
                .over_poch(a, 1, 2 * n)
        }),
        (3, 5) => sum_terms(0..=n / 3, orders, |r| {
            Term::new()
                .a(r)
                .q(3 * r * r)
                .poch(a, 3, n - r)
                .over_poch(Base::q(3), 3, r)
                .over_poch(Base::q(1), 1, n - 3 * r)
                .over_poch(a, 1, 2 * n)
        }),
        (4, 6) if n % 2 == 0 => {
            let m = n / 2;
            sum_terms(0..=m, orders, |r| {
                Term::new()
                    .sign(m + r)
                    .q(r * r - m * m + r - 2 * m * r)
                    .poch(a, 4, m + r)
                    .over_poch(a, 1, 4 * m)
                    .over_poch(Base::q(1), 1, 2 * r)
                    .over_poch(Base::q(2), 2, m - r)
            })
        }
        (4, 6) => {
            let m = n / 2;
            sum_terms(0..=m, orders, |r| {
                Term::new()
                    .sign(m + r)
                    .q(r * r - m * m + r - 2 * m - 2 * m * r)
                    .poch(a, 4, m + r + 1)
                    .over_poch(a, 1, 4 * m + 2)
                    .over_poch(Base::q(1), 1, 2 * r + 1)
                    .over_poch(Base::q(2), 2, m - r)
            })
        }
        (d, k) => Err(Error::UnsupportedParams { d, k }),
    }
}

/// Single-product forms for the remaining pairs in [`DKParams::SUPPORTED`]:
/// (1,1), (1,2), (2,2), (2,3), (3,4).
pub fn beta_classical(p: &DKParams, n: u64, orders: Orders) -> Result<TruncatedSeries> {
    let n = n as i64;
    let t = match (p.d, p.k) {
        (1, 1) => Term::new().times_int(i64::from(n == 0)),
        (1, 2) => Term::new().over_poch(Base::q(1), 1, n),
        (2, 2) => Term::new()
            .q(n * (n - 1) / 2)
            .over_poch(Base::aq(1), 2, n)
            .over_poch(Base::q(1), 1, n),
        (2, 3) => Term::new().over_poch(Base::aq(1), 2, n).over_poch(Base::q(1), 1, n),
        (3, 4) => Term::new()
            .poch(Base::aq(0), 3, n)
            .over_poch(Base::aq(0), 1, 2 * n)
            .over_poch(Base::q(1), 1, n),
        (d, k) => return Err(Error::UnsupportedParams { d, k }),
    };
    t.build(orders)
}

/// The closed form if one exists, otherwise the single-product form.
pub fn beta_reference(p: &DKParams, n: u64, orders: Orders) -> Result<TruncatedSeries> {
    match beta_closed(p, n, orders) {
        Err(Error::UnsupportedParams { .. }) => beta_classical(p, n, orders),
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BetaSource {
    Definitional,
    Closed,
}

type Cache = Mutex<HashMap<(u64, Orders), Arc<TruncatedSeries>>>;

/// Memoized `beta_n` for one pair; safe to share between threads.
pub struct BetaSequence {
    pub params: DKParams,
    pub source: BetaSource,
    cache: Cache,
}

impl BetaSequence {
    pub fn new(params: DKParams, source: BetaSource) -> Self {
        BetaSequence { params, source, cache: Mutex::default() }
    }

    pub fn get(&self, n: u64, orders: Orders) -> Result<Arc<TruncatedSeries>> {
        if let Some(s) = self.cache.lock().unwrap().get(&(n, orders)) {
            return Ok(s.clone());
        }
        let s = Arc::new(match self.source {
            BetaSource::Definitional => beta_definitional(&self.params, n, orders)?,
            BetaSource::Closed => beta_reference(&self.params, n, orders)?,
        });
        self.cache.lock().unwrap().insert((n, orders), s.clone());
        Ok(s)
    }
}

/// Memoized `alpha_m` for one pair.
pub struct AlphaSequence {
    pub params: DKParams,
    cache: Cache,
}

impl AlphaSequence {
    pub fn new(params: DKParams) -> Self {
        AlphaSequence { params, cache: Mutex::default() }
    }

    pub fn get(&self, m: u64, orders: Orders) -> Result<Arc<TruncatedSeries>> {
        if let Some(s) = self.cache.lock().unwrap().get(&(m, orders)) {
            return Ok(s.clone());
        }
        let s = Arc::new(alpha(&self.params, m, orders)?);
        self.cache.lock().unwrap().insert((m, orders), s.clone());
        Ok(s)
    }
}

/// Compares `candidate(n)` with the definitional beta for every `n <= n_max`.
pub fn verify_beta_against<F>(
    p: &DKParams,
    n_max: u64,
    orders: Orders,
    target: &str,
    candidate: F,
) -> Result<VerificationReport>
where
    F: Fn(u64) -> Result<TruncatedSeries>,
{
    let mut check = Checker::new(target);
    for n in 0..=n_max {
        let def = beta_definitional(p, n, orders)?;
        let other = candidate(n)?;
        check.compare(format_args!("n={n}"), &def, &other);
    }
    Ok(check.finish(orders))
}

/// Recomputes beta definitionally and from its closed form for `n <= n_max`.
pub fn verify_bailey_pair(p: &DKParams, n_max: u64, orders: Orders) -> Result<VerificationReport> {
    let target = format!("bailey d={} k={}", p.d, p.k);
    verify_beta_against(p, n_max, orders, &target, |n| beta_reference(p, n, orders))
}

#[cfg(test)]
mod tests;
