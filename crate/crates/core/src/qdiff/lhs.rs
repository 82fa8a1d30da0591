use num_bigint::BigInt;

use super::{verify_system, FamilyIndex};
use crate::cutoff::{sum_indices, Quadratic, Q};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::series::{HalfExponent, Orders, Poly, TruncatedSeries};
use crate::term::{Base, Term};

/// `(d, k)` with a closed-form `F_{d,k,i}`.
pub const F_FAMILIES: [(i64, i64); 6] = [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (3, 5)];

fn poly(terms: &[(i64, i64, i64)]) -> Poly {
    terms
        .iter()
        .fold(Poly::zero(), |p, &(c, a, q)| p + Poly::monomial(BigInt::from(c), a, q))
}

/// Summand `(n, r)` of `F_{d,k,i}`; single sums only use `r = 0`.
fn f_term<'a>(d: i64, k: i64, i: i64, n: i64, r: i64) -> Term<'a> {
    let t = Term::new();
    match (d, k, i) {
        (2, 2, 1) => t
            .a(n)
            .q_half(HalfExponent::halves(3 * n * n + 3 * n))
            .over_poch(Base::aq(1), 2, n + 1)
            .over_poch(Base::q(1), 1, n),
        (2, 2, 2) => t
            .a(n)
            .q_half(HalfExponent::halves(3 * n * n - n))
            .over_poch(Base::aq(1), 2, n)
            .over_poch(Base::q(1), 1, n),
        (2, 3, _) => {
            let (e, len) = [(2 * n, n + 1), (n, n + 1), (0, n)][(i - 1) as usize];
            t.a(n).q(n * n + e).over_poch(Base::aq(1), 2, len).over_poch(Base::q(1), 1, n)
        }
        (2, 4, _) => {
            let (e, len) = [(2 * n + 2 * r, n + 1), (2 * n + 2 * r, n + 1), (2 * r, n), (0, n)][(i - 1) as usize];
            let t = t
                .a(n + r)
                .q(n * n + 2 * r * r + e)
                .over_poch(Base::aq(1), 2, len)
                .over_poch(Base::q(1), 1, n - 2 * r)
                .over_poch(Base::q(2), 2, r);
            if i == 2 {
                t.times_poly(poly(&[(1, 0, 0), (1, 1, 2 * r + 2)]))
            } else {
                t
            }
        }
        (3, 3, _) => {
            let t = t.sign(r).over_poch(Base::q(1), 1, n - 3 * r).over_poch(Base::q(3), 3, r);
            match i {
                1 => t
                    .a(n)
                    .q(n * n + 3 * n)
                    .q_half(HalfExponent::halves(3 * r * (r - 1)))
                    .poch(Base::aq(3), 3, n - r)
                    .over_poch(Base::aq(1), 1, 2 * n + 2),
                2 => t
                    .a(n - 1)
                    .q(n * n)
                    .q_half(HalfExponent::halves(3 * r * (r - 3)))
                    .poch(Base::aq(0), 3, n - r)
                    .times_poly(poly(&[(1, 0, 0), (1, 1, 3 * r), (-1, 0, 3 * r)]))
                    .over_poch(Base::aq(0), 1, 2 * n),
                // denominator (a;q)_{2n}: with (a;q)_{2n-1} the i = 3 relation fails
                _ => t
                    .a(n)
                    .q(n * n)
                    .q_half(HalfExponent::halves(3 * r * (r - 1)))
                    .poch(Base::aq(0), 3, n - r)
                    .over_poch(Base::aq(0), 1, 2 * n),
            }
        }
        (3, 4, 4) => t
            .a(n)
            .q(n * n)
            .poch(Base::aq(0), 3, n)
            .over_poch(Base::aq(0), 1, 2 * n)
            .over_poch(Base::q(1), 1, n),
        (3, 4, _) => {
            let (e, len) = [(3 * n, 2 * n + 2), (2 * n, 2 * n + 2), (n, 2 * n + 1)][(i - 1) as usize];
            t.a(n)
                .q(n * n + e)
                .poch(Base::aq(3), 3, n)
                .over_poch(Base::aq(1), 1, len)
                .over_poch(Base::q(1), 1, n)
        }
        (3, 5, _) => {
            let t = t.over_poch(Base::q(1), 1, n - 3 * r).over_poch(Base::q(3), 3, r);
            match i {
                1 | 2 => {
                    let t = t
                        .a(n + r)
                        .q(n * n + 3 * r * r + 3 * n + 3 * r)
                        .poch(Base::aq(3), 3, n - r)
                        .over_poch(Base::aq(1), 1, 2 * n + 2);
                    if i == 2 {
                        t.times_poly(poly(&[(1, 0, 0), (1, 1, 3 * r + 3)]))
                    } else {
                        t
                    }
                }
                3 => t
                    .a(n + r - 1)
                    .q(n * n + 3 * r * r - 3)
                    .poch(Base::aq(0), 3, n - r)
                    .times_poly(poly(&[(1, 0, 3 * r), (1, 1, 6 * r + 3), (-1, 0, 0)]))
                    .over_poch(Base::aq(0), 1, 2 * n),
                _ => t
                    .a(n + r)
                    .q(n * n + 3 * r * r + if i == 4 { 3 * r } else { 0 })
                    .poch(Base::aq(0), 3, n - r)
                    .over_poch(Base::aq(0), 1, 2 * n),
            }
        }
        _ => unreachable!("checked by f_family"),
    }
}

/// Every summand has q-valuation at least `n^2 - 3`.
fn f_bound() -> Quadratic {
    Quadratic::new(Q::from(1), Q::from(0), Q::from(-3))
}

fn sum_f<'a>(orders: Orders, r_step: Option<i64>, term: impl Fn(i64, i64) -> Term<'a>) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::zero(orders);
    sum_indices(f_bound(), 0, orders.q, "F sum", |n| {
        let r_max = r_step.map_or(0, |step| n / step);
        for r in 0..=r_max {
            s = &s + &term(n, r).build(orders)?;
        }
        Ok(())
    })?;
    if s.q_valuation().unwrap_or(0) < 0 || s.a_valuation().unwrap_or(0) < 0 {
        return Err(Error::Unsupported("F sum has negative exponents".into()));
    }
    Ok(s)
}

pub fn f_family(idx: FamilyIndex, orders: Orders) -> Result<TruncatedSeries> {
    let FamilyIndex { d, k, i } = idx;
    if !F_FAMILIES.contains(&(d, k)) {
        return Err(Error::UnsupportedParams { d, k });
    }
    let r_step = match (d, k) {
        (2, 4) => Some(2),
        (3, 3) | (3, 5) => Some(3),
        _ => None,
    };
    sum_f(orders, r_step, |n, r| f_term(d, k, i, n, r))
}

/// `sum a^n q^{(3n^2 + n)/2} / ((aq;q^2)_{n+1} (q;q)_n)`, equal to `F_{2,2,2}`.
pub fn f_star_222(orders: Orders) -> Result<TruncatedSeries> {
    sum_f(orders, None, |n, _| {
        Term::new()
            .a(n)
            .q_half(HalfExponent::halves(3 * n * n + n))
            .over_poch(Base::aq(1), 2, n + 1)
            .over_poch(Base::q(1), 1, n)
    })
}

pub fn verify_f_system(d: i64, k: i64, orders: Orders) -> Result<VerificationReport> {
    if !F_FAMILIES.contains(&(d, k)) {
        return Err(Error::UnsupportedParams { d, k });
    }
    verify_system(&format!("F system d={d} k={k}"), d, k, orders, |i, o| f_family(FamilyIndex { d, k, i }, o))
}
