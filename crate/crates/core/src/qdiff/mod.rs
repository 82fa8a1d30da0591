//! The `Q_{d,k,i}` family, its q-difference system and product sides, and
//! the closed-form `F_{d,k,i}` sum sides.

mod lhs;

use num_rational::Ratio;

use crate::cutoff::{sum_indices, Quadratic, Q};
use crate::error::{Error, Result};
use crate::report::{Checker, VerificationReport};
use crate::series::{theta_sum, triple_product, AValue, HalfExponent, LinearFactor, Orders, PochhammerSpec, TruncatedSeries};
use crate::term::{Base, Term};

pub use lhs::{f_family, f_star_222, verify_f_system, F_FAMILIES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyIndex {
    pub d: i64,
    pub k: i64,
    pub i: i64,
}

impl FamilyIndex {
    pub fn new(d: i64, k: i64, i: i64) -> Result<Self> {
        if d < 1 || k < 1 || i < 1 || i > k {
            return Err(Error::InvalidIndex { d, k, i });
        }
        Ok(FamilyIndex { d, k, i })
    }

    /// Modulus `(2k+1)d` of the product side.
    pub fn modulus(&self) -> i64 {
        (2 * self.k + 1) * self.d
    }
}

/// `(aq;q)_inf Q_{d,k,i}(a)`.
fn q_sum(idx: FamilyIndex, orders: Orders) -> Result<TruncatedSeries> {
    let FamilyIndex { d, k, i } = idx;
    let bound = Quadratic::new(Ratio::new(2 * d * k + d, 2), Ratio::new((2 * k - 2 * i + 1) * d, 2), Q::from(0));
    let mut s = TruncatedSeries::zero(orders);
    sum_indices(bound, 0, orders.q, "Q sum", |n| {
        let t = Term::new()
            .sign(n)
            .a(k * n)
            .q_half(HalfExponent::halves((2 * d * k + d) * n * n + (2 * k - 2 * i + 1) * d * n))
            .times_linear(LinearFactor::new(1, i, (2 * n + 1) * d * i))
            .poch(Base::aq(d), d, n)
            .over_poch(Base::q(d), d, n);
        s = &s + &t.build(orders)?;
        Ok(())
    })?;
    Ok(s)
}

pub fn q_family(idx: FamilyIndex, orders: Orders) -> Result<TruncatedSeries> {
    Term::new().over_inf(Base::aq(1), 1).times_series(move |o| q_sum(idx, o)).build(orders)
}

/// `Q_{d,k,k}` written with `(1 - a q^{2dn}) (a;q^d)_n / (1 - a)`.
pub fn q_kk_alternate(d: i64, k: i64, orders: Orders) -> Result<TruncatedSeries> {
    FamilyIndex::new(d, k, k)?;
    let sum = move |o: Orders| {
        let bound = Quadratic::new(Ratio::new(2 * d * k + d, 2), Ratio::new(-d, 2), Q::from(0));
        let mut s = TruncatedSeries::zero(o);
        sum_indices(bound, 0, o.q, "alternate Q sum", |n| {
            let t = Term::new()
                .sign(n)
                .a(k * n)
                .q_half(HalfExponent::halves((2 * d * k + d) * n * n - d * n))
                .times_linear(LinearFactor::new(1, 1, 2 * d * n))
                .poch(Base::aq(0), d, n)
                .over_linear(LinearFactor::new(1, 1, 0))
                .over_poch(Base::q(d), d, n);
            s = &s + &t.build(o)?;
            Ok(())
        })?;
        Ok(s)
    };
    Term::new().over_inf(Base::aq(1), 1).times_series(sum).build(orders)
}

/// Checks
/// `G_1(a) = G_k(aq^d) / (aq;q)_{d-1}` and
/// `G_i(a) = G_{i-1}(a) + a^{i-1} q^{(i-1)d} G_{k-i+1}(aq^d) / (aq;q)_{d-1}`
/// for a family `G_i = family(i, orders)`, `1 <= i <= k`.
pub fn verify_system<F>(target: &str, d: i64, k: i64, orders: Orders, family: F) -> Result<VerificationReport>
where
    F: Fn(i64, Orders) -> Result<TruncatedSeries>,
{
    let mut check = Checker::new(target);
    let vals = (1..=k).map(|i| family(i, orders)).collect::<Result<Vec<_>>>()?;
    // a -> aq^d never lowers q-exponents, so the shifted series keep the box
    let shifted: Vec<_> = vals.iter().map(|v| v.substitute(d, 1)).collect();
    for i in 1..=k {
        let g = &shifted[(k - i) as usize];
        let mut rhs = Term::new()
            .a(i - 1)
            .q((i - 1) * d)
            .over_poch(Base::aq(1), 1, d - 1)
            .times_series(|o| Ok(g.truncate(o)))
            .build(orders)?;
        if i > 1 {
            rhs = &vals[(i - 2) as usize] + &rhs;
        }
        check.compare(format_args!("i={i}"), &vals[(i - 1) as usize], &rhs);
    }
    Ok(check.finish(orders))
}

pub fn verify_q_system(d: i64, k: i64, orders: Orders) -> Result<VerificationReport> {
    FamilyIndex::new(d, k, 1)?;
    verify_system(&format!("Q system d={d} k={k}"), d, k, orders, |i, o| q_family(FamilyIndex { d, k, i }, o))
}

/// `(q^{id}, q^{(2k-i+1)d}, q^{(2k+1)d}; q^{(2k+1)d})_inf / (q;q)_inf`
pub fn product_side(idx: FamilyIndex, q_order: i64) -> Result<TruncatedSeries> {
    let FamilyIndex { d, k, i } = idx;
    let mut s = triple_product(i * d, (2 * k - i + 1) * d, idx.modulus(), q_order)?;
    PochhammerSpec::q_inf(1, 1).apply(&mut s, true)?;
    Ok(s)
}

/// Compares `(q;q)_inf Q(1)` with the theta series and the triple product,
/// and `Q(1)` with [`product_side`].
pub fn verify_product_side(idx: FamilyIndex, q_order: i64) -> Result<VerificationReport> {
    let FamilyIndex { d, k, i } = idx;
    let mut check = Checker::new(format!("product side d={d} k={k} i={i}"));
    let q1 = q_family(idx, Orders::univariate(q_order))?.eval_a(AValue::One)?;
    let mut scaled = q1.clone();
    PochhammerSpec::q_inf(1, 1).apply(&mut scaled, false)?;
    let theta = theta_sum(
        HalfExponent::halves(2 * d * k + d),
        HalfExponent::halves(-(2 * d * k - 2 * d * i + d)),
        q_order,
    )?;
    check.compare("theta", &scaled, &theta);
    check.compare("triple product", &theta, &triple_product(i * d, (2 * k - i + 1) * d, idx.modulus(), q_order)?);
    check.compare("product", &q1, &product_side(idx, q_order)?);
    Ok(check.finish(Orders::univariate(q_order)))
}

#[cfg(test)]
mod tests;
